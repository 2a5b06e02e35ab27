// capforge command-line tool.
//
// Exit codes: 0 success, 1 I/O or other failure, 2 invalid input,
// 3 numerical non-convergence, 4 angle obstruction in the developed cap.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capforge/capforge.hpp"
#include "capforge/io/json.hpp"
#include "capforge/io/svg.hpp"

namespace cf = capforge;
using cf::Point2;
using cf::io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitObstruction = 4;

struct Job {
  std::string command;
  std::string shape_file, measure_file, polynomial_file;
  std::string fixture;
  std::string out_dir = ".";
  std::string c_text;
  std::string basepoint_text;
  std::string map = "joukowski";
  std::size_t depth = 11;
  std::size_t walkers = 100000;
  std::optional<std::uint64_t> seed;
  std::size_t bins = 500;
  std::size_t order = 64;
  std::size_t samples = 2048;
  std::size_t points = 16;
  double tol_closure = 1e-6;
  double cusp_tol = 1e-6;
  bool auto_measure = false;
  bool with_cap = false;
};

std::uint64_t resolve_seed(const Job& job) {
  if (job.seed) return *job.seed;
  if (const char* env = std::getenv("CAPFORGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw cf::ValidationError(std::string("CAPFORGE_SEED is not an unsigned integer: ") + env);
    }
  }
  return 1;
}

Point2 parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw cf::ValidationError("cannot parse complex number \"" + s + "\" (use re or re,im)");
  }
}

Json job_json(const Job& job, std::uint64_t seed) {
  Json j;
  j["command"] = job.command;
  j["seed"] = seed;
  if (!job.shape_file.empty()) j["shape_file"] = job.shape_file;
  if (!job.measure_file.empty()) j["measure_file"] = job.measure_file;
  if (!job.fixture.empty()) j["fixture"] = job.fixture;
  if (!job.c_text.empty()) j["c"] = job.c_text;
  j["depth"] = job.depth;
  j["walkers"] = job.walkers;
  j["bins"] = job.bins;
  j["order"] = job.order;
  j["tol_closure"] = job.tol_closure;
  return j;
}

std::string out_path(const Job& job, const std::string& name) {
  std::filesystem::create_directories(job.out_dir);
  return (std::filesystem::path(job.out_dir) / name).string();
}

/// Named shapes for --fixture.
cf::Polyline fixture_shape(const std::string& name) {
  namespace fx = cf::fixtures;
  if (name == "square") return fx::square();
  if (name == "triangle") return fx::triangle({0.0, 0.0}, {2.0, 0.0}, {0.5, 1.5});
  if (name == "l-hexagon") return fx::l_hexagon();
  if (name == "disk") return fx::regular_polygon(1024);
  if (name == "interval") return fx::interval_slit();
  if (name == "ellipse") return fx::ellipse(1.5, 1.0, 1024);
  if (name == "naive-spiral") return fx::naive_spiral_fixture();
  if (name == "harmonic-spiral") return fx::harmonic_spiral_fixture();
  throw cf::ValidationError("unknown fixture \"" + name +
                            "\" (square, triangle, l-hexagon, disk, interval, ellipse, naive-spiral, harmonic-spiral)");
}

cf::Polyline load_shape(const Job& job) {
  if (!job.fixture.empty()) return fixture_shape(job.fixture);
  if (job.shape_file.empty()) throw cf::ValidationError("give --shape FILE or --fixture NAME");
  return cf::io::parse_shape(cf::io::read_json_file(job.shape_file));
}

cf::io::SvgFigure shape_and_cap_figure(const std::string& title, const cf::Polyline& shape, const cf::CapDevelopment& cap) {
  cf::io::SvgFigure fig(title);
  fig.add_layer({"shape", shape.points(), true, "#1f77b4", "#c6dbef", 1.0});
  fig.add_layer({"cap", cap.samples, false, "#ff7f0e", "none", 1.0});
  fig.add_marker({"basepoint", shape.points().front()});
  return fig;
}

int finish_cap(const cf::CapDevelopment& cap) {
  std::printf("length %.12g  closure defect %.3e  closes %s  planar %s  winding_ok %s\n", cap.length, cap.closure_defect,
              cap.closes ? "yes" : "no", cap.planar.simple ? "yes" : "no", cap.winding_ok ? "yes" : "no");
  if (cap.obstructed()) {
    std::fprintf(stderr, "angle obstruction: some cap angle leaves (0, 2 pi]\n");
    return kExitObstruction;
  }
  return kExitOk;
}

int cmd_cap(const Job& job) {
  const std::uint64_t seed = resolve_seed(job);
  const cf::Polyline shape = load_shape(job);
  cf::BoundaryMeasure measure;
  cf::CapOptions opt;
  opt.closure_tol_rel = job.tol_closure;
  if (job.fixture == "interval") opt.check_shape = false;
  if (!job.measure_file.empty()) {
    measure = cf::io::parse_measure(cf::io::read_json_file(job.measure_file));
  } else if (job.auto_measure || !job.fixture.empty()) {
    if (job.fixture == "interval") {
      measure = cf::fixtures::slit_harmonic_measure(job.bins / 2 ? job.bins / 2 : 1);
    } else if (job.fixture == "disk" || job.fixture == "ellipse") {
      measure = cf::fixtures::uniform_measure(shape);
    } else if (shape.size() == 3) {
      measure = cf::triangle_measure(shape).measure;
    } else {
      measure = cf::fixtures::reflection_measure(shape);
    }
  } else {
    throw cf::ValidationError("give --measure FILE or --auto-measure");
  }
  const cf::CapDevelopment cap = cf::cap_boundary(shape, measure, opt);
  Json j;
  j["job"] = job_json(job, seed);
  j["shape"] = cf::io::shape_json(shape);
  j["measure"] = cf::io::measure_json(measure);
  j["cap"] = cf::io::cap_json(cap);
  cf::io::write_json_file(out_path(job, "cap.json"), j);
  shape_and_cap_figure("shape and cap", shape, cap).write(out_path(job, "cap_figure"));
  return finish_cap(cap);
}

int cmd_julia(const Job& job) {
  const std::uint64_t seed = resolve_seed(job);
  cf::PolynomialMap f = !job.polynomial_file.empty()
                            ? cf::io::parse_polynomial(cf::io::read_json_file(job.polynomial_file))
                            : cf::PolynomialMap::quadratic(parse_complex(job.c_text.empty() ? "-1" : job.c_text));
  Point2 base;
  if (!job.basepoint_text.empty()) {
    base = parse_complex(job.basepoint_text);
  } else {
    base = f.is_unicritical_quadratic() ? cf::default_basepoint(f.quadratic_c()) : Point2{f.escape_radius(), 0.0};
  }
  const cf::JuliaBoundary jb = cf::julia_boundary(f, base, job.depth);
  cf::CapOptions opt;
  opt.closure_tol_rel = job.tol_closure;
  const cf::CapDevelopment cap = cf::cap_boundary(jb.polygon, jb.measure, opt);
  const double perimeter = jb.polygon.length();
  Json diag;
  diag["vertices"] = jb.polygon.size();
  diag["base_samples"] = jb.base_samples;
  diag["basepoint"] = cf::io::point_json(base);
  diag["perimeter"] = perimeter;
  diag["shape_simple"] = cf::is_simple(jb.polygon).simple;
  diag["closure_defect_relative"] = cap.closure_defect / perimeter;
  Json j;
  j["job"] = job_json(job, seed);
  j["polynomial"] = cf::io::polynomial_json(f);
  j["diagnostics"] = diag;
  cf::io::write_json_file(out_path(job, "julia_shape.json"), cf::io::shape_json(jb.polygon));
  cf::io::write_json_file(out_path(job, "julia_measure.json"), cf::io::measure_json(jb.measure));
  j["cap"] = cf::io::cap_json(cap);
  cf::io::write_json_file(out_path(job, "julia_cap.json"), j);
  shape_and_cap_figure("filled Julia set polygon and cap", jb.polygon, cap).write(out_path(job, "julia_figure"));
  std::printf("%zu-gon, simple %s\n", jb.polygon.size(), diag["shape_simple"].get<bool>() ? "yes" : "no");
  return finish_cap(cap);
}

int cmd_harmonic_mc(const Job& job) {
  const std::uint64_t seed = resolve_seed(job);
  const cf::Polyline shape = load_shape(job);
  cf::HarmonicSampler cfg;
  cfg.walkers = job.walkers;
  cfg.seed = seed;
  const cf::HarmonicHits hits = cf::harmonic_measure_mc(shape, cfg);
  const double tol = 2.0 * cfg.eps_rel * hits.diameter;
  const cf::SampledMeasure sm = cf::measure_from_samples(hits.hits, shape, tol, cf::Binning::atoms, job.bins);
  Json report;
  report["job"] = job_json(job, seed);
  report["finished"] = hits.hits.size();
  report["discarded"] = hits.discarded;
  report["discard_rate"] = hits.discard_rate();
  report["launch_radius"] = hits.launch_radius;
  report["total_steps"] = hits.total_steps;
  if (hits.discard_rate() > 0.01) {
    report["warning"] = "more than 1% of walkers exhausted the step budget";
    std::fprintf(stderr, "warning: discard rate %.3f%%\n", 100.0 * hits.discard_rate());
  }
  if (job.fixture == "interval") {
    std::vector<double> xs;
    for (Point2 p : hits.hits) xs.push_back(p.real());
    report["ks_arcsine"] = cf::ks_statistic(xs, cf::arcsine_cdf);
  } else if (job.fixture == "disk") {
    std::vector<double> as;
    for (Point2 p : hits.hits) as.push_back(std::arg(p) < 0 ? std::arg(p) + cf::kTwoPi : std::arg(p));
    report["ks_uniform_angle"] = cf::ks_statistic(as, cf::uniform_angle_cdf);
  }
  cf::io::write_json_file(out_path(job, "harmonic_measure.json"), cf::io::measure_json(sm.measure));
  if (job.with_cap) {
    cf::CapOptions opt;
    opt.closure_tol_rel = job.tol_closure;
    opt.check_shape = job.fixture != "interval";
    const cf::CapDevelopment cap = cf::cap_boundary(shape, sm.measure, opt);
    report["cap"] = cf::io::cap_json(cap);
    shape_and_cap_figure("harmonic cap from Monte Carlo", shape, cap).write(out_path(job, "harmonic_cap_figure"));
  }
  cf::io::write_json_file(out_path(job, "harmonic_report.json"), report);
  std::printf("%zu hits, %zu discarded\n", hits.hits.size(), hits.discarded);
  return kExitOk;
}

int cmd_dev(const Job& job) {
  const std::uint64_t seed = resolve_seed(job);
  std::optional<cf::ExteriorMap> phi, finer;
  if (!job.c_text.empty()) {
    const Point2 c = parse_complex(job.c_text);
    phi = cf::bottcher_series(c, job.order);
    finer = cf::bottcher_series(c, 2 * job.order);
  } else if (job.map == "identity") {
    phi = cf::ExteriorMap::identity();
  } else if (job.map == "joukowski") {
    phi = cf::ExteriorMap::joukowski();
  } else if (job.map == "square") {
    phi = cf::square_exterior_map();
  } else {
    throw cf::ValidationError("unknown --map \"" + job.map + "\" (identity, joukowski, square)");
  }
  const std::size_t n = job.samples;
  const std::vector<Point2> curve = cf::development_curve(*phi, n);
  Json j;
  j["job"] = job_json(job, seed);
  j["closure_defect"] = std::abs(curve.back() - curve.front());
  if (finer) {
    const std::vector<Point2> fine = cf::development_curve(*finer, n);
    double diff = 0.0;
    for (std::size_t k = 0; k <= n; ++k) diff = std::max(diff, std::abs(fine[k] - curve[k]));
    j["refinement_difference"] = diff;
    j["last_coefficient"] = phi->truncation_estimate();
    j["series_decaying"] = phi->decaying();
  }
  cf::io::SvgFigure fig("image of the unit circle under g");
  fig.add_layer({"g", curve, false, "#2ca02c", "none", 1.5});
  Json cusps = Json::array();
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 z = std::polar(1.0, cf::kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    if (std::abs(phi->development_derivative(z)) < job.cusp_tol) {
      cusps.push_back(cf::io::point_json(curve[k]));
      fig.add_marker({"cusp", curve[k]});
    }
  }
  j["cusps"] = cusps;
  cf::io::write_json_file(out_path(job, "dev.json"), j);
  fig.write(out_path(job, "dev_figure"));
  std::printf("closure defect %.3e, %zu cusps\n", j["closure_defect"].get<double>(), cusps.size());
  return kExitOk;
}

int cmd_naive_cap(const Job& job) {
  const std::uint64_t seed = resolve_seed(job);
  const cf::Polyline shape = load_shape(job);
  const cf::NaiveCap nc = cf::naive_cap(shape);
  Json j;
  j["job"] = job_json(job, seed);
  j["hull"] = cf::io::shape_json(nc.hull);
  j["flaps"] = Json::array();
  for (const auto& f : nc.flaps) j["flaps"].push_back(cf::io::points_json(f.points()));
  j["development"] = cf::io::points_json(nc.development.points());
  j["measure"] = cf::io::measure_json(nc.measure);
  j["planar"] = cf::io::verdict_json(nc.planar);
  cf::io::write_json_file(out_path(job, "naive_cap.json"), j);
  cf::io::SvgFigure fig("naive cap");
  fig.add_layer({"shape", shape.points(), true, "#1f77b4", "#c6dbef", 1.0});
  fig.add_layer({"development", nc.development.points(), true, "#ff7f0e", "none", 1.0});
  if (!nc.planar.simple) fig.add_marker({"overlap", nc.planar.where});
  fig.write(out_path(job, "naive_cap_figure"));
  std::printf("%zu flaps, planar %s\n", nc.flaps.size(), nc.planar.simple ? "yes" : "no");
  return kExitOk;
}

int cmd_curvature_report(const Job& job) {
  const std::uint64_t seed = resolve_seed(job);
  cf::Polyline shape({0.0, 1.0}, false);
  cf::BoundaryMeasure measure;
  cf::CapOptions opt;
  opt.closure_tol_rel = job.tol_closure;
  const std::string which = job.fixture.empty() && job.shape_file.empty() ? "doubled-disk" : job.fixture;
  if (which == "doubled-disk") {
    shape = cf::fixtures::regular_polygon(256);
    measure = cf::fixtures::uniform_measure(shape);
  } else if (which == "interval") {
    shape = cf::fixtures::interval_slit();
    measure = cf::fixtures::slit_harmonic_measure(job.bins);
    opt.check_shape = false;
  } else if (!job.shape_file.empty()) {
    shape = load_shape(job);
    if (job.measure_file.empty()) throw cf::ValidationError("curvature-report: --shape needs --measure");
    measure = cf::io::parse_measure(cf::io::read_json_file(job.measure_file));
  } else {
    throw cf::ValidationError("curvature-report: fixture must be doubled-disk or interval, or give --shape/--measure");
  }
  const cf::CapDevelopment cap = cf::cap_boundary(shape, measure, opt);
  const double L = shape.length();
  Json rows = Json::array();
  for (std::size_t i = 0; i < job.points; ++i) {
    // Midpoints of equal arclength cells keep away from vertices.
    const double t = (static_cast<double>(i) + 0.37) * L / static_cast<double>(job.points);
    Json row;
    row["t"] = t;
    try {
      const cf::CurvatureEstimate est = cf::curvature_limit_estimate(shape, cap, t);
      const double ref = cf::reference_curvature_density(shape, measure, t);
      row["estimate"] = est.estimate;
      row["reference"] = ref;
      row["relative_error"] = ref != 0.0 ? std::abs(est.estimate - ref) / std::abs(ref) : std::abs(est.estimate);
      row["reliable"] = est.reliable;
    } catch (const cf::ValidationError& e) {
      row["error"] = e.what();
    }
    rows.push_back(row);
  }
  Json j;
  j["job"] = job_json(job, seed);
  j["fixture"] = which;
  j["rows"] = rows;
  cf::io::write_json_file(out_path(job, "curvature_report.json"), j);
  std::printf("%zu rows written\n", rows.size());
  return kExitOk;
}

int cmd_check(const Job& job) {
  const std::uint64_t seed = resolve_seed(job);
  const cf::Polyline shape = load_shape(job);
  Json j;
  j["job"] = job_json(job, seed);
  const auto simple = cf::is_simple(shape);
  j["vertices"] = shape.size();
  j["length"] = shape.length();
  j["signed_area"] = shape.signed_area();
  j["simple"] = cf::io::verdict_json(simple);
  bool ok = simple.simple && shape.signed_area() > 0.0;
  if (!job.measure_file.empty()) {
    const auto m = cf::io::parse_measure(cf::io::read_json_file(job.measure_file));
    const auto v = cf::validate(m, shape.length());
    j["measure_valid"] = v.ok();
    j["measure_message"] = v.message;
    j["total_mass"] = m.total_mass();
    if (v.ok()) j["kappa_L"] = cf::make_curvature(m, shape.length())(shape.length());
    ok = ok && v.ok();
  }
  std::cout << j.dump(2) << "\n";
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capforge: flat caps glued to planar shapes"};
  app.require_subcommand(1);
  Job job;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--out-dir", job.out_dir, "output directory");
    sc->add_option("--seed", job.seed, "random seed (falls back to CAPFORGE_SEED, then 1)");
    sc->add_option("--tol-closure", job.tol_closure, "closure tolerance relative to the perimeter")
        ->check(CLI::PositiveNumber);
  };
  auto shape_opts = [&](CLI::App* sc) {
    sc->add_option("--shape", job.shape_file, "shape JSON {\"vertices\": [[x, y], ...]}");
    sc->add_option("--fixture", job.fixture, "built-in shape");
  };

  auto* cap = app.add_subcommand("cap", "develop the cap of a shape and boundary measure");
  common(cap);
  shape_opts(cap);
  cap->add_option("--measure", job.measure_file, "measure JSON {\"atoms\": ..., \"densities\": ...}");
  cap->add_flag("--auto-measure", job.auto_measure, "triangle measure for triangles, reflection measure otherwise");
  cap->add_option("--bins", job.bins, "bins for sampled measures")->check(CLI::PositiveNumber);

  auto* julia = app.add_subcommand("julia", "polygonal filled Julia set, its equal-weight measure and cap");
  common(julia);
  julia->add_option("--c", job.c_text, "c in z^2 + c, as re or re,im (default -1)");
  julia->add_option("--polynomial", job.polynomial_file, "polynomial JSON");
  julia->add_option("--depth", job.depth, "number of pullbacks")->check(CLI::Range(1, 22));
  julia->add_option("--basepoint", job.basepoint_text, "basepoint re or re,im");

  auto* mc = app.add_subcommand("harmonic-mc", "harmonic measure by walk on spheres");
  common(mc);
  shape_opts(mc);
  mc->add_option("--walkers", job.walkers, "number of walkers")->check(CLI::PositiveNumber);
  mc->add_option("--bins", job.bins, "arclength bins")->check(CLI::PositiveNumber);
  mc->add_flag("--with-cap", job.with_cap, "also develop the cap of the sampled measure");

  auto* dev = app.add_subcommand("dev", "image of the unit circle under the harmonic cap development g");
  common(dev);
  dev->add_option("--c", job.c_text, "use the Bottcher series of z^2 + c");
  dev->add_option("--map", job.map, "closed-form map: identity, joukowski, square");
  dev->add_option("--order", job.order, "series order")->check(CLI::PositiveNumber);
  dev->add_option("--samples", job.samples, "points on the circle")->check(CLI::PositiveNumber);
  dev->add_option("--cusp-tol", job.cusp_tol, "|g'| below this marks a cusp")->check(CLI::PositiveNumber);

  auto* naive = app.add_subcommand("naive-cap", "hull plus reflected pockets");
  common(naive);
  shape_opts(naive);

  auto* curv = app.add_subcommand("curvature-report", "circle circumference curvature estimates along the boundary");
  common(curv);
  shape_opts(curv);
  curv->add_option("--measure", job.measure_file, "measure JSON");
  curv->add_option("--bins", job.bins, "bins for the interval fixture")->check(CLI::PositiveNumber);
  curv->add_option("--points", job.points, "boundary points in the table")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "validate a shape and optional measure");
  common(check);
  shape_opts(check);
  check->add_option("--measure", job.measure_file, "measure JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*cap) return job.command = "cap", cmd_cap(job);
    if (*julia) return job.command = "julia", cmd_julia(job);
    if (*mc) return job.command = "harmonic-mc", cmd_harmonic_mc(job);
    if (*dev) return job.command = "dev", cmd_dev(job);
    if (*naive) return job.command = "naive-cap", cmd_naive_cap(job);
    if (*curv) return job.command = "curvature-report", cmd_curvature_report(job);
    if (*check) return job.command = "check", cmd_check(job);
  } catch (const cf::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.kind()) {
      case cf::ErrorKind::validation: return kExitValidation;
      case cf::ErrorKind::convergence: return kExitConvergence;
      case cf::ErrorKind::obstruction: return kExitObstruction;
      case cf::ErrorKind::io: return kExitIo;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitIo;
}
