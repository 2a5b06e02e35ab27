// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <utility>

#include "capforge/capforge.hpp"

using namespace capforge;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < budget_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("AC%-2d %s  %-28s %s  (%.2f s of %.0f s%s)\n", id, ok ? "PASS" : "FAIL", name, o.detail.c_str(), dt, budget_s,
              in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

/// Least-squares rigid motion (rotation and translation) taking the points
/// `from` onto the corresponding points `to`.
std::pair<Point2, Point2> procrustes(const std::vector<Point2>& from, const std::vector<Point2>& to) {
  Point2 ca{}, cb{};
  for (std::size_t i = 0; i < from.size(); ++i) ca += from[i], cb += to[i];
  ca /= static_cast<double>(from.size());
  cb /= static_cast<double>(to.size());
  Point2 s{};
  for (std::size_t i = 0; i < from.size(); ++i) s += std::conj(from[i] - ca) * (to[i] - cb);
  const Point2 rot = s / std::abs(s);
  return {rot, cb - rot * ca};
}

Outcome ac1() {
  // Coefficients of g = C (z - sum k a_k z^(k+2) / (k+2)) from the Bottcher series of z^2 - 2.
  const ExteriorMap phi = bottcher_series(-2.0, 32);
  const auto& a = phi.coefficients();
  std::vector<Point2> g(a.size() + 2);
  g[1] = phi.capacity();
  for (std::size_t k = 1; k < a.size(); ++k) g[k + 2] = -phi.capacity() * static_cast<double>(k) * a[k] / static_cast<double>(k + 2);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point2 want = k == 1 ? 1.0 : (k == 3 ? -1.0 / 3.0 : 0.0);
    err = std::max(err, std::abs(g[k] - want));
  }
  const ExteriorMap jk = ExteriorMap::joukowski();
  const double cusp = std::max({std::abs(harmonic_cap_development(jk, 1.0) - 2.0 / 3.0),
                                std::abs(harmonic_cap_development(jk, -1.0) + 2.0 / 3.0),
                                std::abs(harmonic_cap_development(phi, 1.0) - 2.0 / 3.0),
                                std::abs(harmonic_cap_development(phi, -1.0) + 2.0 / 3.0)});
  return {err < 1e-12 && cusp < 1e-12, fmt("coeff err %.1e, cusp err %.1e", err, cusp)};
}

Outcome ac2() {
  const ExteriorMap id = ExteriorMap::identity();
  double err = 0.0;
  for (int i = 0; i <= 50; ++i) {
    for (int k = 0; k < 200; ++k) {
      const Point2 z = std::polar(i / 50.0, kTwoPi * k / 200);
      err = std::max(err, std::abs(harmonic_cap_development(id, z) - z));
    }
  }
  return {err < 1e-12, fmt("sup err %.1e", err)};
}

Outcome ac3() {
  std::mt19937_64 rng(2024);
  double worst_defect = 0.0, worst_vertex = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Polyline tri = fixtures::random_triangle(rng, 0.05);
    const auto cap = cap_boundary(tri, triangle_measure(tri).measure);
    const double L = tri.length();
    worst_defect = std::max(worst_defect, cap.closure_defect / L);
    const ArcLengthParam arc(tri);
    for (std::size_t k = 0; k < 3; ++k) {
      const Point2 mirror = reflect_across(arc.vertex(k), arc.vertex(0), arc.vertex(1));
      worst_vertex = std::max(worst_vertex, std::abs(cap.point_at(arc.cumulative()[k]) - mirror));
    }
  }
  return {worst_defect < 1e-10 && worst_vertex < 1e-9, fmt("defect/L %.1e, vertex err %.1e", worst_defect, worst_vertex)};
}

Outcome ac4() {
  std::mt19937_64 rng(2025);
  double kerr = 0.0, lerr = 0.0;
  CapOptions o;
  o.check_shape = false;
  o.probe_grid = 4;
  o.edge_probes = 8;
  for (int trial = 0; trial < 1000; ++trial) {
    const Polyline p = fixtures::random_polygon(rng, 3 + trial % 30);
    const double L = p.length();
    const BoundaryMeasure m = fixtures::random_measure(rng, L);
    const CurvatureFunction k(m, L);
    kerr = std::max(kerr, std::abs(k(L) - 4 * kPi));
    const auto cap = cap_boundary(p, m, o);
    double len = 0.0;
    for (const auto& piece : cap.pieces) len += piece.length;
    lerr = std::max(lerr, std::abs(len - L));
  }
  return {kerr < 1e-9 && lerr < 1e-10, fmt("|kappa(L) - 4pi| %.1e, |length - L| %.1e", kerr, lerr)};
}

double route_gap(Point2 c) {
  const auto f = PolynomialMap::quadratic(c);
  const auto jb = julia_boundary(f, default_basepoint(c), 10);
  const std::size_t n = jb.polygon.size();
  CapOptions o;
  o.check_shape = false;
  const auto cap = cap_boundary(jb.polygon, jb.measure, o);

  // Series cap s_hat(phi) = -g(e^{-i phi}) up to a rigid motion. Vertex j of the
  // depth-n polygon sits at external angle 2 pi j / n.
  const ExteriorMap phi = bottcher_series(c, 64);
  auto series_at = [&](double a) { return -phi.development(std::polar(1.0, -a)); };
  const ArcLengthParam arc(jb.polygon);
  std::vector<Point2> from, to;
  for (std::size_t j = 0; j < n; ++j) {
    from.push_back(series_at(kTwoPi * static_cast<double>(j) / static_cast<double>(n)));
    to.push_back(cap.point_at(arc.cumulative()[j]));
  }
  const auto [rot, shift] = procrustes(from, to);
  std::vector<Point2> series;
  for (std::size_t j = 0; j <= 8192; ++j) series.push_back(rot * series_at(kTwoPi * static_cast<double>(j) / 8192.0) + shift);
  return hausdorff_distance(cap.samples, series) / diameter(series);
}

Outcome ac5() {
  const double g0 = route_gap(0.0);
  const double g2 = route_gap(-2.0);
  return {g0 < 1e-3 && g2 < 1e-3, fmt("Hausdorff/diam c=0 %.1e, c=-2 %.1e", g0, g2)};
}

Outcome ac6() {
  HarmonicSampler cfg;
  cfg.walkers = 100000;
  cfg.seed = 6;
  const auto h = harmonic_measure_mc(fixtures::interval_slit(), cfg);
  std::vector<double> xs;
  for (Point2 p : h.hits) xs.push_back(p.real());
  const double ks = ks_statistic(xs, arcsine_cdf);
  return {ks < 0.02, fmt("KS %.4f", ks)};
}

Outcome ac7() {
  std::string detail;
  bool ok = true;
  for (Point2 c : {Point2(-1.0, 0.0), Point2(0.25, 0.0)}) {
    const auto jb = julia_boundary(PolynomialMap::quadratic(c), default_basepoint(c), 11);
    const bool simple = is_simple(jb.polygon).simple;
    const auto cap = cap_boundary(jb.polygon, jb.measure);
    const double rel = cap.closure_defect / jb.polygon.length();
    const bool pass = jb.polygon.size() == 2048 && simple && rel < 1e-3 && cap.winding_ok;
    ok = ok && pass;
    detail += fmt("c=%g: n=%.0f simple=%.0f ", c.real(), static_cast<double>(jb.polygon.size()), simple ? 1.0 : 0.0);
    detail += fmt("defect/L %.1e winding_ok=%.0f; ", rel, cap.winding_ok ? 1.0 : 0.0);
  }
  return {ok, detail};
}

Outcome ac8() {
  double worst = 0.0;
  for (double R : {0.5, 1.0, 2.0, 5.0}) {
    const double r = 1e-3 * R;
    const double q = (kPi * r - lens_arclength(R, r)) / (r * r);
    worst = std::max(worst, std::abs(q * R - 1.0));
  }
  return {worst < 1e-3, fmt("max relative err %.1e", worst)};
}

Outcome ac9() {
  const Polyline disk = fixtures::regular_polygon(256);
  const auto m = fixtures::uniform_measure(disk);
  const auto cap = cap_boundary(disk, m);
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double t = disk.length() * (i + 0.3) / 8.0;
    const auto est = curvature_limit_estimate(disk, cap, t);
    worst = std::max(worst, std::abs(est.estimate / 2.0 - 1.0));
  }
  return {worst < 0.05, fmt("max relative err vs 2: %.1e", worst)};
}

Outcome ac10() {
  const auto naive = naive_cap(fixtures::naive_spiral_fixture());
  const Polyline spiral = fixtures::harmonic_spiral_fixture();
  HarmonicSampler cfg;
  cfg.walkers = 100000;
  cfg.seed = 10;
  const auto hits = harmonic_measure_mc(spiral, cfg);
  const auto sm = measure_from_samples(hits.hits, spiral, 1e-3 * diameter(spiral.points()));
  CapOptions o;
  o.check_shape = false;
  const auto hcap = cap_boundary(spiral, sm.measure, o);
  const Polyline sq = fixtures::square();
  const auto sq_naive = naive_cap(sq);
  const auto sq_hits = harmonic_measure_mc(sq, cfg);
  const auto sq_cap = cap_boundary(sq, measure_from_samples(sq_hits.hits, sq, 1e-3 * sq.length()).measure, o);
  const bool ok = !naive.planar.simple && !hcap.planar.simple && sq_naive.planar.simple && sq_cap.planar.simple;
  std::string d = fmt("naive spiral planar=%.0f, harmonic spiral planar=%.0f, ", naive.planar.simple ? 1.0 : 0.0,
                      hcap.planar.simple ? 1.0 : 0.0);
  d += fmt("square planar=%.0f/%.0f", sq_naive.planar.simple ? 1.0 : 0.0, sq_cap.planar.simple ? 1.0 : 0.0);
  return {ok, d};
}

double interior_error(std::size_t n) {
  std::vector<Point2> atoms;
  const std::vector<double> masses(n, 1.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) atoms.push_back(std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(n)));
  const InteriorDevelopment f(atoms, masses);
  double worst = 0.0;
  for (double r : {0.3, 0.6, 0.9}) {
    for (int k = 0; k < 24; ++k) {
      const Point2 z = std::polar(r, kTwoPi * (k + 0.5) / 24);
      worst = std::max(worst, std::abs(f(z) - z));
    }
  }
  return worst;
}

Outcome ac11() {
  const double e1 = interior_error(1024);
  const double e2 = interior_error(2048);
  return {e1 < 0.01 && e2 < e1, fmt("sup err N=1024 %.2e, N=2048 %.2e", e1, e2)};
}

}  // namespace

int main() {
  run(1, "Chebyshev development", 1, ac1);
  run(2, "Disk fixed point", 1, ac2);
  run(3, "Triangle reflection", 1, ac3);
  run(4, "Gauss-Bonnet property", 10, ac4);
  run(5, "Route equivalence", 30, ac5);
  run(6, "Arcsine law", 60, ac6);
  run(7, "Figure reproduction", 300, ac7);
  run(8, "Lens limit", 1, ac8);
  run(9, "Curvature estimator", 30, ac9);
  run(10, "Non-planarity fixtures", 60, ac10);
  run(11, "Interior identity", 60, ac11);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
