#pragma once

// Cap developments from a (shape, measure) pair. The developed cap boundary is
//
//   s_hat(t) = integral_0^t exp(i (alpha(x) - kappa(x))) dx,
//
// traversed clockwise, glued to the shape by s(t) ~ s_hat(t). For polygons
// carrying atoms and piecewise-constant densities the integrand is, between
// breakpoints, a fixed direction rotating at a constant rate, so every piece
// is a straight segment or a circular arc and is integrated in closed form.
//
// Nothing here claims the cap exists. The result carries the candidate curve
// and its defects: closure gap, self-intersection, winding sign and angle
// obstructions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "capforge/error.hpp"
#include "capforge/geometry.hpp"
#include "capforge/measure.hpp"
#include "capforge/spatial.hpp"

namespace capforge {

/// One closed-form piece of the developed boundary: starting at `start` with
/// unit tangent `direction`, turning clockwise at `rate` radians per unit length.
struct CapPiece {
  double t0 = 0.0;
  double length = 0.0;
  Point2 start{};
  Point2 direction{1.0, 0.0};
  double rate = 0.0;  ///< d kappa / dt on the piece

  Point2 at(double u) const {
    const double phi = rate * u;
    if (phi == 0.0) return start + direction * u;
    const double half = 0.5 * phi;
    // integral_0^u e^{-i rate x} dx = u e^{-i phi/2} sin(phi/2) / (phi/2)
    return start + direction * std::polar(u * std::sin(half) / half, -half);
  }

  Point2 tangent(double u) const { return direction * std::polar(1.0, -rate * u); }
  Point2 end() const { return at(length); }
  bool is_arc() const { return rate != 0.0; }

  /// Centre of the supporting circle (arcs only); the radius is 1 / |rate|.
  Point2 centre() const { return start - Point2(0.0, 1.0) * direction / rate; }
};

struct AngleCheck {
  double t = 0.0;          ///< arclength of the vertex or atom
  double theta = 0.0;      ///< interior angle of the shape there
  double mass = 0.0;       ///< point mass there
  double theta_hat = 0.0;  ///< interior angle the cap must have
  bool obstructed = false; ///< theta_hat outside (0, 2 pi)
};

/// theta_hat_j = 2 pi - theta_j - 4 pi mu_j; anything outside (0, 2 pi) is
/// flagged as a local obstruction. A fold (theta_j = 0, the tip of a slit)
/// may have theta_hat = 2 pi: the glued point is then flat.
inline std::vector<AngleCheck> cap_angles(std::span<const double> thetas, std::span<const double> masses) {
  if (thetas.size() != masses.size()) throw ValidationError("cap_angles: list lengths differ");
  std::vector<AngleCheck> out;
  out.reserve(thetas.size());
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    AngleCheck c;
    c.theta = thetas[j];
    c.mass = masses[j];
    c.theta_hat = kTwoPi - thetas[j] - 4.0 * kPi * masses[j];
    const bool fold = thetas[j] <= 1e-12;
    c.obstructed = !(c.theta_hat > 0.0 && (c.theta_hat < kTwoPi || (fold && c.theta_hat <= kTwoPi + 1e-12)));
    out.push_back(c);
  }
  return out;
}

struct GluingRow {
  double t = 0.0;
  Point2 source{};  ///< s(t) on the shape
  Point2 cap{};     ///< s_hat(t) on the developed cap
};

using GluingTable = std::vector<GluingRow>;

struct CapOptions {
  double closure_tol_rel = 1e-6;  ///< "closes" when the gap is below this times L
  bool check_shape = true;        ///< require a simple counterclockwise shape
  double arc_step = kPi / 64.0;   ///< max turning between samples along an arc
  double simple_tol_rel = 1e-12;  ///< passed to is_simple
  std::size_t probe_grid = 24;    ///< winding probes per side of the bounding box
  std::size_t edge_probes = 256;  ///< winding probes placed beside boundary edges
};

struct CapDevelopment {
  std::vector<CapPiece> pieces;
  std::vector<double> breakpoints;  ///< 0 = b_0 < ... < b_m = L
  std::vector<Point2> samples;      ///< s_hat at sample_t, from t = 0 to t = L inclusive
  std::vector<double> sample_t;
  double length = 0.0;
  double closure_defect = 0.0;      ///< |s_hat(L) - s_hat(0)|
  bool closes = false;
  SimplicityVerdict planar;         ///< of the closed boundary when it closes, else of the open curve
  bool winding_ok = false;          ///< clockwise boundary winds <= 0 around every probe
  std::vector<AngleCheck> angles;   ///< one per shape vertex and per edge-interior atom
  GluingTable gluing;

  bool obstructed() const {
    return std::any_of(angles.begin(), angles.end(), [](const AngleCheck& a) { return a.obstructed; });
  }

  std::size_t piece_at(double t) const {
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - breakpoints.begin() - 1));
    return std::min(k, pieces.size() - 1);
  }

  Point2 point_at(double t) const {
    if (t >= length) return pieces.back().end();
    const CapPiece& p = pieces[piece_at(t)];
    return p.at(t - p.t0);
  }

  /// Boundary as a polyline: closed (last sample dropped) when it closes.
  Polyline boundary() const {
    std::vector<Point2> pts;
    pts.reserve(samples.size());
    const std::size_t n = closes ? samples.size() - 1 : samples.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (pts.empty() || samples[i] != pts.back()) pts.push_back(samples[i]);
    }
    if (closes && pts.size() > 1 && pts.back() == pts.front()) pts.pop_back();
    return Polyline(std::move(pts), closes);
  }
};

namespace detail {

/// Closed-boundary winding check against a grid of probes and probes placed
/// just beside boundary edges.
inline bool winding_nonpositive(std::span<const Point2> closed_pts, double total_length, const CapOptions& opt) {
  if (closed_pts.size() < 3) return true;
  Point2 lo = closed_pts[0], hi = closed_pts[0];
  for (Point2 p : closed_pts) {
    lo = {std::min(lo.real(), p.real()), std::min(lo.imag(), p.imag())};
    hi = {std::max(hi.real(), p.real()), std::max(hi.imag(), p.imag())};
  }
  std::vector<Point2> probes;
  const std::size_t g = opt.probe_grid;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      const double fx = (static_cast<double>(i) + 0.5) / static_cast<double>(g);
      const double fy = (static_cast<double>(j) + 0.5) / static_cast<double>(g);
      probes.emplace_back(lo.real() + fx * (hi.real() - lo.real()), lo.imag() + fy * (hi.imag() - lo.imag()));
    }
  }
  const std::size_t n = closed_pts.size();
  const std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(1, opt.edge_probes));
  for (std::size_t k = 0; k < n; k += stride) {
    const Point2 a = closed_pts[k];
    const Point2 b = closed_pts[(k + 1) % n];
    const Point2 mid = 0.5 * (a + b);
    const Point2 normal = Point2(0.0, 1.0) * (b - a) * 0.25;
    probes.push_back(mid + normal);
    probes.push_back(mid - normal);
  }
  const SegmentIndex index(closed_pts, true);
  const double guard = 1e-9 * total_length;
  for (Point2 q : probes) {
    if (index.nearest(q).distance <= guard) continue;
    if (winding_number_unchecked(closed_pts, q) > 0) return false;
  }
  return true;
}

}  // namespace detail

/// Developed cap boundary of a closed counterclockwise polygon carrying a
/// measure made of atoms and piecewise-constant densities.
inline CapDevelopment cap_boundary(const Polyline& shape, const BoundaryMeasure& measure, const CapOptions& opt = {}) {
  if (!shape.closed()) throw ValidationError("cap_boundary: shape must be closed");
  const ArcLengthParam arc(shape);
  const double L = arc.total_length();
  require_valid(measure, L);
  if (opt.check_shape) {
    if (shape.signed_area() <= 0.0) throw ValidationError("cap_boundary: shape must be counterclockwise");
    if (auto v = is_simple(shape, opt.simple_tol_rel); !v.simple) {
      throw ValidationError("cap_boundary: shape is not simple (segments " + std::to_string(v.first) + " and " +
                            std::to_string(v.second) + " meet)");
    }
  }
  const CurvatureFunction kappa(measure, L);

  // Breakpoints: vertices, atoms, density knots.
  std::vector<double> bp(arc.cumulative().begin(), arc.cumulative().end());
  for (const auto& a : kappa.atoms()) bp.push_back(a.t);
  for (double k : kappa.density_knots()) bp.push_back(std::clamp(k, 0.0, L));
  std::sort(bp.begin(), bp.end());
  const double merge = 1e-13 * L;
  std::vector<double> breaks{0.0};
  for (double t : bp) {
    if (t - breaks.back() > merge && L - t > merge) breaks.push_back(t);
  }
  breaks.push_back(L);

  CapDevelopment cap;
  cap.length = L;
  cap.breakpoints = breaks;
  cap.pieces.reserve(breaks.size() - 1);
  Point2 cursor = arc.vertex(0);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    const double mid = 0.5 * (a + b);
    const double rate = kappa.rate_at(mid);
    // Reading kappa at the midpoint absorbs any atom merged into this breakpoint.
    const double kappa_start = kappa(mid) - rate * (mid - a);
    CapPiece piece;
    piece.t0 = a;
    piece.length = b - a;
    piece.start = cursor;
    piece.rate = rate;
    piece.direction = arc.directions()[arc.edge_at(mid)] * std::polar(1.0, -kappa_start);
    cursor = piece.end();
    cap.pieces.push_back(piece);
  }

  for (const CapPiece& p : cap.pieces) {
    cap.samples.push_back(p.start);
    cap.sample_t.push_back(p.t0);
    if (p.is_arc()) {
      const auto parts = static_cast<std::size_t>(std::ceil(std::abs(p.rate * p.length) / opt.arc_step));
      for (std::size_t j = 1; j < parts; ++j) {
        const double u = p.length * static_cast<double>(j) / static_cast<double>(parts);
        cap.samples.push_back(p.at(u));
        cap.sample_t.push_back(p.t0 + u);
      }
    }
  }
  cap.samples.push_back(cursor);
  cap.sample_t.push_back(L);

  cap.closure_defect = std::abs(cursor - cap.samples.front());
  cap.closes = cap.closure_defect <= opt.closure_tol_rel * L;

  const Polyline boundary = cap.boundary();
  cap.planar = is_simple(boundary, opt.simple_tol_rel);
  cap.winding_ok = cap.closes && detail::winding_nonpositive(boundary.points(), L, opt);

  // Angle relation at every vertex and at every atom interior to an edge.
  const TurningData turning = turning_angles_unchecked(arc);
  std::vector<double> ts, thetas, masses;
  for (std::size_t k = 0; k < arc.edge_count(); ++k) {
    ts.push_back(arc.cumulative()[k]);
    thetas.push_back(kPi - turning.jumps[(k + arc.edge_count() - 1) % arc.edge_count()].turn);
    masses.push_back(0.0);
  }
  for (const auto& at : kappa.atoms()) {
    const double t = at.t >= L ? 0.0 : at.t;
    auto it = std::lower_bound(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(arc.edge_count()), t - merge);
    const auto idx = static_cast<std::size_t>(it - ts.begin());
    if (idx < arc.edge_count() && std::abs(ts[idx] - t) <= merge) {
      masses[idx] += at.mass;
    } else if (t < merge || L - t < merge) {
      masses[0] += at.mass;
    } else {
      ts.push_back(t);
      thetas.push_back(kPi);
      masses.push_back(at.mass);
    }
  }
  cap.angles = cap_angles(thetas, masses);
  for (std::size_t j = 0; j < ts.size(); ++j) cap.angles[j].t = ts[j];
  std::sort(cap.angles.begin(), cap.angles.end(), [](const AngleCheck& x, const AngleCheck& y) { return x.t < y.t; });

  for (double t : breaks) cap.gluing.push_back({t, t >= L ? arc.vertex(0) : arc.point_at(t), cap.point_at(t)});
  return cap;
}

/// Rows at every breakpoint of both boundaries plus a uniform grid of n_rows
/// positions; t runs from 0 to L inclusive.
inline GluingTable gluing_table(const Polyline& shape, const CapDevelopment& cap, std::size_t n_rows = 0) {
  const ArcLengthParam arc(shape);
  const double L = arc.total_length();
  std::vector<double> ts(cap.breakpoints.begin(), cap.breakpoints.end());
  for (std::size_t k = 0; k < n_rows; ++k) ts.push_back(L * static_cast<double>(k) / static_cast<double>(n_rows));
  std::sort(ts.begin(), ts.end());
  GluingTable rows;
  for (double t : ts) {
    if (!rows.empty() && t - rows.back().t <= 1e-13 * L) continue;
    rows.push_back({t, t >= L ? arc.vertex(0) : arc.point_at(t), cap.point_at(t)});
  }
  return rows;
}

/// The same shape and measure read from a different basepoint: the polygon
/// starts at s(t0) (a vertex is inserted when t0 falls inside an edge) and
/// every position is shifted by -t0 modulo L.
struct Rebased {
  Polyline shape;
  BoundaryMeasure measure;
};

inline Rebased rebase(const Polyline& shape, const BoundaryMeasure& measure, double t0) {
  if (!shape.closed()) throw ValidationError("rebase: shape must be closed");
  const ArcLengthParam arc(shape);
  const double L = arc.total_length();
  t0 = std::fmod(std::fmod(t0, L) + L, L);
  const std::size_t n = arc.edge_count();
  std::size_t k = arc.edge_at(t0);
  const double merge = 1e-13 * L;
  std::vector<Point2> pts;
  double shift = t0;
  if (t0 - arc.cumulative()[k] <= merge) {
    shift = arc.cumulative()[k];
  } else if (arc.cumulative()[k + 1] - t0 <= merge) {
    k = (k + 1) % n;
    shift = arc.cumulative()[k];
  } else {
    pts.push_back(arc.point_at(t0));
    k = (k + 1) % n;
  }
  for (std::size_t j = 0; j < n; ++j) pts.push_back(shape[(k + j) % n]);
  auto wrap = [&](double t) {
    double u = t - shift;
    if (u < 0.0) u += L;
    if (u >= L - merge) u = 0.0;
    return u;
  };
  Rebased out{Polyline(std::move(pts), true), {}};
  for (const auto& a : measure.atoms) out.measure.atoms.push_back({wrap(a.t), a.mass});
  for (const auto& d : measure.densities) {
    if (d.t1 <= d.t0) continue;
    const double a = wrap(d.t0);
    const double b = a + (d.t1 - d.t0);
    if (b <= L + merge) {
      out.measure.densities.push_back({a, std::min(b, L), d.value});
    } else {
      out.measure.densities.push_back({a, L, d.value});
      out.measure.densities.push_back({0.0, b - L, d.value});
    }
  }
  std::sort(out.measure.atoms.begin(), out.measure.atoms.end(), [](const Atom& x, const Atom& y) { return x.t < y.t; });
  return out;
}

/// Quadrature route for smooth data: s_hat(t_j) at t_j = j L / n for
/// arbitrary alpha and kappa. `breaks` lists known discontinuities of the
/// integrand so panels never straddle them.
inline std::vector<Point2> integrate_cap_curve(const std::function<double(double)>& alpha,
                                               const std::function<double(double)>& kappa, double length, Point2 s0,
                                               std::size_t n, std::span<const double> breaks = {}) {
  if (n == 0 || !(length > 0.0)) throw ValidationError("integrate_cap_curve: need n > 0 and L > 0");
  auto integrand = [&](double x) { return std::polar(1.0, alpha(x) - kappa(x)); };
  std::vector<double> cuts;
  for (std::size_t j = 0; j <= n; ++j) cuts.push_back(length * static_cast<double>(j) / static_cast<double>(n));
  std::vector<double> extra(breaks.begin(), breaks.end());
  std::sort(extra.begin(), extra.end());

  std::vector<Point2> out{s0};
  Point2 cursor = s0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> panel{cuts[j]};
    for (double b : extra) {
      if (b > cuts[j] && b < cuts[j + 1]) panel.push_back(b);
    }
    panel.push_back(cuts[j + 1]);
    for (std::size_t k = 0; k + 1 < panel.size(); ++k) {
      cursor += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, panel[k], panel[k + 1], 12,
                                                                              1e-13);
    }
    out.push_back(cursor);
  }
  return out;
}

}  // namespace capforge
