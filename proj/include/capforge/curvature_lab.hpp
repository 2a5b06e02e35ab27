#pragma once

// Circumference of small geodesic circles on the glued sphere. A circle of
// radius r about the glued point s(t) ~ s_hat(t) is measured in the two flat
// charts separately: the part inside the shape around s(t), plus the part
// inside the cap around s_hat(t') for every t' glued to the same point.
// Then (2 pi r - C) / r^2 tends to the curvature density 4 pi d mu / dt.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "capforge/cap.hpp"
#include "capforge/error.hpp"
#include "capforge/geometry.hpp"
#include "capforge/measure.hpp"

namespace capforge {

/// Arclength of the part of a circle of radius r, centred on a circle of
/// radius R, that lies inside the big circle:
///   A(R, r) = r (pi - 2 atan(r^2 / sqrt(4 R^2 r^2 - r^4))).
inline double lens_arclength(double R, double r) {
  if (!(R > 0.0) || !(r > 0.0) || !(r < R)) throw ValidationError("lens_arclength: need 0 < r < R");
  return r * (kPi - 2.0 * std::atan(r * r / std::sqrt(4.0 * R * R * r * r - r * r * r * r)));
}

namespace detail {

/// Roots u in [0, len] of |p0 + d u - c| = r for unit d.
inline void circle_segment_crossings(Point2 c, double r, Point2 p0, Point2 d, double len, std::vector<Point2>& out) {
  const Point2 q = p0 - c;
  const double b = dot(d, q);
  const double disc = b * b - (std::norm(q) - r * r);
  if (disc < 0.0) return;
  const double s = std::sqrt(disc);
  const double slack = 1e-12 * std::max(len, r);
  for (double u : {-b - s, -b + s}) {
    if (u >= -slack && u <= len + slack) out.push_back(p0 + d * std::clamp(u, 0.0, len));
    if (s == 0.0) break;
  }
}

inline void circle_arc_crossings(Point2 c, double r, const CapPiece& piece, std::vector<Point2>& out) {
  const Point2 o = piece.centre();
  const double rho = 1.0 / std::abs(piece.rate);
  const double dist = std::abs(o - c);
  if (dist > r + rho || dist < std::abs(rho - r) || dist == 0.0) return;
  const double a = (dist * dist + rho * rho - r * r) / (2.0 * dist);
  const double h = std::sqrt(std::max(0.0, rho * rho - a * a));
  const Point2 e = (c - o) / dist;
  const Point2 base = o + a * e;
  const Point2 perp = Point2(0.0, 1.0) * e;
  const Point2 s0 = piece.start - o;
  const double sweep = std::abs(piece.rate) * piece.length;
  for (double sgn : {-1.0, 1.0}) {
    const Point2 x = base + sgn * h * perp;
    // Clockwise travel for positive rate: angle from the start decreases.
    double ang = -std::arg((x - o) / s0) * (piece.rate > 0 ? 1.0 : -1.0);
    if (ang < 0.0) ang += kTwoPi;
    const double slack = 1e-12;
    if (ang <= sweep + slack || ang >= kTwoPi - slack) out.push_back(x);
    if (h == 0.0) break;
  }
}

/// Angular length of the arcs between sorted crossing angles whose midpoints pass `inside`.
template <class Inside>
double arc_length_inside(Point2 c, double r, std::vector<Point2> crossings, Inside&& inside) {
  std::vector<double> ang;
  for (Point2 x : crossings) ang.push_back(std::arg(x - c));
  std::sort(ang.begin(), ang.end());
  std::vector<double> uniq;
  for (double a : ang) {
    if (uniq.empty() || a - uniq.back() > 1e-12) uniq.push_back(a);
  }
  if (uniq.size() > 1 && uniq.front() + kTwoPi - uniq.back() <= 1e-12) uniq.pop_back();
  if (uniq.empty()) return inside(c + r) ? kTwoPi * r : 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    const double a0 = uniq[i];
    const double a1 = i + 1 < uniq.size() ? uniq[i + 1] : uniq.front() + kTwoPi;
    if (inside(c + std::polar(r, 0.5 * (a0 + a1)))) total += (a1 - a0) * r;
  }
  return total;
}

}  // namespace detail

/// Length of the circle |z - centre| = r inside the (closed) shape.
inline double shape_circle_arclength(const Polyline& shape, Point2 centre, double r) {
  if (!(r > 0.0)) throw ValidationError("circle radius must be positive");
  std::vector<Point2> xs;
  for (std::size_t k = 0; k < shape.edge_count(); ++k) {
    const Point2 e = shape.edge_vector(k);
    const double len = std::abs(e);
    detail::circle_segment_crossings(centre, r, shape.edge_start(k), e / len, len, xs);
  }
  return detail::arc_length_inside(centre, r, std::move(xs),
                                   [&](Point2 q) { return winding_number_unchecked(shape.points(), q) != 0; });
}

/// Length of the circle of radius r about s_hat(t) that lies inside the cap.
/// Only valid while r is below the local feature size: exactly two boundary
/// crossings are required.
inline double cap_circle_arclength(const CapDevelopment& cap, double t, double r) {
  if (!(r > 0.0)) throw ValidationError("circle radius must be positive");
  const double L = cap.length;
  const Point2 c = cap.point_at(t >= L ? 0.0 : t);
  std::vector<Point2> xs;
  for (const CapPiece& p : cap.pieces) {
    if (p.is_arc()) {
      detail::circle_arc_crossings(c, r, p, xs);
    } else {
      detail::circle_segment_crossings(c, r, p.start, p.direction, p.length, xs);
    }
  }
  // Distinct crossing points only.
  std::vector<Point2> uniq;
  for (Point2 x : xs) {
    bool dup = false;
    for (Point2 y : uniq) dup = dup || std::abs(x - y) <= 1e-10 * r;
    if (!dup) uniq.push_back(x);
  }
  if (uniq.size() != 2) {
    throw ValidationError("cap_circle_arclength: radius " + std::to_string(r) + " meets the cap boundary " +
                          std::to_string(uniq.size()) + " times (expected 2)");
  }
  // Tangents on either side of t; the cap lies to the right of travel.
  const double tt = t >= L || t <= 0.0 ? 0.0 : t;
  const std::size_t k_out = cap.piece_at(tt);
  const CapPiece& po = cap.pieces[k_out];
  const Point2 t_out = po.tangent(tt - po.t0);
  Point2 t_in;
  if (tt == 0.0) {
    t_in = cap.pieces.back().tangent(cap.pieces.back().length);
  } else if (tt - po.t0 <= 1e-13 * L && k_out > 0) {
    const CapPiece& pi = cap.pieces[k_out - 1];
    t_in = pi.tangent(pi.length);
  } else {
    t_in = t_out;
  }
  double theta_hat = -std::arg(-t_in / t_out);
  if (theta_hat <= 1e-12) theta_hat += kTwoPi;
  const Point2 bisector = t_out * std::polar(1.0, -0.5 * theta_hat);

  double a0 = std::arg(uniq[0] - c);
  double a1 = std::arg(uniq[1] - c);
  if (a1 < a0) std::swap(a0, a1);
  double ab = std::arg(bisector);
  if (ab < a0) ab += kTwoPi;
  const bool first = ab <= a1;
  return r * (first ? a1 - a0 : kTwoPi - (a1 - a0));
}

/// Every t' in [0, L) with s(t') = s(t) (t itself included).
inline std::vector<double> glued_positions(const Polyline& shape, double t) {
  const ArcLengthParam arc(shape);
  const double L = arc.total_length();
  const Point2 p = arc.point_at(t >= L ? 0.0 : t);
  const double tol = 1e-12 * L;
  std::vector<double> out;
  for (std::size_t k = 0; k < arc.edge_count(); ++k) {
    const Point2 a = arc.vertex(k);
    const Point2 b = arc.vertex(k + 1);
    const double u = closest_param(p, a, b);
    if (std::abs(a + u * (b - a) - p) > tol) continue;
    double tp = arc.cumulative()[k] + u * arc.edge_length(k);
    if (tp >= L - tol) tp = 0.0;
    bool dup = false;
    for (double q : out) dup = dup || std::abs(q - tp) <= tol;
    if (!dup) out.push_back(tp);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// C(s(t), r): shape side plus the cap side at every glued position.
inline double surface_circle_circumference(const Polyline& shape, const CapDevelopment& cap, double t, double r) {
  const ArcLengthParam arc(shape);
  const double L = arc.total_length();
  double c = shape_circle_arclength(shape, arc.point_at(t >= L ? 0.0 : t), r);
  for (double tp : glued_positions(shape, t)) c += cap_circle_arclength(cap, tp, r);
  return c;
}

struct CurvatureEstimate {
  double estimate = 0.0;          ///< extrapolated limit of (2 pi r - C) / r^2
  std::vector<double> radii;
  std::vector<double> quotients;  ///< (2 pi r - C) / r^2 at each radius
  bool reliable = true;           ///< false when the quotients are not monotone in r
};

/// r_i = 10^(-2 - 0.2 i), i = 0..5.
inline std::vector<double> default_radius_ladder(double scale = 1.0) {
  std::vector<double> rs;
  for (int i = 0; i <= 5; ++i) rs.push_back(scale * std::pow(10.0, -2.0 - 0.2 * i));
  return rs;
}

/// Second-order Richardson extrapolation over a decreasing radius ladder,
/// using the two smallest radii.
inline CurvatureEstimate richardson_limit(std::vector<double> radii, std::vector<double> q) {
  CurvatureEstimate out;
  out.radii = std::move(radii);
  out.quotients = std::move(q);
  const std::size_t n = out.radii.size();
  if (n == 0) throw ValidationError("empty radius ladder");
  if (n == 1) {
    out.estimate = out.quotients[0];
    return out;
  }
  const double r1 = out.radii[n - 2], r2 = out.radii[n - 1];
  const double q1 = out.quotients[n - 2], q2 = out.quotients[n - 1];
  out.estimate = (q2 * r1 * r1 - q1 * r2 * r2) / (r1 * r1 - r2 * r2);
  const double slack = 1e-9;
  bool up = true, down = true;
  for (std::size_t i = 1; i < n; ++i) {
    up = up && out.quotients[i] >= out.quotients[i - 1] - slack;
    down = down && out.quotients[i] <= out.quotients[i - 1] + slack;
  }
  out.reliable = up || down;
  return out;
}

inline CurvatureEstimate curvature_limit_estimate(const Polyline& shape, const CapDevelopment& cap, double t,
                                                  std::vector<double> radii = default_radius_ladder()) {
  std::vector<double> q;
  for (double r : radii) q.push_back((kTwoPi * r - surface_circle_circumference(shape, cap, t, r)) / (r * r));
  return richardson_limit(std::move(radii), std::move(q));
}

/// The one-sided quotient (pi r - C_r) / r^2 on the shape side, which tends
/// to the boundary curvature alpha'(t) where the boundary is smooth.
inline CurvatureEstimate shape_side_estimate(const Polyline& shape, double t,
                                             std::vector<double> radii = default_radius_ladder()) {
  const ArcLengthParam arc(shape);
  const Point2 c = arc.point_at(t);
  std::vector<double> q;
  for (double r : radii) q.push_back((kPi * r - shape_circle_arclength(shape, c, r)) / (r * r));
  return richardson_limit(std::move(radii), std::move(q));
}

/// Reference value 4 pi times the density at every glued position.
inline double reference_curvature_density(const Polyline& shape, const BoundaryMeasure& m, double t) {
  const CurvatureFunction kappa(m, shape.length());
  double total = 0.0;
  for (double tp : glued_positions(shape, t)) total += kappa.rate_at(tp);
  return total;
}

}  // namespace capforge
