#pragma once

// Standard shapes and measures, random generators for property tests, and
// the two spiral-channel shapes whose caps do not develop injectively.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/exterior_map.hpp"
#include "capforge/geometry.hpp"
#include "capforge/measure.hpp"

namespace capforge::fixtures {

/// [-1, 1]^2, ccw from (-1, -1).
inline Polyline square(double half = 1.0) {
  return Polyline({{-half, -half}, {half, -half}, {half, half}, {-half, half}}, true);
}

inline Polyline regular_polygon(std::size_t n, double radius = 1.0, double phase = 0.0) {
  if (n < 3) throw ValidationError("regular_polygon: need at least 3 vertices");
  std::vector<Point2> v;
  v.reserve(n);
  for (std::size_t k = 0; k < n; ++k) v.push_back(std::polar(radius, phase + kTwoPi * static_cast<double>(k) / static_cast<double>(n)));
  return Polyline(std::move(v), true);
}

inline Polyline triangle(Point2 a, Point2 b, Point2 c) {
  std::vector<Point2> v{a, b, c};
  if (cross(b - a, c - a) < 0.0) std::swap(v[1], v[2]);
  return Polyline(std::move(v), true);
}

/// Non-convex L-shaped hexagon.
inline Polyline l_hexagon() {
  return Polyline({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, true);
}

/// The segment [-2, 2] as a degenerate closed polygon: top side from 2 to -2,
/// then the bottom side back. Not a simple polygon; caps of it are built with
/// shape checks off.
inline Polyline interval_slit() { return Polyline({{2.0, 0.0}, {-2.0, 0.0}}, true); }

inline Polyline ellipse(double a, double b, std::size_t n) {
  std::vector<Point2> v;
  v.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    v.push_back({a * std::cos(t), b * std::sin(t)});
  }
  return Polyline(std::move(v), true);
}

/// Mass 1/L per unit length.
inline BoundaryMeasure uniform_measure(const Polyline& shape) {
  const double L = shape.length();
  BoundaryMeasure m;
  m.densities.push_back({0.0, L, 1.0 / L});
  return m;
}

/// Atom (pi - theta_j) / 2 pi at each vertex: kappa jumps by twice the turning,
/// so the cap is the reflected polygon.
inline BoundaryMeasure reflection_measure(const Polyline& shape) {
  const auto turning = turning_angles(shape);
  BoundaryMeasure m;
  for (const auto& j : turning.jumps) m.atoms.push_back({j.t, j.turn / kTwoPi});
  return m;
}

/// Arcsine law on the slit pulled back to arclength: theta(t) = arccos(x / 2)
/// on the top side, so the density is 1 / (2 pi sqrt(4 - x^2)) on each side.
/// Binned into `bins` constant pieces per side with exact bin masses.
inline BoundaryMeasure slit_harmonic_measure(std::size_t bins) {
  BoundaryMeasure m;
  const double width = 4.0 / static_cast<double>(bins);
  for (std::size_t side = 0; side < 2; ++side) {
    for (std::size_t b = 0; b < bins; ++b) {
      const double t0 = 4.0 * static_cast<double>(side) + width * static_cast<double>(b);
      const double t1 = t0 + width;
      // x = 2 - t on the top, x = t - 6 on the bottom; mass = |delta arccos(x/2)| / 2 pi.
      auto x_of = [&](double t) { return side == 0 ? 2.0 - t : t - 6.0; };
      const double mass = std::abs(std::acos(std::clamp(x_of(t1) / 2.0, -1.0, 1.0)) -
                                   std::acos(std::clamp(x_of(t0) / 2.0, -1.0, 1.0))) /
                          kTwoPi;
      m.densities.push_back({t0, t1, mass / width});
    }
  }
  return m;
}

// Random generators for property tests.

/// Star-shaped simple polygon: sorted random angles, radii in [0.3, 1].
template <class Rng>
Polyline random_polygon(Rng& rng, std::size_t n) {
  // One jittered angle per sector keeps every gap below pi, so the origin is inside.
  std::uniform_real_distribution<double> jitter(0.3, 0.7), rad(0.3, 1.0);
  std::vector<double> a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = kTwoPi * (static_cast<double>(k) + jitter(rng)) / static_cast<double>(n);
  std::vector<Point2> v;
  for (double x : a) {
    const Point2 p = std::polar(rad(rng), x);
    if (!v.empty() && std::abs(p - v.back()) < 1e-6) continue;
    v.push_back(p);
  }
  if (v.size() < 3) return regular_polygon(3);
  return Polyline(std::move(v), true);
}

/// Triangle with every angle at least `min_angle`.
template <class Rng>
Polyline random_triangle(Rng& rng, double min_angle = 0.05) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    const Polyline t = triangle(a, b, c);
    const auto& p = t.points();
    bool ok = std::abs(cross(p[1] - p[0], p[2] - p[0])) > 1e-3;
    for (std::size_t k = 0; k < 3 && ok; ++k) {
      const Point2 e1 = p[(k + 1) % 3] - p[k], e2 = p[(k + 2) % 3] - p[k];
      ok = std::abs(std::arg(e2 / e1)) >= min_angle;
    }
    if (ok) return t;
  }
}

/// Atoms (each below 1/2) and constant-density pieces on [0, L], total mass 1.
template <class Rng>
BoundaryMeasure random_measure(Rng& rng, double L) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, 6);
  BoundaryMeasure m;
  const int na = count(rng), nd = count(rng) + (na <= 2 ? 1 : 0);
  std::vector<double> w;
  for (int i = 0; i < na + nd; ++i) w.push_back(0.05 + u(rng));
  // Each atom stays below 0.9 of everything else, so below 1/2 of the total.
  for (bool changed = true; changed;) {
    changed = false;
    double total = 0.0;
    for (double x : w) total += x;
    for (int i = 0; i < na; ++i) {
      double& x = w[static_cast<std::size_t>(i)];
      const double cap = 0.9 * (total - x);
      if (x > cap) x = cap, changed = true;
    }
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (int i = 0; i < na; ++i) m.atoms.push_back({u(rng) * L, w[static_cast<std::size_t>(i)] / total});
  for (int i = 0; i < nd; ++i) {
    double t0 = u(rng) * L, t1 = u(rng) * L;
    if (t1 < t0) std::swap(t0, t1);
    if (t1 - t0 < 1e-3 * L) t1 = std::min(L, t0 + 0.1 * L), t0 = t1 - 0.1 * L;
    m.densities.push_back({t0, t1, w[static_cast<std::size_t>(na + i)] / total / (t1 - t0)});
  }
  // Rounding residue goes to the first piece.
  const double residue = 1.0 - m.total_mass();
  if (!m.densities.empty()) {
    auto& d = m.densities.front();
    d.value += residue / (d.t1 - d.t0);
  } else {
    m.atoms.front().mass += residue;
  }
  return m;
}

// Spiral channels.

struct SpiralParams {
  Point2 centre;         ///< common centre of the two spirals
  double inner = 0.1;    ///< radius where both channels end
  double outer = 0.75;   ///< radius of the outer end of the first spiral
  double turns = 5.0;    ///< approximate number of turns of each spiral
  double width = 0.01;   ///< channel width
  double opening_a = 0;  ///< x of the first channel's opening (right of centre)
  double opening_b = 0;  ///< x of the second channel's opening (left of centre)
  std::size_t samples_per_turn = 96;
};

namespace detail {

inline Point2 line_intersection(Point2 p, Point2 d, Point2 q, Point2 e) {
  const double s = cross(q - p, e) / cross(d, e);
  return p + s * d;
}

/// The channel path: from `opening` (on the edge line through `edge_point`
/// with direction `edge_dir`) straight up to the outer spiral end, then
/// inward along r = inner + b theta at angle theta + phase.
inline std::vector<Point2> channel_path(const SpiralParams& s, double theta_end, double phase, double b,
                                        Point2 edge_point, Point2 edge_dir) {
  const Point2 end = s.centre + std::polar(s.inner + b * theta_end, theta_end + phase);
  const Point2 foot = line_intersection(end, {0.0, -1.0}, edge_point, edge_dir);
  std::vector<Point2> path{foot};
  const double leg = std::abs(end - foot);
  const std::size_t leg_steps = std::max<std::size_t>(2, static_cast<std::size_t>(leg / (s.width * 4.0)));
  for (std::size_t k = 1; k < leg_steps; ++k) path.push_back(foot + (end - foot) * (static_cast<double>(k) / static_cast<double>(leg_steps)));
  const auto n = static_cast<std::size_t>(std::ceil(theta_end / kTwoPi * static_cast<double>(s.samples_per_turn)));
  for (std::size_t k = 0; k <= n; ++k) {
    const double th = theta_end * (1.0 - static_cast<double>(k) / static_cast<double>(n));
    path.push_back(s.centre + std::polar(s.inner + b * th, th + phase));
  }
  return path;
}

/// Boundary of a channel of width w around `path`, from the edge back to the
/// edge: the left wall inward, then the right wall outward. Wall ends on the
/// edge line are placed exactly on it.
inline std::vector<Point2> channel_walls(const std::vector<Point2>& path, double w, Point2 edge_point, Point2 edge_dir) {
  const std::size_t n = path.size();
  std::vector<Point2> left(n), right(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 din = k > 0 ? path[k] - path[k - 1] : path[1] - path[0];
    const Point2 dout = k + 1 < n ? path[k + 1] - path[k] : path[k] - path[k - 1];
    const Point2 a = din / std::abs(din), c = dout / std::abs(dout);
    Point2 bis = a + c;
    bis /= std::abs(bis);
    const double scale = std::min(4.0, 1.0 / std::max(0.25, dot(bis, c)));
    const Point2 nrm = Point2(0.0, 1.0) * bis * (0.5 * w * scale);
    left[k] = path[k] + nrm;
    right[k] = path[k] - nrm;
  }
  const Point2 d0 = path[1] - path[0];
  left[0] = line_intersection(left[1], d0, edge_point, edge_dir);
  right[0] = line_intersection(right[1], d0, edge_point, edge_dir);
  std::vector<Point2> out(left.begin(), left.end());
  out.insert(out.end(), right.rbegin(), right.rend());
  return out;
}

struct SpiralPair {
  std::vector<Point2> right_channel;  ///< walls of the channel opening at opening_a
  std::vector<Point2> left_channel;
};

/// Two interleaved spirals about one centre, with vertical legs to the edges
/// below: the right channel's outer end points down-right, the left one makes
/// an extra half turn outside it and points down-left.
inline SpiralPair spiral_pair(const SpiralParams& s, Point2 right_edge_point, Point2 right_edge_dir, Point2 left_edge_point,
                              Point2 left_edge_dir) {
  const double approx = kTwoPi * s.turns;
  const double b = (s.outer - s.inner) / approx;
  // Right channel: outer end at angle -pi/2 + delta_a, x offset opening_a.
  const double dx_a = s.opening_a - s.centre.real();
  double delta_a = std::asin(std::clamp(dx_a / s.outer, -1.0, 1.0));
  double theta_a = -0.5 * kPi + delta_a;
  while (theta_a < approx - kPi) theta_a += kTwoPi;
  for (int it = 0; it < 20; ++it) {
    const double next = std::asin(std::clamp(dx_a / (s.inner + b * theta_a), -1.0, 1.0));
    theta_a += next - delta_a;
    delta_a = next;
  }
  // Left channel: phase pi, outer end at angle -pi/2 - delta_b (so theta + pi = 3 pi/2 - delta_b).
  double theta_b = theta_a + kPi - 2.0 * delta_a;
  for (int it = 0; it < 20; ++it) {
    const double rb = s.inner + b * theta_b;
    const double delta_b = std::asin(std::clamp((s.centre.real() - s.opening_b) / rb, -1.0, 1.0));
    theta_b = theta_a + kPi - delta_a - delta_b;
  }
  const auto pa = channel_path(s, theta_a, 0.0, b, right_edge_point, right_edge_dir);
  const auto pb = channel_path(s, theta_b, kPi, b, left_edge_point, left_edge_dir);
  return {channel_walls(pa, s.width, right_edge_point, right_edge_dir),
          channel_walls(pb, s.width, left_edge_point, left_edge_dir)};
}

}  // namespace detail

/// Convex pentagon with interior angle 15 pi / 16 at the origin (edges at
/// directions pi/32 and pi - pi/32), minus two thin interleaved spiral
/// channels opening on the two edges at the origin.
inline Polyline naive_spiral_fixture(const SpiralParams& params = {}) {
  SpiralParams s = params;
  if (s.centre == Point2{}) s.centre = {0.0, 1.0};
  if (s.opening_a == 0.0) s.opening_a = 0.35;
  if (s.opening_b == 0.0) s.opening_b = -0.45;
  const Point2 er = std::polar(1.0, kPi / 32.0), el = std::polar(1.0, kPi - kPi / 32.0);
  const auto pair = detail::spiral_pair(s, Point2{}, er, Point2{}, el);
  const double rise = 2.0 * std::tan(kPi / 32.0);
  std::vector<Point2> v{{0.0, 0.0}};
  v.insert(v.end(), pair.right_channel.begin(), pair.right_channel.end());
  v.push_back({2.0, rise});
  v.push_back({2.0, 3.0});
  v.push_back({-2.0, 3.0});
  v.push_back({-2.0, rise});
  v.insert(v.end(), pair.left_channel.begin(), pair.left_channel.end());
  return Polyline(std::move(v), true);
}

/// Opening offset x0 on the bottom edge of [-1, 1]^2 such that the harmonic
/// measure of [-x0, x0] is 1/32, read from the exterior map of the square.
inline double square_opening_offset() {
  const ExteriorMap phi = square_exterior_map();
  return phi(std::polar(1.0, -0.5 * kPi + kPi / 32.0)).real();
}

/// [-1, 1]^2 minus two thin interleaved spiral channels opening on the bottom
/// edge at +-x0, where [-x0, x0] carries harmonic mass 1/32.
inline Polyline harmonic_spiral_fixture(const SpiralParams& params = {}) {
  SpiralParams s = params;
  if (s.centre == Point2{}) s.centre = {0.0, -0.45};
  if (params.outer == SpiralParams{}.outer) s.outer = 0.4;
  if (params.inner == SpiralParams{}.inner) s.inner = 0.06;
  if (params.width == SpiralParams{}.width) s.width = 0.004;
  const double x0 = square_opening_offset();
  if (s.opening_a == 0.0) s.opening_a = x0;
  if (s.opening_b == 0.0) s.opening_b = -x0;
  const Point2 e{1.0, 0.0}, base{0.0, -1.0};
  const auto pair = detail::spiral_pair(s, base, e, base, e);
  std::vector<Point2> v{{-1.0, -1.0}};
  v.insert(v.end(), pair.left_channel.begin(), pair.left_channel.end());
  v.insert(v.end(), pair.right_channel.begin(), pair.right_channel.end());
  v.push_back({1.0, -1.0});
  v.push_back({1.0, 1.0});
  v.push_back({-1.0, 1.0});
  return Polyline(std::move(v), true);
}

}  // namespace capforge::fixtures
