#pragma once

// Polygonal approximations of filled Julia sets: the d^n preimages of a
// basepoint under f^n, ordered cyclically by lifting a loop through the
// basepoint n times. The lifted loop runs once around K(f) in the basin of
// infinity, so its order is the external-angle order.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/geometry.hpp"
#include "capforge/measure.hpp"
#include "capforge/polynomial.hpp"

namespace capforge {

struct JuliaOptions {
  std::size_t base_samples = 64;       ///< samples on the base loop (rounded up to a multiple of 4)
  std::size_t max_base_samples = 4096; ///< refinement limit before giving up
  double ambiguity = 0.25;             ///< step / distance-to-critical-point bound for a safe branch choice
  std::size_t orbit_iterations = 1000;
};

struct JuliaBoundary {
  Polyline polygon;
  BoundaryMeasure measure;       ///< 1 / d^n on each vertex
  std::vector<Point2> loop;      ///< the lifted loop; vertex j is loop[j * base_samples]
  std::size_t base_samples = 0;  ///< samples per base loop actually used
  Point2 basepoint{};
  std::size_t depth = 0;
};

namespace detail {

inline std::vector<Point2> base_loop(const PolynomialMap& f, Point2 b, std::size_t m) {
  const double r = f.escape_radius();
  std::vector<Point2> loop;
  loop.reserve(m);
  if (std::abs(b) >= r) {
    for (std::size_t k = 0; k < m; ++k) loop.push_back(b * std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(m)));
    return loop;
  }
  if (b == Point2{}) throw ValidationError("julia_boundary: basepoint 0 needs |0| beyond the escape radius");
  // Keyhole: out along the ray to the escape circle, once around, back in.
  const Point2 u = b / std::abs(b);
  const std::size_t q = m / 4;
  const std::size_t h = m - 2 * q;
  for (std::size_t k = 0; k < q; ++k) loop.push_back(b + (r * u - b) * (static_cast<double>(k) / static_cast<double>(q)));
  for (std::size_t k = 0; k < h; ++k) loop.push_back(r * u * std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(h)));
  for (std::size_t k = 0; k < q; ++k) {
    loop.push_back(r * u + (b - r * u) * (static_cast<double>(k + 1) / static_cast<double>(q + 1)));
  }
  return loop;
}

/// All solutions of f(w) = z (quadratics in closed form, otherwise Newton
/// from `seed` only; returns the single root reached).
inline Point2 lift_step(const PolynomialMap& f, const std::vector<Point2>& crit, Point2 z, Point2 prev, double ambiguity,
                        bool& ok) {
  double crit_dist = std::numeric_limits<double>::infinity();
  for (Point2 c : crit) crit_dist = std::min(crit_dist, std::abs(prev - c));
  if (f.is_unicritical_quadratic()) {
    const Point2 r = std::sqrt(z - f.quadratic_c());
    const Point2 w = std::abs(r - prev) <= std::abs(-r - prev) ? r : -r;
    if (std::abs(w - prev) > ambiguity * std::max(crit_dist, std::abs(w))) ok = false;
    return w;
  }
  Point2 w = prev;
  for (int it = 0; it < 100; ++it) {
    const Point2 step = (f(w) - z) / f.derivative(w);
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  if (!(std::abs(f(w) - z) <= 1e-9 * (1.0 + std::abs(z))) || std::abs(w - prev) > ambiguity * crit_dist) ok = false;
  return w;
}

inline std::optional<std::vector<Point2>> lift_loops(const PolynomialMap& f, std::vector<Point2> loop, Point2 b,
                                                     std::size_t depth, double ambiguity) {
  const std::size_t d = f.degree();
  const auto crit = f.critical_points();
  Point2 anchor = b;
  for (std::size_t level = 0; level < depth; ++level) {
    const std::size_t n = loop.size();
    // Start from the preimage of loop[0] nearest the previous start.
    Point2 w{};
    if (f.is_unicritical_quadratic()) {
      const Point2 r = std::sqrt(loop[0] - f.quadratic_c());
      w = std::abs(r - anchor) <= std::abs(r + anchor) ? r : -r;
    } else {
      w = anchor;
      for (int it = 0; it < 200; ++it) {
        const Point2 step = (f(w) - loop[0]) / f.derivative(w);
        w -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
      }
    }
    std::vector<Point2> next;
    next.reserve(d * n);
    next.push_back(w);
    bool ok = true;
    for (std::size_t i = 1; i < d * n && ok; ++i) next.push_back(lift_step(f, crit, loop[i % n], next.back(), ambiguity, ok));
    if (!ok) return std::nullopt;
    // Going round once more must land back on the start.
    const Point2 back = lift_step(f, crit, loop[0], next.back(), ambiguity, ok);
    if (!ok || std::abs(back - next.front()) > 1e-9 * (1.0 + std::abs(back))) return std::nullopt;
    anchor = next.front();
    loop = std::move(next);
  }
  return loop;
}

}  // namespace detail

inline JuliaBoundary julia_boundary(const PolynomialMap& f, Point2 basepoint, std::size_t depth,
                                    const JuliaOptions& opt = {}) {
  require_connected(f, opt.orbit_iterations);
  if (depth == 0) throw ValidationError("julia_boundary: depth must be at least 1");
  const double levels = std::pow(static_cast<double>(f.degree()), static_cast<double>(depth));
  if (levels > 1e7) throw ValidationError("julia_boundary: d^n is too large");

  std::size_t m = std::max<std::size_t>(4, (opt.base_samples + 3) / 4 * 4);
  for (;; m *= 2) {
    if (m > opt.max_base_samples) {
      throw ConvergenceError("julia_boundary: branch choice stayed ambiguous up to " +
                             std::to_string(opt.max_base_samples) + " base samples");
    }
    std::vector<Point2> loop = detail::base_loop(f, basepoint, m);
    GreenOptions go;
    go.max_iterations = opt.orbit_iterations;
    for (std::size_t k = 1; k < loop.size(); ++k) {
      if (!green_polynomial_detail(f, loop[k], go).escaped) {
        throw ValidationError("julia_boundary: the loop through the basepoint meets the filled Julia set");
      }
    }
    auto lifted = detail::lift_loops(f, std::move(loop), basepoint, depth, opt.ambiguity);
    if (!lifted) continue;

    JuliaBoundary out{Polyline({0.0, 1.0}, false), {}, std::move(*lifted), m, basepoint, depth};
    const auto count = static_cast<std::size_t>(levels);
    std::vector<Point2> verts;
    verts.reserve(count);
    for (std::size_t j = 0; j < count; ++j) verts.push_back(out.loop[j * m]);
    out.polygon = Polyline(std::move(verts), true);
    const ArcLengthParam arc(out.polygon);
    const double mass = 1.0 / static_cast<double>(count);
    for (std::size_t j = 0; j < count; ++j) out.measure.atoms.push_back({arc.cumulative()[j], mass});
    return out;
  }
}

/// Basepoints used for the standard figures: 0.5 for c = 1/4, 3 for c = -2
/// (where the preimages of 2 collide), 2 otherwise.
inline Point2 default_basepoint(Point2 c) {
  if (c == Point2{0.25, 0.0}) return 0.5;
  if (c == Point2{-2.0, 0.0}) return 3.0;
  return 2.0;
}

}  // namespace capforge
