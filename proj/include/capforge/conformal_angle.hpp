#pragma once

// Conformal angle theta(t) = arg Phi^-1(s(t)), unwrapped from theta(0) = 0.
// Phi^-1 on the boundary is read off the boundary correspondence
// phi -> Phi(e^{i phi}), sampled densely: each s(t) is matched to the nearest
// point of that curve, with ties (the two sides of a slit) broken by the
// direction of travel.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/exterior_map.hpp"
#include "capforge/geometry.hpp"
#include "capforge/measure.hpp"
#include "capforge/spatial.hpp"

namespace capforge {

struct ConformalAngleOptions {
  std::size_t samples = 1u << 14;  ///< points on the boundary correspondence
  double tie_rel = 1e-9;           ///< candidates within this (times L) of the best are ties
  double max_distance_rel = 1e-2;  ///< fail when s(t) is farther than this (times L) from Phi(circle)
};

/// theta at each t (which must be nondecreasing in [0, L]).
inline std::vector<double> conformal_angle(const ExteriorMap& phi, const Polyline& shape, std::span<const double> ts,
                                           const ConformalAngleOptions& opt = {}) {
  if (!shape.closed()) throw ValidationError("conformal_angle: shape must be closed");
  const ArcLengthParam arc(shape);
  const double L = arc.total_length();
  const std::size_t m = opt.samples;
  std::vector<Point2> curve(m);
  for (std::size_t j = 0; j < m; ++j) curve[j] = phi(std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(m)));
  const SegmentIndex index(curve, true);
  const double dphi = kTwoPi / static_cast<double>(m);

  auto locate = [&](double t) {
    const double tt = std::min(t, std::nextafter(L, 0.0));
    const Point2 p = arc.point_at(tt);
    const Point2 dir = arc.tangent_at(tt);
    const auto best = index.nearest(p);
    if (best.distance > opt.max_distance_rel * L) {
      throw ConvergenceError("conformal_angle: boundary point not resolved by the exterior map");
    }
    auto hits = index.within(p, best.distance + opt.tie_rel * L);
    const SegmentIndex::Hit* pick = &best;
    double align = -2.0;
    for (const auto& h : hits) {
      const Point2 seg = curve[(h.segment + 1) % m] - curve[h.segment];
      const double a = dot(seg / std::abs(seg), dir);
      if (a > align) {
        align = a;
        pick = &h;
      }
    }
    return (static_cast<double>(pick->segment) + pick->param) * dphi;
  };

  std::vector<double> out;
  out.reserve(ts.size());
  const double phi0 = locate(0.0);
  double prev_raw = phi0;
  double acc = 0.0;
  double last_t = 0.0;
  for (double t : ts) {
    if (t < last_t) throw ValidationError("conformal_angle: t values must be nondecreasing");
    last_t = t;
    double raw = locate(t);
    if (t >= L) raw = phi0;
    double step = raw - prev_raw;
    step -= kTwoPi * std::round(step / kTwoPi);
    acc += step;
    prev_raw = raw;
    out.push_back(acc);
  }
  return out;
}

/// Single value; unwrapping needs small steps, so a ladder from 0 is walked.
inline double conformal_angle(const ExteriorMap& phi, const Polyline& shape, double t,
                              const ConformalAngleOptions& opt = {}) {
  const double L = shape.length();
  std::vector<double> ts;
  const std::size_t steps = 1024;
  for (std::size_t k = 0; k < steps && static_cast<double>(k) * L / steps < t; ++k) ts.push_back(static_cast<double>(k) * L / steps);
  ts.push_back(t);
  return conformal_angle(phi, shape, ts, opt).back();
}

/// The same angle through the measure: theta = kappa / 2.
inline double conformal_angle_from_measure(const CurvatureFunction& kappa, double t) { return 0.5 * kappa(t); }

}  // namespace capforge
