#pragma once

// Harmonic measure from infinity by walk on spheres. Walkers start uniformly
// on a launch circle of radius R about the shape's centre (the exact hitting
// law of that circle from infinity), jump to a uniform point on the largest
// empty circle around them, and stop within eps of the boundary. A walker
// that leaves the launch disk is put back on the launch circle with the
// exact exterior Poisson kernel, so finite R introduces no bias.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/geometry.hpp"
#include "capforge/spatial.hpp"

namespace capforge {

/// Per-walker stream: a Mersenne Twister seeded from (master seed, walker id).
class WalkerRng {
 public:
  WalkerRng(std::uint64_t master, std::uint64_t walker) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(walker), static_cast<std::uint32_t>(walker >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1) from the top 53 bits; identical on every platform.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct HarmonicSampler {
  std::size_t walkers = 100000;
  std::uint64_t seed = 1;
  double launch_multiplier = 3.0;  ///< R_launch = multiplier * diameter; must exceed 2
  double eps_rel = 1e-4;           ///< stop within eps = eps_rel * diameter
  std::size_t step_budget = 100000;
};

struct HarmonicHits {
  std::vector<Point2> hits;   ///< nearest boundary points, one per finished walker
  std::size_t discarded = 0;  ///< walkers that ran out of steps
  std::size_t total_steps = 0;
  double launch_radius = 0.0;
  Point2 centre{};
  double diameter = 0.0;

  double discard_rate() const {
    const double n = static_cast<double>(hits.size() + discarded);
    return n > 0 ? static_cast<double>(discarded) / n : 0.0;
  }
};

/// Diameter of a point set (brute force over hull vertices).
inline double diameter(std::span<const Point2> pts) {
  if (pts.size() < 2) return 0.0;
  const ConvexHull h = convex_hull(pts);
  const auto& v = h.hull.points();
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, std::abs(v[i] - v[j]));
  }
  return best;
}

inline HarmonicHits harmonic_measure_mc(const Polyline& shape, const HarmonicSampler& cfg) {
  if (!shape.closed()) throw ValidationError("harmonic_measure_mc: shape must be closed");
  if (!(cfg.launch_multiplier > 2.0)) throw ValidationError("harmonic_measure_mc: launch multiplier must exceed 2");
  if (cfg.walkers == 0) throw ValidationError("harmonic_measure_mc: no walkers");
  const auto& pts = shape.points();
  HarmonicHits out;
  out.diameter = diameter(pts);
  Point2 lo = pts[0], hi = pts[0];
  for (Point2 p : pts) {
    lo = {std::min(lo.real(), p.real()), std::min(lo.imag(), p.imag())};
    hi = {std::max(hi.real(), p.real()), std::max(hi.imag(), p.imag())};
  }
  out.centre = 0.5 * (lo + hi);
  const double radius = cfg.launch_multiplier * out.diameter;
  out.launch_radius = radius;
  const double eps = cfg.eps_rel * out.diameter;
  const SegmentIndex index(pts, true);

  out.hits.reserve(cfg.walkers);
  for (std::size_t k = 0; k < cfg.walkers; ++k) {
    WalkerRng rng(cfg.seed, k);
    Point2 w = out.centre + std::polar(radius, kTwoPi * rng.uniform());
    bool done = false;
    for (std::size_t step = 0; step < cfg.step_budget; ++step) {
      const Point2 rel = w - out.centre;
      if (std::norm(rel) > radius * radius) {
        // Exterior Poisson kernel = interior kernel at the inverted point a;
        // its law is the image of a uniform point under u -> (u + a)/(1 + conj(a) u).
        const Point2 a = radius / std::conj(rel);
        const Point2 u = std::polar(1.0, kTwoPi * rng.uniform());
        w = out.centre + radius * (u + a) / (1.0 + std::conj(a) * u);
        ++out.total_steps;
        continue;
      }
      const double box = index.box_distance(w);
      SegmentIndex::Hit near;
      double d = box;
      if (box <= eps || box < 0.25 * radius) {
        near = index.nearest(w);
        d = near.distance;
      }
      if (d <= eps) {
        out.hits.push_back(near.point);
        done = true;
        break;
      }
      w += std::polar(d, kTwoPi * rng.uniform());
      ++out.total_steps;
    }
    if (!done) ++out.discarded;
  }
  return out;
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw ValidationError("ks_statistic: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

/// CDF of the arcsine law on [-2, 2] (harmonic measure of the slit, projected to x).
inline double arcsine_cdf(double x) {
  return 0.5 + std::asin(std::clamp(x / 2.0, -1.0, 1.0)) / kPi;
}

/// CDF of the uniform law on [0, 2 pi).
inline double uniform_angle_cdf(double theta) { return std::clamp(theta / kTwoPi, 0.0, 1.0); }

}  // namespace capforge
