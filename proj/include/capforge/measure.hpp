#pragma once

// Boundary probability measures and the cumulative curvature function
//   kappa(t) = 4 pi mu(s(0, t]).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/geometry.hpp"
#include "capforge/spatial.hpp"

namespace capforge {

struct Atom {
  double t = 0.0;     ///< arclength position in [0, L]
  double mass = 0.0;
};

/// Constant density (mass per unit length) on [t0, t1].
struct DensityPiece {
  double t0 = 0.0;
  double t1 = 0.0;
  double value = 0.0;
};

struct BoundaryMeasure {
  std::vector<Atom> atoms;
  std::vector<DensityPiece> densities;

  double total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.mass;
    for (const auto& d : densities) m += d.value * (d.t1 - d.t0);
    return m;
  }
};

enum class MeasureViolation { none, total_mass, negativity, oversized_atom, out_of_range };

struct MeasureVerdict {
  MeasureViolation violation = MeasureViolation::none;
  std::string message;

  bool ok() const noexcept { return violation == MeasureViolation::none; }
  explicit operator bool() const noexcept { return ok(); }
};

inline constexpr double kMassTolerance = 1e-10;

/// Accepts iff the total mass is 1 (within 1e-10), nothing is negative and
/// every point mass is strictly below 1/2. Atoms at the same position (mod L)
/// are one point mass. Pass L <= 0 to skip the range check.
inline MeasureVerdict validate(const BoundaryMeasure& m, double length = 0.0) {
  for (const auto& a : m.atoms) {
    if (!(a.mass >= 0.0)) return {MeasureViolation::negativity, "negative atom mass"};
  }
  for (const auto& d : m.densities) {
    if (!(d.value >= 0.0)) return {MeasureViolation::negativity, "negative density"};
    if (!(d.t1 >= d.t0)) return {MeasureViolation::out_of_range, "density interval is reversed"};
  }
  if (length > 0.0) {
    const double slack = 1e-12 * length;
    for (const auto& a : m.atoms) {
      if (a.t < -slack || a.t > length + slack) return {MeasureViolation::out_of_range, "atom outside [0, L]"};
    }
    for (const auto& d : m.densities) {
      if (d.t0 < -slack || d.t1 > length + slack) {
        return {MeasureViolation::out_of_range, "density piece outside [0, L]"};
      }
    }
  }
  const double total = m.total_mass();
  if (std::abs(total - 1.0) > kMassTolerance) {
    return {MeasureViolation::total_mass, "total mass " + std::to_string(total) + " differs from 1"};
  }

  std::vector<Atom> merged = m.atoms;
  if (length > 0.0) {
    for (auto& a : merged) {
      if (a.t >= length) a.t -= length;
    }
  }
  std::sort(merged.begin(), merged.end(), [](const Atom& x, const Atom& y) { return x.t < y.t; });
  double run = 0.0;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    run = (i > 0 && merged[i].t == merged[i - 1].t) ? run + merged[i].mass : merged[i].mass;
    if (run >= 0.5) {
      return {MeasureViolation::oversized_atom,
              "atom of mass " + std::to_string(run) + " at t=" + std::to_string(merged[i].t) + " is not below 1/2"};
    }
  }
  return {};
}

inline void require_valid(const BoundaryMeasure& m, double length = 0.0) {
  if (auto v = validate(m, length); !v) throw ValidationError("invalid measure: " + v.message);
}

/// Right-continuous, nondecreasing kappa(t) = 4 pi mu(s(0, t]) with kappa(0) = 0.
/// An atom at the basepoint t = 0 (or t = L) only registers at t = L.
class CurvatureFunction {
 public:
  CurvatureFunction() = default;

  CurvatureFunction(const BoundaryMeasure& m, double length) : length_(length) {
    require_valid(m, length);
    for (const auto& a : m.atoms) {
      if (a.mass == 0.0) continue;
      const double t = (a.t <= 0.0 || a.t >= length) ? length : a.t;
      atoms_.push_back({t, a.mass});
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return x.t < y.t; });
    atom_prefix_.resize(atoms_.size() + 1, 0.0);
    for (std::size_t i = 0; i < atoms_.size(); ++i) atom_prefix_[i + 1] = atom_prefix_[i] + atoms_[i].mass;

    // Piecewise-linear cumulative density: breakpoints with the density active to their right.
    struct Change {
      double t;
      double delta;
    };
    std::vector<Change> changes;
    for (const auto& d : m.densities) {
      if (d.value == 0.0 || d.t1 <= d.t0) continue;
      changes.push_back({d.t0, d.value});
      changes.push_back({d.t1, -d.value});
    }
    std::sort(changes.begin(), changes.end(), [](const Change& x, const Change& y) { return x.t < y.t; });
    double rate = 0.0;
    double mass = 0.0;
    double last = 0.0;
    for (const auto& c : changes) {
      mass += rate * (c.t - last);
      last = c.t;
      if (!knots_.empty() && knots_.back() == c.t) {
        rate += c.delta;
        rates_.back() = std::max(rate, 0.0);
      } else {
        rate += c.delta;
        knots_.push_back(c.t);
        knot_mass_.push_back(mass);
        rates_.push_back(std::max(rate, 0.0));
      }
    }
  }

  double length() const noexcept { return length_; }

  /// mu(s(0, t]) for t in [0, L].
  double mass_up_to(double t) const {
    if (t <= 0.0) return 0.0;
    const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t, [](double v, const Atom& a) { return v < a.t; });
    return atom_prefix_[static_cast<std::size_t>(it - atoms_.begin())] + density_mass_up_to(t);
  }

  double operator()(double t) const { return 4.0 * kPi * mass_up_to(t); }

  /// d kappa / dt just to the right of t, i.e. 4 pi times the density there.
  double rate_at(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    if (it == knots_.begin()) return 0.0;
    return 4.0 * kPi * rates_[static_cast<std::size_t>(it - knots_.begin()) - 1];
  }

  /// Point mass located exactly at t (0 and L refer to the basepoint).
  double atom_at(double t) const {
    if (t <= 0.0) t = length_;
    auto lo = std::lower_bound(atoms_.begin(), atoms_.end(), t, [](const Atom& a, double v) { return a.t < v; });
    double m = 0.0;
    for (; lo != atoms_.end() && lo->t == t; ++lo) m += lo->mass;
    return m;
  }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& density_knots() const noexcept { return knots_; }

 private:
  double density_mass_up_to(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    if (it == knots_.begin()) return 0.0;
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
    return knot_mass_[k] + rates_[k] * (t - knots_[k]);
  }

  double length_ = 0.0;
  std::vector<Atom> atoms_;
  std::vector<double> atom_prefix_;
  std::vector<double> knots_;
  std::vector<double> knot_mass_;
  std::vector<double> rates_;
};

inline CurvatureFunction make_curvature(const BoundaryMeasure& m, double length) {
  return CurvatureFunction(m, length);
}

/// The unique vertex measure for which a triangle's cap exists: each vertex
/// carries (pi - interior angle) / (2 pi).
struct TriangleMeasure {
  BoundaryMeasure measure;
  bool near_invalid = false;  ///< some mass within 0.01 of the 1/2 bound
};

inline TriangleMeasure triangle_measure(const Polyline& triangle) {
  if (!triangle.closed() || triangle.size() != 3) throw ValidationError("triangle_measure needs a closed triangle");
  const double area = std::abs(triangle.signed_area());
  const double scale = triangle.length();
  if (area <= 1e-14 * scale * scale) throw ValidationError("degenerate triangle");
  const ArcLengthParam arc(triangle);
  TriangleMeasure out;
  double angle_sum = 0.0;
  double angles[3];
  for (std::size_t k = 0; k < 3; ++k) {
    const Point2 prev = triangle[(k + 2) % 3] - triangle[k];
    const Point2 next = triangle[(k + 1) % 3] - triangle[k];
    angles[k] = std::abs(std::arg(next / prev));
    angle_sum += angles[k];
  }
  // Angles computed independently sum to pi up to rounding; spread the residue
  // so the masses sum to exactly one.
  const double fix = (kPi - angle_sum) / 3.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double theta = angles[k] + fix;
    const double mass = (kPi - theta) / kTwoPi;
    out.measure.atoms.push_back({arc.cumulative()[k], mass});
    if (mass > 0.5 - 0.01) out.near_invalid = true;
  }
  return out;
}

enum class Binning { none, atoms, densities };

struct SampledMeasure {
  BoundaryMeasure measure;
  std::size_t accepted = 0;
  std::size_t rejected = 0;  ///< hits farther than the tolerance from the boundary
};

/// Empirical measure of boundary hits: each accepted hit carries 1/N. With
/// binning, mass is pooled into `bins` uniform arclength bins, either as an
/// atom at each bin centre or as a constant density across the bin.
inline SampledMeasure measure_from_samples(std::span<const Point2> hits, const Polyline& shape, double tolerance,
                                           Binning binning = Binning::none, std::size_t bins = 0) {
  if (hits.empty()) throw ValidationError("measure_from_samples: no samples");
  if (binning != Binning::none && bins == 0) throw ValidationError("measure_from_samples: zero bins");
  const ArcLengthParam arc(shape);
  const double L = arc.total_length();
  const SegmentIndex index(shape.points(), shape.closed());

  std::vector<double> ts;
  ts.reserve(hits.size());
  SampledMeasure out;
  for (Point2 h : hits) {
    const auto near = index.nearest(h);
    if (near.distance > tolerance) {
      ++out.rejected;
      continue;
    }
    double t = arc.cumulative()[near.segment] + near.param * arc.edge_length(near.segment);
    if (t >= L) t = 0.0;
    ts.push_back(t);
  }
  out.accepted = ts.size();
  if (ts.empty()) throw ValidationError("measure_from_samples: every sample was rejected");
  const double w = 1.0 / static_cast<double>(ts.size());

  if (binning == Binning::none) {
    std::sort(ts.begin(), ts.end());
    for (double t : ts) {
      if (!out.measure.atoms.empty() && out.measure.atoms.back().t == t) {
        out.measure.atoms.back().mass += w;
      } else {
        out.measure.atoms.push_back({t, w});
      }
    }
    return out;
  }

  std::vector<std::size_t> counts(bins, 0);
  const double width = L / static_cast<double>(bins);
  for (double t : ts) ++counts[std::min(bins - 1, static_cast<std::size_t>(t / width))];
  for (std::size_t b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    const double mass = static_cast<double>(counts[b]) * w;
    const double t0 = static_cast<double>(b) * width;
    const double t1 = b + 1 == bins ? L : t0 + width;
    if (binning == Binning::atoms) {
      out.measure.atoms.push_back({0.5 * (t0 + t1), mass});
    } else {
      out.measure.densities.push_back({t0, t1, mass / (t1 - t0)});
    }
  }
  return out;
}

}  // namespace capforge
