#pragma once

// Interior development for an atomic boundary measure nu = sum m_k delta(a_k):
//
//   f(z) = integral_0^z prod_k (zeta - a_k)^(-2 m_k) d zeta,
//
// on the branch fixed by phi(0) = prod (-a_k)^(m_k) with principal values.
// Along a straight path from 0 the principal log of (1 - zeta / a_k) is
// continuous unless the path runs through a_k, so the branch never needs
// explicit tracking; panels are still split until the integrand's argument
// moves less than pi/8 across each one.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "capforge/error.hpp"
#include "capforge/geometry.hpp"
#include "capforge/measure.hpp"

namespace capforge {

struct InteriorOptions {
  double max_rotation = kPi / 8.0;  ///< per-panel bound on the change of arg of the integrand
  double atom_tol_rel = 1e-10;      ///< minimum path-to-atom distance relative to |z|
  std::size_t max_panels = 1u << 16;
  double quad_tol = 1e-13;
};

class InteriorDevelopment {
 public:
  InteriorDevelopment(std::span<const Point2> atoms, std::span<const double> masses, InteriorOptions opt = {})
      : atoms_(atoms.begin(), atoms.end()), masses_(masses.begin(), masses.end()), opt_(opt) {
    if (atoms_.size() != masses_.size()) throw ValidationError("interior_development: atom and mass counts differ");
    if (atoms_.empty()) throw ValidationError("interior_development: no atoms");
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (atoms_[k] == Point2{}) throw ValidationError("interior_development: atom at the origin");
      // Adding +0.0 turns a negative zero into +0 so -1 gets arg pi, not -pi.
      const Point2 w(-atoms_[k].real(), -atoms_[k].imag() + 0.0);
      log_phi0_ += masses_[k] * std::log(w);
    }
  }

  /// log of the integrand 1 / phi(zeta)^2 on the chosen branch.
  Point2 log_integrand(Point2 zeta) const {
    Point2 s = log_phi0_;
    for (std::size_t k = 0; k < atoms_.size(); ++k) s += masses_[k] * std::log(1.0 - zeta / atoms_[k]);
    return -2.0 * s;
  }

  Point2 phi0() const { return std::exp(log_phi0_); }

  Point2 operator()(Point2 z) const {
    if (z == Point2{}) return {};
    const double guard = opt_.atom_tol_rel * std::abs(z);
    for (Point2 a : atoms_) {
      if (point_segment_distance(a, Point2{}, z) <= guard) {
        throw ValidationError("interior_development: path from 0 passes through an atom");
      }
    }
    // Panels in u, the path being zeta = u z.
    std::vector<double> cuts{0.0, 1.0};
    std::vector<Point2> logs{log_integrand(0.0), log_integrand(z)};
    for (std::size_t i = 0; i + 1 < cuts.size();) {
      if (std::abs((logs[i + 1] - logs[i]).imag()) < opt_.max_rotation) {
        ++i;
        continue;
      }
      if (cuts.size() >= opt_.max_panels) {
        throw ConvergenceError("interior_development: branch rotation unresolved along the path");
      }
      const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
      cuts.insert(cuts.begin() + static_cast<std::ptrdiff_t>(i + 1), mid);
      logs.insert(logs.begin() + static_cast<std::ptrdiff_t>(i + 1), log_integrand(mid * z));
    }
    auto f = [&](double u) { return std::exp(log_integrand(u * z)); };
    Point2 sum{};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 10, opt_.quad_tol);
    }
    return sum * z;
  }

 private:
  std::vector<Point2> atoms_;
  std::vector<double> masses_;
  InteriorOptions opt_;
  Point2 log_phi0_{};
};

inline Point2 interior_development(std::span<const Point2> atoms, std::span<const double> masses, Point2 z,
                                   InteriorOptions opt = {}) {
  return InteriorDevelopment(atoms, masses, opt)(z);
}

/// Shape-level entry point: atoms are read off the measure (densities are not
/// allowed) and both 0 and z must lie inside J.
inline Point2 interior_development(const Polyline& j, const BoundaryMeasure& nu, Point2 z, InteriorOptions opt = {}) {
  if (!nu.densities.empty()) throw ValidationError("interior_development: measure must be atomic");
  const ArcLengthParam arc(j);
  require_valid(nu, arc.total_length());
  if (!point_in_polygon(j, Point2{})) throw ValidationError("interior_development: 0 is not inside J");
  if (!point_in_polygon(j, z)) throw ValidationError("interior_development: z is not inside J");
  std::vector<Point2> pts;
  std::vector<double> masses;
  for (const auto& a : nu.atoms) {
    pts.push_back(arc.point_at(a.t >= arc.total_length() ? 0.0 : a.t));
    masses.push_back(a.mass);
  }
  return interior_development(pts, masses, z, opt);
}

}  // namespace capforge
