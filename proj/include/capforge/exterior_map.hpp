#pragma once

// Exterior conformal maps Phi from the outside of the unit disk onto the
// outside of a shape, normalized as
//
//   Phi(w) = C (w + a_0 + a_1 / w + a_2 / w^2 + ...),   C > 0 the capacity,
//
// with Robin constant gamma = -log C. The harmonic cap development is
//
//   g(z) = integral_0^z Phi'(1/x) dx = C (z - sum_k k a_k z^(k+2) / (k+2)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "capforge/error.hpp"
#include "capforge/geometry.hpp"
#include "capforge/polynomial.hpp"

namespace capforge {

enum class ExteriorKind {
  identity_disk,  ///< Phi(w) = w
  joukowski,      ///< Phi(w) = w + 1/w, the slit [-2, 2]
  laurent,        ///< truncated series
  square,         ///< axis-aligned square [-1, 1]^2, Schwarz-Christoffel
};

class ExteriorMap {
 public:
  static ExteriorMap identity() { return ExteriorMap(ExteriorKind::identity_disk, 1.0, {}); }
  static ExteriorMap joukowski() { return ExteriorMap(ExteriorKind::joukowski, 1.0, {0.0, 1.0}); }
  static ExteriorMap laurent(std::vector<Point2> a, double capacity = 1.0) {
    if (!(capacity > 0.0)) throw ValidationError("capacity must be positive");
    return ExteriorMap(ExteriorKind::laurent, capacity, std::move(a));
  }

  ExteriorKind kind() const noexcept { return kind_; }
  double capacity() const noexcept { return capacity_; }
  double robin_constant() const { return -std::log(capacity_); }
  /// a_0, a_1, ... (scaled by 1/C); empty for the identity.
  const std::vector<Point2>& coefficients() const noexcept { return a_; }
  std::size_t order() const noexcept { return a_.size(); }

  /// |a_n| of the last retained coefficient, a proxy for the truncation error.
  /// Zero for the closed-form maps.
  double truncation_estimate() const {
    if (kind_ != ExteriorKind::laurent || a_.empty()) return 0.0;
    return std::abs(a_.back());
  }

  /// Whether the tail of the series has visibly decayed relative to its middle.
  bool decaying() const {
    if (a_.size() < 8) return true;
    const std::size_t n = a_.size();
    double mid = 0.0, tail = 0.0;
    for (std::size_t k = n / 4; k < n / 2; ++k) mid = std::max(mid, std::abs(a_[k]));
    for (std::size_t k = 3 * n / 4; k < n; ++k) tail = std::max(tail, std::abs(a_[k]));
    return tail <= 0.5 * mid || tail < 1e-14;
  }

  Point2 operator()(Point2 w) const {
    if (kind_ == ExteriorKind::identity_disk) return w;
    const Point2 q = 1.0 / w;
    Point2 s{};
    for (std::size_t k = a_.size(); k-- > 0;) s = s * q + a_[k];
    return capacity_ * (w + s);
  }

  Point2 derivative(Point2 w) const {
    if (kind_ == ExteriorKind::identity_disk) return 1.0;
    // d/dw sum a_k w^-k = -sum k a_k w^-(k+1)
    const Point2 q = 1.0 / w;
    Point2 s{};
    for (std::size_t k = a_.size(); k-- > 1;) s = s * q + static_cast<double>(k) * a_[k];
    return capacity_ * (1.0 - s * q * q);
  }

  /// g(z) = integral_0^z Phi'(1/x) dx.
  Point2 development(Point2 z) const {
    switch (kind_) {
      case ExteriorKind::identity_disk:
        return z;
      case ExteriorKind::joukowski:
        return z - z * z * z / 3.0;
      case ExteriorKind::square:
        return square_development(z);
      case ExteriorKind::laurent:
        break;
    }
    // C (z - sum_k k a_k z^(k+2) / (k+2)), Horner in z.
    Point2 s{};
    for (std::size_t k = a_.size(); k-- > 1;) {
      s = s * z + static_cast<double>(k) * a_[k] / static_cast<double>(k + 2);
    }
    return capacity_ * (z - s * z * z * z);
  }

  /// g'(z) = Phi'(1/z), written as a power series so z = 0 is fine.
  Point2 development_derivative(Point2 z) const {
    switch (kind_) {
      case ExteriorKind::identity_disk:
        return 1.0;
      case ExteriorKind::joukowski:
        return 1.0 - z * z;
      case ExteriorKind::square:
        return capacity_ * std::sqrt(1.0 + z * z * z * z);
      case ExteriorKind::laurent:
        break;
    }
    Point2 s{};
    for (std::size_t k = a_.size(); k-- > 1;) s = s * z + static_cast<double>(k) * a_[k];
    return capacity_ * (1.0 - s * z * z);
  }

  /// Phi^-1(z) for z outside the shape, by Newton continuation in from far
  /// along the ray through z. Throws ConvergenceError when z is not reached
  /// from outside the unit circle.
  Point2 inverse(Point2 z) const {
    if (kind_ == ExteriorKind::identity_disk) return z;
    if (kind_ == ExteriorKind::joukowski) {
      Point2 r = std::sqrt(z * z - 4.0);
      Point2 w = 0.5 * (z + r);
      if (std::abs(w) < 1.0) w = 0.5 * (z - r);
      return w;
    }
    const double far = 16.0 * (std::abs(operator()(Point2{1.0, 0.0})) + std::abs(operator()(Point2{-1.0, 0.0})) + 1.0);
    const double start = std::max(1.0, far / std::max(std::abs(z), 1e-300));
    Point2 w = z * start / capacity_ - (a_.empty() ? Point2{} : a_[0]);
    const int steps = start > 1.0 ? 40 : 1;
    for (int s = 1; s <= steps; ++s) {
      const double lambda = std::pow(start, 1.0 - static_cast<double>(s) / steps);
      const Point2 target = z * lambda;
      for (int it = 0; it < 60; ++it) {
        const Point2 step = (operator()(w) - target) / derivative(w);
        w -= step;
        if (std::abs(step) < 1e-15 * std::abs(w)) break;
      }
    }
    if (!(std::abs(w) > 1.0) || std::abs(operator()(w) - z) > 1e-10 * (1.0 + std::abs(z))) {
      throw ConvergenceError("exterior map inversion failed (point inside or on the shape?)");
    }
    return w;
  }

  /// G_P(z) = log|Phi^-1(z)| outside the shape, 0 where inversion lands on or
  /// inside the unit circle.
  double green(Point2 z) const {
    try {
      return std::max(0.0, std::log(std::abs(inverse(z))));
    } catch (const ConvergenceError&) {
      return 0.0;
    }
  }

  double metric_density(Point2 z) const { return std::exp(-2.0 * green(z)); }

 private:
  friend ExteriorMap square_exterior_map(std::size_t terms);

  ExteriorMap(ExteriorKind kind, double capacity, std::vector<Point2> a)
      : kind_(kind), capacity_(capacity), a_(std::move(a)) {}

  Point2 square_development(Point2 z) const {
    if (z == Point2{}) return {};
    auto f = [&](double u) {
      const Point2 x = u * z;
      return std::sqrt(1.0 + x * x * x * x);
    };
    // Split near the endpoint, where |z| = 1 may put a square-root zero.
    const Point2 a = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 0.5, 10, 1e-15);
    const Point2 b = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.5, 1.0, 20, 1e-15);
    return capacity_ * z * (a + b);
  }

  ExteriorKind kind_;
  double capacity_;
  std::vector<Point2> a_;
};

/// Exterior map of the square [-1, 1]^2:
///   Phi'(w) = C (1 + w^-4)^(1/2),  Phi(1) = 1 (the midpoint of the right edge).
/// The Laurent tail is kept to `terms` coefficients for evaluating Phi itself;
/// the development g(z) = C integral_0^z (1 + x^4)^(1/2) dx is computed by
/// quadrature and does not depend on the truncation.
inline ExteriorMap square_exterior_map(std::size_t terms = 4096) {
  // Phi(1)/C = 1 - integral_0^1 ((1 + u^4)^(1/2) - 1) / u^2 du
  auto h = [](double u) { return u == 0.0 ? 0.0 : (std::sqrt(1.0 + u * u * u * u) - 1.0) / (u * u); };
  const double f1 = 1.0 - boost::math::quadrature::gauss_kronrod<double, 31>::integrate(h, 0.0, 1.0, 10, 1e-16);
  const double cap = 1.0 / f1;
  std::vector<Point2> a(terms, Point2{});
  // w (1 + w^-4)^(1/2) integrated: a_{4j-1} = binom(1/2, j) / (1 - 4j).
  double binom = 1.0;
  for (std::size_t j = 1; 4 * j - 1 < terms; ++j) {
    binom *= (0.5 - static_cast<double>(j - 1)) / static_cast<double>(j);
    a[4 * j - 1] = binom / (1.0 - 4.0 * static_cast<double>(j));
  }
  return ExteriorMap(ExteriorKind::square, cap, std::move(a));
}

/// Bottcher map of z^2 + c as a Laurent series, from Phi(z)^2 + c = Phi(z^2).
/// Writing Phi = z sum_n b_n z^-n with b_0 = 1,
///   b_n = ([n even] b_{n/2} - c [n = 2] - sum_{j=1}^{n-1} b_j b_{n-j}) / 2,
/// and a_k = b_{k+1}.
inline ExteriorMap bottcher_series(Point2 c, std::size_t order, std::size_t orbit_iterations = 1000) {
  require_connected(PolynomialMap::quadratic(c), orbit_iterations);
  if (order == 0) throw ValidationError("bottcher_series: order must be positive");
  std::vector<Point2> b(order + 2, Point2{});
  b[0] = 1.0;
  for (std::size_t n = 1; n <= order + 1; ++n) {
    Point2 v{};
    if (n % 2 == 0) v += b[n / 2];
    if (n == 2) v -= c;
    for (std::size_t j = 1; j < n; ++j) v -= b[j] * b[n - j];
    b[n] = 0.5 * v;
  }
  std::vector<Point2> a(b.begin() + 1, b.begin() + static_cast<std::ptrdiff_t>(order + 1));
  return ExteriorMap::laurent(std::move(a));
}

/// Residual |Phi(z)^2 + c - Phi(z^2)| sampled on |z| = radius.
inline double bottcher_residual(const ExteriorMap& phi, Point2 c, double radius = 1.5, std::size_t samples = 256) {
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const Point2 z = std::polar(radius, kTwoPi * static_cast<double>(k) / static_cast<double>(samples));
    const Point2 p = phi(z);
    worst = std::max(worst, std::abs(p * p + c - phi(z * z)));
  }
  return worst;
}

/// g(z) for |z| <= 1. On the boundary circle a truncated series whose last
/// coefficient is not small is flagged through ConvergenceError.
inline Point2 harmonic_cap_development(const ExteriorMap& phi, Point2 z, double boundary_tol = 1e-6) {
  const double r = std::abs(z);
  if (r > 1.0 + 1e-12) throw ValidationError("harmonic_cap_development: |z| must be at most 1");
  if (r >= 1.0 - 1e-12 && phi.truncation_estimate() > boundary_tol) {
    throw ConvergenceError("harmonic_cap_development: series not converged on the unit circle (last coefficient " +
                           std::to_string(phi.truncation_estimate()) + ")");
  }
  return phi.development(z);
}

/// Harmonic cap boundary in the cap convention: s_hat(phi) = s0 + g(1) - g(e^{-i phi}),
/// for phi_j = 2 pi j / n, j = 0..n. With s0 = Phi(1) it starts at the shape's
/// basepoint and runs clockwise.
inline std::vector<Point2> harmonic_cap_boundary(const ExteriorMap& phi, std::size_t n, Point2 s0) {
  if (n == 0) throw ValidationError("harmonic_cap_boundary: need at least one segment");
  std::vector<Point2> out;
  out.reserve(n + 1);
  const Point2 g1 = phi.development(1.0);
  for (std::size_t j = 0; j <= n; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    out.push_back(s0 + g1 - phi.development(std::polar(1.0, -t)));
  }
  return out;
}

inline std::vector<Point2> harmonic_cap_boundary(const ExteriorMap& phi, std::size_t n) {
  return harmonic_cap_boundary(phi, n, phi(1.0));
}

/// Image of the unit circle under g itself, phi_j = 2 pi j / n, j = 0..n.
inline std::vector<Point2> development_curve(const ExteriorMap& phi, std::size_t n) {
  std::vector<Point2> out;
  out.reserve(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    out.push_back(phi.development(std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n))));
  }
  return out;
}

}  // namespace capforge
