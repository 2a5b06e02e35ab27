#pragma once

// Complex polynomials of degree d >= 2 and the dynamical Green function
//   G_f(z) = lim d^-n log+ |f^n(z)|.

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/geometry.hpp"

namespace capforge {

class PolynomialMap {
 public:
  /// Coefficients in ascending order: f(z) = sum coeffs[k] z^k.
  explicit PolynomialMap(std::vector<Point2> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == Point2{}) coeffs_.pop_back();
    if (coeffs_.size() < 3) throw ValidationError("polynomial must have degree at least 2");
    for (Point2 c : coeffs_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ValidationError("non-finite coefficient");
    }
  }

  /// z^2 + c
  static PolynomialMap quadratic(Point2 c) { return PolynomialMap({c, Point2{}, Point2{1.0, 0.0}}); }

  const std::vector<Point2>& coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  Point2 leading() const noexcept { return coeffs_.back(); }

  /// True for monic z^2 + c; the Laurent/Bottcher path is limited to these.
  bool is_unicritical_quadratic() const {
    return degree() == 2 && coeffs_[2] == Point2{1.0, 0.0} && coeffs_[1] == Point2{};
  }
  Point2 quadratic_c() const { return coeffs_[0]; }

  Point2 operator()(Point2 z) const {
    Point2 v = coeffs_.back();
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) v = v * z + coeffs_[k];
    return v;
  }

  Point2 derivative(Point2 z) const {
    Point2 v{};
    for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) v = v * z + static_cast<double>(k) * coeffs_[k];
    return v;
  }

  /// Roots of f' (critical points), by Durand-Kerner on the monic derivative.
  std::vector<Point2> critical_points() const {
    const std::size_t m = degree() - 1;
    std::vector<Point2> dc(m + 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) dc[k - 1] = static_cast<double>(k) * coeffs_[k];
    for (auto& c : dc) c /= dc.back();
    if (m == 1) return {Point2{} - dc[0] + Point2{}};
    auto eval = [&](Point2 z) {
      Point2 v = dc.back();
      for (std::size_t k = m; k-- > 0;) v = v * z + dc[k];
      return v;
    };
    double bound = 0.0;
    for (std::size_t k = 0; k < m; ++k) bound = std::max(bound, std::abs(dc[k]));
    std::vector<Point2> r(m);
    for (std::size_t k = 0; k < m; ++k) r[k] = std::polar(1.0 + bound, 0.4 + kTwoPi * static_cast<double>(k) / static_cast<double>(m));
    for (int it = 0; it < 500; ++it) {
      double change = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        Point2 den{1.0, 0.0};
        for (std::size_t j = 0; j < m; ++j) {
          if (j != i) den *= r[i] - r[j];
        }
        if (den == Point2{}) den = {1e-300, 0.0};
        const Point2 step = eval(r[i]) / den;
        r[i] -= step;
        change = std::max(change, std::abs(step));
      }
      if (change < 1e-15 * (1.0 + bound)) break;
    }
    return r;
  }

  /// Radius beyond which |f(z)| > 2|z|, so every orbit leaving it escapes.
  /// For z^2 + c this is max(2, 2|c|) + 1.
  double escape_radius() const {
    if (is_unicritical_quadratic()) return std::max(2.0, 2.0 * std::abs(coeffs_[0])) + 1.0;
    const double ad = std::abs(leading());
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < coeffs_.size(); ++k) s += std::abs(coeffs_[k]);
    const double d = static_cast<double>(degree());
    return std::max({1.0, 2.0 * s / ad, std::pow(4.0 / ad, 1.0 / (d - 1.0))}) + 1.0;
  }

 private:
  std::vector<Point2> coeffs_;
};

struct GreenOptions {
  std::size_t max_iterations = 1000;
  double escape_radius = 0.0;  ///< 0 selects the polynomial's own escape radius
  double tail_radius = 1e12;   ///< keep iterating past escape until here so the tail term is negligible
};

struct GreenValue {
  double value = 0.0;
  bool escaped = false;
  std::size_t iterations = 0;
};

/// G_f(z) by escape time: once |f^n(z)| passes the tail radius,
///   G = d^-n (log|f^n(z)| + log|a_d| / (d - 1)),
/// otherwise 0 when the orbit stays bounded for max_iterations.
inline GreenValue green_polynomial_detail(const PolynomialMap& f, Point2 z, const GreenOptions& opt = {}) {
  const double r_esc = opt.escape_radius > 0.0 ? opt.escape_radius : f.escape_radius();
  const double d = static_cast<double>(f.degree());
  const double shift = std::log(std::abs(f.leading())) / (d - 1.0);
  GreenValue out;
  double scale = 1.0;
  bool escaped = false;
  for (std::size_t n = 0; n <= opt.max_iterations; ++n) {
    const double m = std::abs(z);
    if (!escaped && m > r_esc) escaped = true;
    if (escaped && m > opt.tail_radius) {
      out.value = std::max(0.0, scale * (std::log(m) + shift));
      out.escaped = true;
      out.iterations = n;
      return out;
    }
    if (n == opt.max_iterations) {
      if (escaped) out = {std::max(0.0, scale * (std::log(m) + shift)), true, n};
      return out;
    }
    z = f(z);
    scale /= d;
  }
  return out;
}

inline double green_polynomial(const PolynomialMap& f, Point2 z, const GreenOptions& opt = {}) {
  return green_polynomial_detail(f, z, opt).value;
}

/// e^{-2G}: the conformal factor of the dynamical metric.
inline double metric_density_polynomial(const PolynomialMap& f, Point2 z, const GreenOptions& opt = {}) {
  return std::exp(-2.0 * green_polynomial(f, z, opt));
}

struct ConnectednessReport {
  bool connected = true;
  Point2 critical_point{};
  std::vector<Point2> orbit;  ///< the escaping critical orbit, when there is one

  std::string describe() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
      if (k) os << " -> ";
      const Point2 z = orbit[k];
      if (z.imag() == 0.0) {
        os << z.real();
      } else {
        os << '(' << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i)";
      }
    }
    return os.str();
  }
};

/// K(f) is connected iff every critical orbit stays bounded.
inline ConnectednessReport check_connected(const PolynomialMap& f, std::size_t max_iterations = 1000) {
  const double r = f.escape_radius();
  for (Point2 c : f.critical_points()) {
    std::vector<Point2> orbit{c};
    Point2 z = c;
    for (std::size_t n = 0; n < max_iterations; ++n) {
      if (std::abs(z) > r) return {false, c, orbit};
      z = f(z);
      orbit.push_back(z);
    }
  }
  return {};
}

inline void require_connected(const PolynomialMap& f, std::size_t max_iterations = 1000) {
  if (auto rep = check_connected(f, max_iterations); !rep.connected) {
    throw ValidationError("Julia set is disconnected: critical orbit " + rep.describe() + " escapes");
  }
}

}  // namespace capforge
