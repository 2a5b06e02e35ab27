#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "capforge/capforge.hpp"

using namespace capforge;

namespace {

/// Taylor coefficients of g by a discrete Cauchy integral on |z| = r.
std::vector<Point2> taylor(const ExteriorMap& phi, std::size_t count, double r = 0.5, std::size_t m = 64) {
  std::vector<Point2> c(count);
  for (std::size_t j = 0; j < m; ++j) {
    const double a = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    const Point2 v = phi.development(std::polar(r, a));
    for (std::size_t k = 0; k < count; ++k) c[k] += v * std::polar(std::pow(r, -double(k)), -double(k) * a) / double(m);
  }
  return c;
}

double slit_theta(double t) {
  if (t <= 4.0) return std::acos(std::clamp((2.0 - t) / 2.0, -1.0, 1.0));
  return kTwoPi - std::acos(std::clamp((t - 6.0) / 2.0, -1.0, 1.0));
}

}  // namespace

TEST(Green, SquaringMapIsLogModulus) {
  const auto f = PolynomialMap::quadratic(0.0);
  for (Point2 z : {Point2(2, 0), Point2(0.3, 1.7), Point2(-5, 4)}) {
    EXPECT_NEAR(green_polynomial(f, z), std::log(std::abs(z)), 1e-12);
    EXPECT_NEAR(metric_density_polynomial(f, z), 1.0 / std::norm(z), 1e-12);
  }
  EXPECT_EQ(green_polynomial(f, Point2(0.5, 0.2)), 0.0);
  EXPECT_EQ(metric_density_polynomial(f, Point2(0.5, 0.2)), 1.0);
}

TEST(Green, ChebyshevAgreesWithInverseJoukowski) {
  const auto f = PolynomialMap::quadratic(-2.0);
  const ExteriorMap jk = ExteriorMap::joukowski();
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const Point2 z{u(rng), u(rng)};
    if (std::abs(z.imag()) < 1e-3) continue;
    EXPECT_NEAR(green_polynomial(f, z), jk.green(z), 1e-8) << z;
  }
}

TEST(Green, MoreIterationsChangeNothing) {
  const auto f = PolynomialMap::quadratic(Point2(-0.12, 0.75));
  GreenOptions a, b;
  b.max_iterations = 2 * a.max_iterations;
  for (Point2 z : {Point2(1.5, 0), Point2(0.2, 1.2), Point2(-1.1, -0.4)}) {
    EXPECT_NEAR(green_polynomial(f, z, a), green_polynomial(f, z, b), 1e-10);
  }
}

TEST(Connected, DisconnectedReportsOrbit) {
  const auto r = check_connected(PolynomialMap::quadratic(1.0));
  EXPECT_FALSE(r.connected);
  EXPECT_THROW(require_connected(PolynomialMap::quadratic(1.0)), ValidationError);
  EXPECT_TRUE(check_connected(PolynomialMap::quadratic(-1.0)).connected);
}

TEST(Bottcher, FunctionalEquationResidual) {
  for (Point2 c : {Point2(-1, 0), Point2(-0.12, 0.75), Point2(0, 0)}) {
    const ExteriorMap phi = bottcher_series(c, 64);
    EXPECT_LT(bottcher_residual(phi, c, 1.5), 1e-8) << c;
  }
}

TEST(Bottcher, ChebyshevSeriesIsJoukowski) {
  const ExteriorMap phi = bottcher_series(-2.0, 16);
  ASSERT_GE(phi.coefficients().size(), 2u);
  EXPECT_NEAR(std::abs(phi.coefficients()[1] - Point2(1.0)), 0.0, 1e-12);
  for (std::size_t k = 2; k < phi.coefficients().size(); ++k) EXPECT_NEAR(std::abs(phi.coefficients()[k]), 0.0, 1e-12);
}

TEST(Development, JoukowskiIsCubic) {
  const ExteriorMap jk = ExteriorMap::joukowski();
  const auto c = taylor(jk, 8);
  const std::vector<Point2> expect{0.0, 1.0, 0.0, -1.0 / 3, 0.0, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(std::abs(c[k] - expect[k]), 0.0, 1e-12) << k;
  EXPECT_NEAR(std::abs(harmonic_cap_development(jk, 1.0) - Point2(2.0 / 3)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(harmonic_cap_development(jk, -1.0) - Point2(-2.0 / 3)), 0.0, 1e-15);
  // The general series path gives the same polynomial.
  const ExteriorMap series = ExteriorMap::laurent({0.0, 1.0});
  const auto d = taylor(series, 8);
  for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(std::abs(d[k] - expect[k]), 0.0, 1e-12) << k;
}

TEST(Development, DiskIsFixed) {
  const ExteriorMap id = ExteriorMap::identity();
  for (double r : {0.0, 0.4, 1.0}) {
    for (int k = 0; k < 12; ++k) {
      const Point2 z = std::polar(r, kTwoPi * k / 12);
      EXPECT_EQ(harmonic_cap_development(id, z), z);
    }
  }
}

TEST(Development, OutsideDiskRejected) {
  EXPECT_THROW(harmonic_cap_development(ExteriorMap::joukowski(), Point2(1.1, 0)), ValidationError);
}

TEST(Development, UnconvergedSeriesFlaggedOnCircle) {
  const ExteriorMap phi = bottcher_series(0.25, 8);
  EXPECT_THROW(harmonic_cap_development(phi, Point2(0, 1)), ConvergenceError);
  EXPECT_NO_THROW(harmonic_cap_development(phi, Point2(0, 0.5)));
}

TEST(Development, DerivativeNonzeroInsideDisk) {
  for (const ExteriorMap& phi : {bottcher_series(-1.0, 64), square_exterior_map(), ExteriorMap::joukowski()}) {
    for (double r = 0.0; r <= 0.95; r += 0.05) {
      for (int k = 0; k < 36; ++k) {
        EXPECT_GT(std::abs(phi.development_derivative(std::polar(r, kTwoPi * k / 36))), 1e-6);
      }
    }
  }
}

TEST(Development, SeriesAgreesWithDefinitionOnCircle) {
  // d/dphi g(r e^{-i phi}) = -i z g'(z).
  const ExteriorMap phi = bottcher_series(-1.0, 64);
  for (int k = 0; k < 16; ++k) {
    const double a = kTwoPi * k / 16, h = 1e-5;
    const Point2 num = (phi.development(std::polar(0.9, -a - h)) - phi.development(std::polar(0.9, -a + h))) / (2 * h);
    const Point2 z = std::polar(0.9, -a);
    const Point2 exact = Point2(0, -1) * z * phi.development_derivative(z);
    EXPECT_NEAR(std::abs(num - exact), 0.0, 1e-7);
  }
}

TEST(SquareMap, CircleLandsOnSquare) {
  const ExteriorMap phi = square_exterior_map();
  for (int k = 0; k < 64; ++k) {
    const Point2 p = phi(std::polar(1.0, kTwoPi * (k + 0.37) / 64));
    EXPECT_NEAR(std::max(std::abs(p.real()), std::abs(p.imag())), 1.0, 1e-3);
  }
}

TEST(ConformalAngle, DiskIsArclength) {
  const Polyline disk = fixtures::regular_polygon(4096);
  const double L = disk.length();
  std::vector<double> ts;
  for (int j = 0; j <= 64; ++j) ts.push_back(L * j / 64.0);
  const auto th = conformal_angle(ExteriorMap::identity(), disk, ts);
  for (std::size_t j = 0; j < ts.size(); ++j) EXPECT_NEAR(th[j], kTwoPi * ts[j] / L, 1e-6);
}

TEST(ConformalAngle, SlitMatchesClosedForm) {
  const Polyline slit = fixtures::interval_slit();
  std::vector<double> ts;
  for (int j = 0; j <= 800; ++j) ts.push_back(8.0 * j / 800.0);
  const auto th = conformal_angle(ExteriorMap::joukowski(), slit, ts);
  double worst = 0.0;
  for (std::size_t j = 0; j < ts.size(); ++j) worst = std::max(worst, std::abs(th[j] - slit_theta(ts[j])));
  EXPECT_LT(worst, 1e-6);
  EXPECT_NEAR(th[400], kPi, 1e-9);
  for (std::size_t j = 1; j < th.size(); ++j) EXPECT_GE(th[j], th[j - 1]);
}

TEST(ConformalAngle, MatchesHalfTheCurvature) {
  // For harmonic measure kappa = 2 theta.
  const CurvatureFunction k(fixtures::slit_harmonic_measure(4096), 8.0);
  for (double t : {0.0, 1.0, 2.5, 4.0, 6.0, 7.5}) {
    EXPECT_NEAR(conformal_angle_from_measure(k, t), slit_theta(t), 1e-3);
  }
}

TEST(Julia, SquaringCircleAtDepthThree) {
  const auto jb = julia_boundary(PolynomialMap::quadratic(0.0), 2.0, 3);
  ASSERT_EQ(jb.polygon.size(), 8u);
  for (Point2 p : jb.polygon.points()) EXPECT_NEAR(std::abs(p), std::pow(2.0, 1.0 / 8), 1e-12);
  for (const auto& a : jb.measure.atoms) EXPECT_NEAR(a.mass, 1.0 / 8, 1e-15);
  EXPECT_GT(jb.polygon.signed_area(), 0.0);
}

TEST(Julia, PolygonsAreSimple) {
  for (Point2 c : {Point2(0, 0), Point2(-1, 0), Point2(0.25, 0)}) {
    const auto jb = julia_boundary(PolynomialMap::quadratic(c), default_basepoint(c), 9);
    EXPECT_EQ(jb.polygon.size(), 512u);
    EXPECT_TRUE(is_simple(jb.polygon).simple) << c;
    EXPECT_TRUE(validate(jb.measure, jb.polygon.length()).ok());
  }
}

TEST(Julia, DisconnectedRejected) {
  EXPECT_THROW(julia_boundary(PolynomialMap::quadratic(1.0), 2.0, 4), ValidationError);
}

TEST(Julia, VerticesApproachTheJuliaSet) {
  // Depth n vertices sit at Green level G(b) / 2^n.
  const auto f = PolynomialMap::quadratic(-1.0);
  const auto jb = julia_boundary(f, 2.0, 8);
  const double level = green_polynomial(f, 2.0) / 256.0;
  for (Point2 p : jb.polygon.points()) EXPECT_NEAR(green_polynomial(f, p), level, 1e-9);
}

TEST(RouteEquivalence, SlitCapFromMeasureMatchesSeries) {
  const ExteriorMap jk = ExteriorMap::joukowski();
  CapOptions o;
  o.check_shape = false;
  const auto cap = cap_boundary(fixtures::interval_slit(), fixtures::slit_harmonic_measure(32768), o);
  const auto series = harmonic_cap_boundary(jk, 8192);
  EXPECT_LT(hausdorff_distance(cap.samples, series), 1e-5);
}
