#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "capforge/fixtures.hpp"
#include "capforge/geometry.hpp"

using namespace capforge;

namespace {

Polyline unit_square() { return Polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true); }

Polyline equilateral(double side = 1.0) {
  return Polyline({{0, 0}, {side, 0}, {0.5 * side, side * std::sqrt(3.0) / 2.0}}, true);
}

/// Random closed polygon with unsorted vertices; usually self-intersecting.
Polyline scrambled_polygon(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point2> v;
  while (v.size() < n) v.push_back({u(rng), u(rng)});
  return Polyline(std::move(v), true);
}

}  // namespace

TEST(Arclength, UnitSquare) {
  const ArcLengthParam arc = arclength_parametrize(unit_square());
  EXPECT_DOUBLE_EQ(arc.total_length(), 4.0);
  EXPECT_EQ(arc.point_at(0.5), Point2(0.5, 0.0));
  EXPECT_EQ(arc.point_at(0.0), Point2(0.0, 0.0));
}

TEST(Arclength, OpenSegment) {
  const ArcLengthParam arc(Polyline({{0, 0}, {3, 0}}, false));
  EXPECT_DOUBLE_EQ(arc.total_length(), 3.0);
  ASSERT_EQ(arc.edge_count(), 1u);
  EXPECT_EQ(arc.directions()[0], Point2(1.0, 0.0));
}

TEST(Arclength, EquilateralCumulative) {
  const ArcLengthParam arc(equilateral());
  ASSERT_EQ(arc.cumulative().size(), 4u);
  EXPECT_NEAR(arc.cumulative()[1], 1.0, 1e-15);
  EXPECT_NEAR(arc.cumulative()[2], 2.0, 1e-15);
  EXPECT_NEAR(arc.cumulative()[3], 3.0, 1e-15);
}

TEST(Arclength, ZeroLengthEdgeRejected) {
  EXPECT_THROW(Polyline({{0, 0}, {0, 0}, {1, 0}}, false), ValidationError);
}

TEST(Arclength, LengthIsSumOfEdgesAndDirectionsAreUnit) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Polyline p = fixtures::random_polygon(rng, 3 + trial % 40);
    const ArcLengthParam arc(p);
    double sum = 0.0;
    for (std::size_t k = 0; k < p.edge_count(); ++k) sum += std::abs(p.edge_vector(k));
    EXPECT_EQ(arc.total_length(), sum);
    for (Point2 d : arc.directions()) EXPECT_NEAR(std::abs(d), 1.0, 1e-12);
    for (std::size_t k = 1; k < arc.cumulative().size(); ++k) EXPECT_GT(arc.cumulative()[k], arc.cumulative()[k - 1]);
  }
}

TEST(Turning, UnitSquare) {
  const TurningData td = turning_angles(unit_square());
  ASSERT_EQ(td.jumps.size(), 4u);
  for (const auto& j : td.jumps) EXPECT_NEAR(j.turn, kPi / 2, 1e-15);
  EXPECT_EQ(td.alpha[0], 0.0);
}

TEST(Turning, Equilateral) {
  const TurningData td = turning_angles(equilateral());
  ASSERT_EQ(td.jumps.size(), 3u);
  for (const auto& j : td.jumps) EXPECT_NEAR(j.turn, 2 * kPi / 3, 1e-14);
}

TEST(Turning, LHexagonHasOneReflexVertex) {
  const TurningData td = turning_angles(fixtures::l_hexagon());
  int plus = 0, minus = 0;
  double sum = 0.0;
  for (const auto& j : td.jumps) {
    sum += j.turn;
    if (std::abs(j.turn - kPi / 2) < 1e-14) ++plus;
    if (std::abs(j.turn + kPi / 2) < 1e-14) ++minus;
  }
  EXPECT_EQ(plus, 5);
  EXPECT_EQ(minus, 1);
  EXPECT_NEAR(sum, kTwoPi, 1e-12);
}

TEST(Turning, ClockwiseRejected) {
  EXPECT_THROW(turning_angles(unit_square().reversed()), ValidationError);
}

TEST(Turning, JumpsSumToTwoPiOnRandomPolygons) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const TurningData td = turning_angles(fixtures::random_polygon(rng, 3 + trial % 60));
    double sum = 0.0;
    for (const auto& j : td.jumps) sum += j.turn;
    EXPECT_NEAR(sum, kTwoPi, 1e-9);
  }
}

TEST(Winding, SquareExamples) {
  EXPECT_EQ(winding_number(unit_square(), {0.5, 0.5}), 1);
  EXPECT_EQ(winding_number(unit_square(), {5, 5}), 0);
  EXPECT_EQ(winding_number(unit_square().reversed(), {0.5, 0.5}), -1);
}

TEST(Winding, PointOnBoundaryRejected) {
  EXPECT_THROW(winding_number(unit_square(), {0.5, 0.0}), ValidationError);
}

TEST(Winding, InvariantUnderRigidMotion) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.5, 1.5), ang(0.0, kTwoPi);
  for (int trial = 0; trial < 200; ++trial) {
    const Polyline p = fixtures::random_polygon(rng, 5 + trial % 30);
    const Point2 q{u(rng), u(rng)};
    if (distance_to_polyline(p, q) < 1e-6) continue;
    const Point2 rot = std::polar(1.0, ang(rng)), shift{u(rng), u(rng)};
    std::vector<Point2> moved;
    for (Point2 v : p.points()) moved.push_back(rot * v + shift);
    EXPECT_EQ(winding_number(p, q), winding_number(Polyline(moved, true), rot * q + shift));
  }
}

TEST(Simple, ConvexQuadrilateral) { EXPECT_TRUE(is_simple(unit_square()).simple); }

TEST(Simple, Bowtie) {
  const auto v = is_simple(Polyline({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, true));
  ASSERT_FALSE(v.simple);
  EXPECT_EQ(v.first, 0u);
  EXPECT_EQ(v.second, 2u);
  EXPECT_NEAR(v.where.real(), 0.5, 1e-12);
  EXPECT_NEAR(v.where.imag(), 0.5, 1e-12);
}

TEST(Simple, ThousandGonCircle) { EXPECT_TRUE(is_simple(fixtures::regular_polygon(1000)).simple); }

TEST(Simple, SweepAgreesWithBruteForce) {
  std::mt19937_64 rng(14);
  for (std::size_t n : {65u, 100u, 300u, 1000u, 2000u}) {
    for (int trial = 0; trial < 3; ++trial) {
      const Polyline star = fixtures::random_polygon(rng, n);
      const double tol = 1e-12 * star.length();
      EXPECT_EQ(is_simple(star).simple, detail::brute_force_simple(star, tol).simple) << n;
      const Polyline messy = scrambled_polygon(rng, n / 10 + 65);
      EXPECT_EQ(is_simple(messy).simple, detail::brute_force_simple(messy, 1e-12 * messy.length()).simple) << n;
    }
  }
  // A simple polygon with one defect planted near the end.
  std::vector<Point2> v = fixtures::regular_polygon(1500).points();
  v[1400] = {-0.9, 0.0};
  const Polyline dented(v, true);
  EXPECT_EQ(is_simple(dented).simple, detail::brute_force_simple(dented, 1e-12 * dented.length()).simple);
  const Polyline spiral = fixtures::naive_spiral_fixture();
  EXPECT_EQ(is_simple(spiral).simple, detail::brute_force_simple(spiral, 1e-12 * spiral.length()).simple);
  EXPECT_TRUE(is_simple(spiral).simple);
}

TEST(Hull, SquareWithInteriorPoint) {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {0.4, 0.6}, {1, 1}, {0, 1}};
  const ConvexHull h = convex_hull(pts);
  EXPECT_FALSE(h.degenerate);
  EXPECT_EQ(h.hull.size(), 4u);
  EXPECT_NEAR(h.hull.signed_area(), 1.0, 1e-15);
}

TEST(Hull, CirclePointsKeepAllInCcwOrder) {
  const Polyline c = fixtures::regular_polygon(50);
  const ConvexHull h = convex_hull(c.points());
  ASSERT_EQ(h.hull.size(), 50u);
  EXPECT_GT(h.hull.signed_area(), 0.0);
  for (std::size_t k = 1; k < 50; ++k) EXPECT_EQ((h.ids[k] + 50 - h.ids[k - 1]) % 50, 1u);
}

TEST(Hull, CollinearFlaggedDegenerate) {
  const std::vector<Point2> pts{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  const ConvexHull h = convex_hull(pts);
  EXPECT_TRUE(h.degenerate);
  EXPECT_EQ(h.hull.size(), 2u);
}

TEST(Hull, CoincidentRejected) {
  const std::vector<Point2> pts{{1, 1}, {1, 1}};
  EXPECT_THROW(convex_hull(pts), ValidationError);
}

TEST(Hull, ContainsEveryInputPoint) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point2> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({g(rng), g(rng)});
    const ConvexHull h = convex_hull(pts);
    for (Point2 p : pts) {
      if (distance_to_polyline(h.hull, p) < 1e-12) continue;
      EXPECT_TRUE(point_in_polygon(h.hull, p));
    }
    // No collinear triples survive on the hull.
    const auto& v = h.hull.points();
    for (std::size_t k = 0; k < v.size(); ++k) {
      EXPECT_GT(cross(v[(k + 1) % v.size()] - v[k], v[(k + 2) % v.size()] - v[(k + 1) % v.size()]), 0.0);
    }
  }
}

TEST(Hausdorff, ShiftedSquare) {
  const Polyline a = unit_square();
  std::vector<Point2> b;
  for (Point2 p : a.points()) b.push_back(p + Point2(0.25, 0.0));
  EXPECT_NEAR(hausdorff_distance(a.points(), b), 0.25, 1e-15);
}
