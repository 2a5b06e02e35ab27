#pragma once

// The naive cap: the convex hull of the shape plus a copy of every pocket
// (component of hull minus shape), each pocket flipped outward across its
// chord. Curvature sits at hull corners that touch the shape.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/geometry.hpp"
#include "capforge/measure.hpp"

namespace capforge {

/// Mirror image of p across the line through a and b.
inline Point2 reflect_across(Point2 p, Point2 a, Point2 b) {
  const Point2 u = (b - a) / std::abs(b - a);
  return a + u * u * std::conj((p - a));
}

struct NaiveCap {
  Polyline hull;                   ///< counterclockwise convex hull
  std::vector<std::size_t> hull_ids;  ///< shape vertex index of each hull corner
  std::vector<Polyline> flaps;     ///< each pocket (closed) reflected across its chord
  Polyline development;            ///< shape boundary with every pocket path flipped outward
  BoundaryMeasure measure;         ///< atoms at hull corners, (pi - hull angle) / (2 pi)
  SimplicityVerdict planar;        ///< is_simple on the development boundary
};

inline NaiveCap naive_cap(const Polyline& shape) {
  if (!shape.closed()) throw ValidationError("naive_cap: shape must be closed");
  const auto& pts = shape.points();
  const std::size_t n = pts.size();
  const ConvexHull ch = convex_hull(pts);
  if (ch.degenerate) throw ValidationError("naive_cap: shape lies on a line");

  // Hull corners in the shape's own cyclic order, starting from the smallest index.
  std::vector<std::size_t> ids = ch.ids;
  if (shape.signed_area() < 0.0) throw ValidationError("naive_cap: shape must be counterclockwise");
  std::size_t rot = 0;
  for (std::size_t k = 1; k < ids.size(); ++k) {
    if (ids[k] < ids[rot]) rot = k;
  }
  std::rotate(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(rot), ids.end());
  for (std::size_t k = 1; k < ids.size(); ++k) {
    if (ids[k] <= ids[k - 1]) throw ValidationError("naive_cap: hull order disagrees with shape order (not simple?)");
  }

  const ArcLengthParam arc(shape);
  NaiveCap out{ch.hull, ids, {}, Polyline(pts, true), {}, {}};
  std::vector<Point2> dev(pts.begin(), pts.end());
  const std::size_t h = ids.size();
  for (std::size_t k = 0; k < h; ++k) {
    const std::size_t i = ids[k];
    const std::size_t j = ids[(k + 1) % h];
    const std::size_t steps = (j + n - i) % n;
    if (steps == 0 && h > 1) continue;
    const Point2 a = pts[i];
    const Point2 b = pts[j];
    if (steps > 1) {
      std::vector<Point2> flap{a};
      for (std::size_t s = 1; s < steps; ++s) {
        const std::size_t v = (i + s) % n;
        dev[v] = reflect_across(pts[v], a, b);
        flap.push_back(dev[v]);
      }
      flap.push_back(b);
      std::reverse(flap.begin(), flap.end());
      out.flaps.emplace_back(std::move(flap), true);
    }
    // Hull corner angle at pts[j].
    const Point2 c = pts[ids[(k + 2) % h]];
    const double theta = std::abs(std::arg((c - b) / (a - b)));
    out.measure.atoms.push_back({arc.cumulative()[j], (kPi - theta) / kTwoPi});
  }
  std::sort(out.measure.atoms.begin(), out.measure.atoms.end(),
            [](const Atom& x, const Atom& y) { return x.t < y.t; });
  // Hull angles are measured one at a time; spread the rounding residue.
  double total = 0.0;
  for (const auto& at : out.measure.atoms) total += at.mass;
  for (auto& at : out.measure.atoms) at.mass += (1.0 - total) / static_cast<double>(out.measure.atoms.size());

  out.development = Polyline(std::move(dev), true);
  out.planar = is_simple(out.development);
  return out;
}

/// An interval of the given length bent at its midpoint, with the hull
/// triangle that carries its naive cap and the triangle's vertex measure.
struct BentInterval {
  Polyline path;      ///< open polyline A, M, B
  Polyline triangle;  ///< counterclockwise hull triangle
  TriangleMeasure measure;
};

inline BentInterval bend_interval(double length, double angle) {
  if (!(length > 0.0)) throw ValidationError("bend_interval: length must be positive");
  if (!(angle > 0.0 && angle < kPi)) throw ValidationError("bend_interval: angle must lie in (0, pi)");
  const double half = 0.5 * length;
  const Point2 m{0.0, 0.0};
  const Point2 a = std::polar(half, -0.5 * angle);
  const Point2 b = std::polar(half, 0.5 * angle);
  BentInterval out{Polyline({a, m, b}, false), Polyline({m, a, b}, true), {}};
  out.measure = triangle_measure(out.triangle);
  return out;
}

}  // namespace capforge
