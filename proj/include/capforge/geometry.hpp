#pragma once

// Planar primitives: polylines, arclength parametrization, turning angles,
// winding numbers, simplicity tests and convex hulls.
//
// Points are std::complex<double>; x + iy is the point (x, y).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "capforge/error.hpp"

namespace capforge {

using Point2 = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double cross(Point2 a, Point2 b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Point2 a, Point2 b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// Parameter in [0, 1] of the point of segment [a, b] closest to p.
inline double closest_param(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
}

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  return std::abs(p - (a + closest_param(p, a, b) * (b - a)));
}

/// Ordered planar points. Closed polylines store each vertex once; the edge
/// from the last point back to the first is implicit.
class Polyline {
 public:
  Polyline() = default;

  Polyline(std::vector<Point2> points, bool closed) : points_(std::move(points)), closed_(closed) {
    if (points_.size() < 2) throw ValidationError("polyline needs at least two points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!std::isfinite(points_[i].real()) || !std::isfinite(points_[i].imag())) {
        throw ValidationError("polyline point " + std::to_string(i) + " is not finite");
      }
      if (i + 1 < points_.size() && points_[i] == points_[i + 1]) {
        throw ValidationError("polyline has a zero-length edge at point " + std::to_string(i));
      }
    }
    if (closed_ && points_.front() == points_.back()) {
      throw ValidationError("closed polyline must not repeat its first point");
    }
  }

  const std::vector<Point2>& points() const noexcept { return points_; }
  bool closed() const noexcept { return closed_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }

  std::size_t edge_count() const noexcept { return closed_ ? points_.size() : points_.size() - 1; }
  Point2 edge_start(std::size_t k) const { return points_[k]; }
  Point2 edge_end(std::size_t k) const { return points_[(k + 1) % points_.size()]; }
  Point2 edge_vector(std::size_t k) const { return edge_end(k) - edge_start(k); }

  double length() const {
    double total = 0.0;
    for (std::size_t k = 0; k < edge_count(); ++k) total += std::abs(edge_vector(k));
    return total;
  }

  /// Shoelace area; positive for counterclockwise closed polylines.
  double signed_area() const {
    double twice = 0.0;
    for (std::size_t k = 0; k < points_.size(); ++k) {
      twice += cross(points_[k], points_[(k + 1) % points_.size()]);
    }
    return 0.5 * twice;
  }

  Polyline reversed() const {
    std::vector<Point2> pts(points_.rbegin(), points_.rend());
    if (closed_) std::rotate(pts.begin(), pts.end() - 1, pts.end());
    return Polyline(std::move(pts), closed_);
  }

 private:
  std::vector<Point2> points_;
  bool closed_ = false;
};

/// Unit-speed parametrization s(t) of a polyline, t in [0, L].
class ArcLengthParam {
 public:
  explicit ArcLengthParam(const Polyline& p) : vertices_(p.points()), closed_(p.closed()) {
    cumulative_.reserve(p.edge_count() + 1);
    cumulative_.push_back(0.0);
    for (std::size_t k = 0; k < p.edge_count(); ++k) {
      const Point2 e = p.edge_vector(k);
      const double len = std::abs(e);
      if (!(len > 0.0)) throw ValidationError("zero-length edge " + std::to_string(k));
      directions_.push_back(e / len);
      cumulative_.push_back(cumulative_.back() + len);
    }
  }

  /// Arclength at each vertex: cumulative()[k] is where edge k starts; the last entry is L.
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  const std::vector<Point2>& directions() const noexcept { return directions_; }
  double total_length() const noexcept { return cumulative_.back(); }
  std::size_t edge_count() const noexcept { return directions_.size(); }
  double edge_length(std::size_t k) const { return cumulative_[k + 1] - cumulative_[k]; }
  Point2 vertex(std::size_t k) const { return vertices_[k % vertices_.size()]; }

  /// Edge containing t; ties at a vertex go to the edge that starts there.
  std::size_t edge_at(double t) const {
    if (t <= 0.0) return 0;
    if (t >= total_length()) return edge_count() - 1;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), t);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()) - 1, edge_count() - 1);
  }

  Point2 point_at(double t) const {
    const std::size_t k = edge_at(t);
    return vertex(k) + directions_[k] * (t - cumulative_[k]);
  }

  Point2 tangent_at(double t) const { return directions_[edge_at(t)]; }

  struct Projection {
    double t;
    Point2 point;
    double distance;
  };

  /// Closest boundary point, brute force over edges.
  Projection project(Point2 q) const {
    Projection best{0.0, vertex(0), std::abs(q - vertex(0))};
    for (std::size_t k = 0; k < edge_count(); ++k) {
      const Point2 a = vertex(k);
      const Point2 b = vertex(k + 1);
      const double u = closest_param(q, a, b);
      const Point2 c = a + u * (b - a);
      const double d = std::abs(q - c);
      if (d < best.distance) best = {cumulative_[k] + u * edge_length(k), c, d};
    }
    return best;
  }

 private:
  std::vector<Point2> vertices_;
  bool closed_;
  std::vector<double> cumulative_;
  std::vector<Point2> directions_;
};

inline ArcLengthParam arclength_parametrize(const Polyline& p) { return ArcLengthParam(p); }

/// Piecewise-constant tangent angle of a closed counterclockwise polygon.
struct TurningData {
  struct Jump {
    double t;     ///< arclength of the vertex; the basepoint vertex is reported at t = L
    double turn;  ///< pi minus the interior angle
  };

  std::vector<double> edge_start;  ///< arclength where each edge starts
  std::vector<double> alpha;       ///< tangent angle on each edge, alpha[0] = 0
  std::vector<Jump> jumps;         ///< vertices 1..n-1, then vertex 0 at t = L
  double initial_angle = 0.0;      ///< absolute direction angle of the first edge

  double alpha_at(double t) const {
    auto it = std::upper_bound(edge_start.begin(), edge_start.end(), t);
    const std::size_t k = it == edge_start.begin() ? 0 : static_cast<std::size_t>(it - edge_start.begin()) - 1;
    return alpha[k];
  }

  double total_turning() const {
    double sum = 0.0;
    for (const auto& j : jumps) sum += j.turn;
    return sum;
  }

  /// Interior angle at vertex k (vertex 0 is the basepoint).
  double interior_angle(std::size_t k) const {
    const std::size_t n = jumps.size();
    return kPi - jumps[(k + n - 1) % n].turn;
  }
};

/// Turning data without orientation checks. A fold-back (turn of magnitude pi)
/// is reported as +pi.
inline TurningData turning_angles_unchecked(const ArcLengthParam& arc) {
  const std::size_t n = arc.edge_count();
  TurningData out;
  out.initial_angle = std::arg(arc.directions()[0]);
  out.edge_start.assign(arc.cumulative().begin(), arc.cumulative().end() - 1);
  out.alpha.resize(n);
  out.alpha[0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const Point2 in = arc.directions()[k - 1];
    const Point2 outd = arc.directions()[k % n];
    double turn = std::arg(outd / in);
    if (turn <= -kPi + 1e-12) turn = kPi;
    if (k < n) {
      out.alpha[k] = out.alpha[k - 1] + turn;
      out.jumps.push_back({arc.cumulative()[k], turn});
    } else {
      out.jumps.push_back({arc.total_length(), turn});
    }
  }
  return out;
}

inline TurningData turning_angles(const Polyline& p) {
  if (!p.closed()) throw ValidationError("turning angles need a closed polyline");
  // Area tolerance relative to the bounding scale so degenerate (zero-area) slits pass.
  const double scale = p.length();
  if (p.signed_area() < -1e-12 * scale * scale) {
    throw ValidationError("polygon is clockwise; counterclockwise orientation required");
  }
  return turning_angles_unchecked(ArcLengthParam(p));
}

/// Winding number by the crossing rule; no boundary check. Works on any closed
/// sequence of points (the closing edge is implied).
inline int winding_number_unchecked(std::span<const Point2> pts, Point2 q) {
  int wn = 0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = pts[i];
    const Point2 b = pts[(i + 1) % n];
    if (a.imag() <= q.imag()) {
      if (b.imag() > q.imag() && cross(b - a, q - a) > 0.0) ++wn;
    } else if (b.imag() <= q.imag() && cross(b - a, q - a) < 0.0) {
      --wn;
    }
  }
  return wn;
}

inline double distance_to_polyline(const Polyline& p, Point2 q) {
  double best = std::abs(q - p[0]);
  for (std::size_t k = 0; k < p.edge_count(); ++k) {
    best = std::min(best, point_segment_distance(q, p.edge_start(k), p.edge_end(k)));
  }
  return best;
}

/// Winding number from summed signed angle increments.
inline int winding_number(const Polyline& p, Point2 q) {
  if (!p.closed()) throw ValidationError("winding number needs a closed polyline");
  if (distance_to_polyline(p, q) <= 1e-12 * p.length()) {
    throw ValidationError("winding number undefined for a point on the polyline");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < p.edge_count(); ++k) {
    total += std::arg((p.edge_end(k) - q) / (p.edge_start(k) - q));
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

inline bool point_in_polygon(const Polyline& p, Point2 q) {
  return winding_number_unchecked(p.points(), q) != 0;
}

// ---------------------------------------------------------------------------
// Simplicity

struct SimplicityVerdict {
  bool simple = true;
  std::size_t first = 0;   ///< first offending segment (when not simple)
  std::size_t second = 0;  ///< second offending segment, first < second
  Point2 where{};          ///< an intersection point
};

namespace detail {

struct Segment {
  Point2 a, b;
};

inline Segment segment(const Polyline& p, std::size_t k) { return {p.edge_start(k), p.edge_end(k)}; }

inline bool segments_adjacent(std::size_t i, std::size_t j, std::size_t nseg, bool closed) {
  if (i > j) std::swap(i, j);
  if (j == i + 1) return true;
  return closed && i == 0 && j == nseg - 1 && nseg > 2;
}

/// Intersection within tol of two non-adjacent segments.
inline std::optional<Point2> intersect(const Segment& s, const Segment& t, double tol) {
  const Point2 r = s.b - s.a;
  const Point2 q = t.b - t.a;
  const double d1 = cross(r, t.a - s.a);
  const double d2 = cross(r, t.b - s.a);
  const double d3 = cross(q, s.a - t.a);
  const double d4 = cross(q, s.b - t.a);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    const double u = d3 / (d3 - d4);
    return s.a + u * r;
  }
  // Touching or near-touching: closest endpoint distances.
  struct Candidate {
    double dist;
    Point2 at;
  };
  const Candidate c[4] = {
      {point_segment_distance(s.a, t.a, t.b), s.a},
      {point_segment_distance(s.b, t.a, t.b), s.b},
      {point_segment_distance(t.a, s.a, s.b), t.a},
      {point_segment_distance(t.b, s.a, s.b), t.b},
  };
  const auto best = std::min_element(std::begin(c), std::end(c),
                                     [](const Candidate& x, const Candidate& y) { return x.dist < y.dist; });
  if (best->dist < tol) return best->at;
  return std::nullopt;
}

/// Adjacent segments meet at a shared vertex; they are only at fault if they fold back onto each other.
inline std::optional<Point2> adjacent_overlap(const Segment& s, const Segment& t, double tol) {
  // Identify the shared endpoint; the remaining endpoints must stay away from the other segment.
  Point2 far_s = s.a, far_t = t.b;
  if (s.b == t.a) {
    far_s = s.a;
    far_t = t.b;
  } else if (s.a == t.b) {
    far_s = s.b;
    far_t = t.a;
  } else if (s.a == t.a) {
    far_s = s.b;
    far_t = t.b;
  } else if (s.b == t.b) {
    far_s = s.a;
    far_t = t.a;
  }
  if (point_segment_distance(far_s, t.a, t.b) < tol) return far_s;
  if (point_segment_distance(far_t, s.a, s.b) < tol) return far_t;
  return std::nullopt;
}

inline std::optional<Point2> check_pair(const Polyline& p, std::size_t i, std::size_t j, double tol) {
  const std::size_t nseg = p.edge_count();
  const Segment si = segment(p, i);
  const Segment sj = segment(p, j);
  if (segments_adjacent(i, j, nseg, p.closed())) return adjacent_overlap(si, sj, tol);
  return intersect(si, sj, tol);
}

inline SimplicityVerdict brute_force_simple(const Polyline& p, double tol) {
  const std::size_t nseg = p.edge_count();
  for (std::size_t i = 0; i < nseg; ++i) {
    for (std::size_t j = i + 1; j < nseg; ++j) {
      if (auto hit = check_pair(p, i, j, tol)) return {false, i, j, *hit};
    }
  }
  return {};
}

// Shamos-Hoey sweep: report some intersecting pair, or none.
class SweepDetector {
 public:
  SweepDetector(const Polyline& p, double tol) : poly_(p), tol_(tol) {
    const std::size_t nseg = p.edge_count();
    left_.resize(nseg);
    right_.resize(nseg);
    for (std::size_t k = 0; k < nseg; ++k) {
      Point2 a = p.edge_start(k), b = p.edge_end(k);
      if (lex_less(b, a)) std::swap(a, b);
      left_[k] = a;
      right_[k] = b;
    }
  }

  SimplicityVerdict run() {
    struct Event {
      Point2 at;
      int type;  // 0 = insert, 1 = remove
      std::size_t seg;
    };
    std::vector<Event> events;
    events.reserve(2 * left_.size());
    for (std::size_t k = 0; k < left_.size(); ++k) {
      events.push_back({left_[k], 0, k});
      events.push_back({right_[k], 1, k});
    }
    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
      if (x.at.real() != y.at.real()) return x.at.real() < y.at.real();
      if (x.at.imag() != y.at.imag()) return x.at.imag() < y.at.imag();
      if (x.type != y.type) return x.type < y.type;
      return x.seg < y.seg;
    });

    Compare cmp{this};
    std::set<std::size_t, Compare> status(cmp);
    std::vector<std::set<std::size_t, Compare>::iterator> where(left_.size(), status.end());

    for (const Event& ev : events) {
      sweep_ = ev.at;
      if (ev.type == 0) {
        auto [it, inserted] = status.insert(ev.seg);
        where[ev.seg] = it;
        if (it != status.begin()) {
          if (auto v = test(*std::prev(it), ev.seg)) return *v;
        }
        if (auto nx = std::next(it); nx != status.end()) {
          if (auto v = test(ev.seg, *nx)) return *v;
        }
      } else {
        auto it = where[ev.seg];
        if (it == status.end()) continue;
        auto nx = std::next(it);
        if (it != status.begin() && nx != status.end()) {
          if (auto v = test(*std::prev(it), *nx)) return *v;
        }
        status.erase(it);
        where[ev.seg] = status.end();
      }
    }
    return {};
  }

 private:
  struct Compare {
    const SweepDetector* self;
    bool operator()(std::size_t i, std::size_t j) const {
      if (i == j) return false;
      const double yi = self->y_at(i);
      const double yj = self->y_at(j);
      if (yi != yj) return yi < yj;
      const double si = self->slope(i);
      const double sj = self->slope(j);
      if (si != sj) return si < sj;
      return i < j;
    }
  };

  static bool lex_less(Point2 a, Point2 b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  }

  double y_at(std::size_t k) const {
    const Point2 a = left_[k], b = right_[k];
    const double dx = b.real() - a.real();
    if (dx == 0.0) return std::clamp(sweep_.imag(), a.imag(), b.imag());
    const double u = std::clamp((sweep_.real() - a.real()) / dx, 0.0, 1.0);
    return a.imag() + u * (b.imag() - a.imag());
  }

  double slope(std::size_t k) const {
    const Point2 d = right_[k] - left_[k];
    if (d.real() == 0.0) return std::numeric_limits<double>::infinity();
    return d.imag() / d.real();
  }

  std::optional<SimplicityVerdict> test(std::size_t i, std::size_t j) const {
    if (auto hit = check_pair(poly_, i, j, tol_)) {
      return SimplicityVerdict{false, std::min(i, j), std::max(i, j), *hit};
    }
    return std::nullopt;
  }

  const Polyline& poly_;
  double tol_;
  std::vector<Point2> left_, right_;
  Point2 sweep_{};
};

}  // namespace detail

/// Segments closer than tol_rel * L count as intersecting. Adjacent segments
/// may share only their common endpoint.
inline SimplicityVerdict is_simple(const Polyline& p, double tol_rel = 1e-12) {
  const double tol = tol_rel * p.length();
  if (p.edge_count() <= 64) return detail::brute_force_simple(p, tol);
  return detail::SweepDetector(p, tol).run();
}

// ---------------------------------------------------------------------------
// Convex hull

struct ConvexHull {
  Polyline hull;                 ///< counterclockwise, collinear points dropped
  std::vector<std::size_t> ids;  ///< indices into the input of the hull vertices
  bool degenerate = false;       ///< all input collinear; hull is the extreme segment
};

inline ConvexHull convex_hull(std::span<const Point2> points) {
  if (points.empty()) throw ValidationError("convex hull of an empty point set");
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].real() != points[b].real()) return points[a].real() < points[b].real();
    return points[a].imag() < points[b].imag();
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) { return points[a] == points[b]; }),
              order.end());
  if (order.size() == 1) throw ValidationError("convex hull: all points coincide");

  double scale = 0.0;
  for (std::size_t i : order) scale = std::max(scale, std::abs(points[i] - points[order.front()]));
  const double tol = 1e-12 * scale * scale;

  // Andrew's monotone chain; a non-positive turn drops the middle point.
  std::vector<std::size_t> h(2 * order.size());
  std::size_t k = 0;
  auto turn = [&](std::size_t o, std::size_t a, std::size_t b) {
    return cross(points[a] - points[o], points[b] - points[o]);
  };
  for (std::size_t i : order) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], i) <= tol) --k;
    h[k++] = i;
  }
  for (std::size_t t = order.size() - 1, lower = k + 1; t-- > 0;) {
    const std::size_t i = order[t];
    while (k >= lower && turn(h[k - 2], h[k - 1], i) <= tol) --k;
    h[k++] = i;
  }
  h.resize(k - 1);

  ConvexHull out;
  if (h.size() < 3) {
    out.degenerate = true;
    out.ids = {order.front(), order.back()};
  } else {
    out.ids = h;
  }
  std::vector<Point2> pts;
  for (std::size_t i : out.ids) pts.push_back(points[i]);
  out.hull = Polyline(std::move(pts), true);
  return out;
}

// ---------------------------------------------------------------------------

/// Symmetric Hausdorff distance between two point sequences treated as
/// polylines (vertex-to-polyline in both directions).
inline double hausdorff_distance(std::span<const Point2> a, std::span<const Point2> b);

}  // namespace capforge

#include "capforge/spatial.hpp"

namespace capforge {

inline double hausdorff_distance(std::span<const Point2> a, std::span<const Point2> b) {
  auto one_sided = [](std::span<const Point2> from, std::span<const Point2> to) {
    if (to.size() == 1) {
      double worst = 0.0;
      for (Point2 p : from) worst = std::max(worst, std::abs(p - to[0]));
      return worst;
    }
    SegmentIndex index(to, false);
    double worst = 0.0;
    for (Point2 p : from) worst = std::max(worst, index.nearest(p).distance);
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace capforge
