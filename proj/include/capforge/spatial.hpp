#pragma once

// Uniform-grid index over the segments of a polyline, for nearest-point
// queries (Monte Carlo walkers, projections, Hausdorff distances).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace capforge {

class SegmentIndex {
 public:
  struct Hit {
    double distance = std::numeric_limits<double>::infinity();
    std::complex<double> point{};
    std::size_t segment = 0;
    double param = 0.0;  ///< position along the segment in [0, 1]
  };

  SegmentIndex(std::span<const std::complex<double>> pts, bool closed) : pts_(pts.begin(), pts.end()) {
    const std::size_t n = pts_.size();
    nseg_ = closed ? n : (n > 0 ? n - 1 : 0);
    lo_ = hi_ = pts_.empty() ? std::complex<double>{} : pts_[0];
    for (const auto& p : pts_) {
      lo_ = {std::min(lo_.real(), p.real()), std::min(lo_.imag(), p.imag())};
      hi_ = {std::max(hi_.real(), p.real()), std::max(hi_.imag(), p.imag())};
    }
    const double w = hi_.real() - lo_.real();
    const double h = hi_.imag() - lo_.imag();
    const double pad = 1e-9 * std::max({w, h, 1e-300});
    lo_ -= std::complex<double>(pad, pad);
    hi_ += std::complex<double>(pad, pad);

    const double cells_target = std::max<double>(1.0, 2.0 * static_cast<double>(nseg_));
    const double span_w = hi_.real() - lo_.real();
    const double span_h = hi_.imag() - lo_.imag();
    const double cell = std::sqrt(span_w * span_h / cells_target);
    nx_ = std::clamp<std::size_t>(cell > 0 ? static_cast<std::size_t>(span_w / cell) + 1 : 1, 1, 4096);
    ny_ = std::clamp<std::size_t>(cell > 0 ? static_cast<std::size_t>(span_h / cell) + 1 : 1, 1, 4096);
    cw_ = span_w / static_cast<double>(nx_);
    ch_ = span_h / static_cast<double>(ny_);

    std::vector<std::size_t> counts(nx_ * ny_ + 1, 0);
    auto for_cells = [&](std::size_t k, auto&& fn) {
      const auto a = pts_[k];
      const auto b = pts_[(k + 1) % n];
      const std::size_t x0 = cx(std::min(a.real(), b.real())), x1 = cx(std::max(a.real(), b.real()));
      const std::size_t y0 = cy(std::min(a.imag(), b.imag())), y1 = cy(std::max(a.imag(), b.imag()));
      for (std::size_t y = y0; y <= y1; ++y)
        for (std::size_t x = x0; x <= x1; ++x) fn(y * nx_ + x);
    };
    for (std::size_t k = 0; k < nseg_; ++k) for_cells(k, [&](std::size_t c) { ++counts[c + 1]; });
    for (std::size_t c = 0; c < nx_ * ny_; ++c) counts[c + 1] += counts[c];
    start_ = counts;
    items_.resize(counts.back());
    for (std::size_t k = 0; k < nseg_; ++k) for_cells(k, [&](std::size_t c) { items_[counts[c]++] = k; });
  }

  /// Distance from p to the padded bounding box; a lower bound for the true distance.
  double box_distance(std::complex<double> p) const {
    const double dx = std::max({lo_.real() - p.real(), 0.0, p.real() - hi_.real()});
    const double dy = std::max({lo_.imag() - p.imag(), 0.0, p.imag() - hi_.imag()});
    return std::hypot(dx, dy);
  }

  Hit nearest(std::complex<double> p) const {
    Hit best;
    if (nseg_ == 0) {
      if (!pts_.empty()) best = {std::abs(p - pts_[0]), pts_[0], 0, 0.0};
      return best;
    }
    const auto px = static_cast<std::ptrdiff_t>(cx(p.real()));
    const auto py = static_cast<std::ptrdiff_t>(cy(p.imag()));
    const auto maxring = static_cast<std::ptrdiff_t>(std::max(nx_, ny_));
    for (std::ptrdiff_t ring = 0; ring <= maxring; ++ring) {
      visit_ring(px, py, ring, [&](std::size_t cell) {
        for (std::size_t i = start_[cell]; i < start_[cell + 1]; ++i) test(items_[i], p, best);
      });
      // Every unvisited segment sits in a cell of ring + 1 or beyond.
      double bound = std::numeric_limits<double>::infinity();
      visit_ring(px, py, ring + 1, [&](std::size_t cell) { bound = std::min(bound, cell_distance(cell, p)); });
      if (best.distance <= bound) break;
    }
    return best;
  }

  /// Every segment within `radius` of p, nearest first.
  std::vector<Hit> within(std::complex<double> p, double radius) const {
    std::vector<Hit> found;
    if (nseg_ == 0) return found;
    const auto px = static_cast<std::ptrdiff_t>(cx(p.real()));
    const auto py = static_cast<std::ptrdiff_t>(cy(p.imag()));
    const auto maxring = static_cast<std::ptrdiff_t>(std::max(nx_, ny_));
    std::vector<char> seen(nseg_, 0);
    for (std::ptrdiff_t ring = 0; ring <= maxring; ++ring) {
      bool any = false;
      visit_ring(px, py, ring, [&](std::size_t cell) {
        if (cell_distance(cell, p) > radius) return;
        any = true;
        for (std::size_t i = start_[cell]; i < start_[cell + 1]; ++i) {
          const std::size_t k = items_[i];
          if (seen[k]) continue;
          seen[k] = 1;
          Hit h;
          test(k, p, h);
          if (h.distance <= radius) found.push_back(h);
        }
      });
      if (!any && ring > 0) break;
    }
    std::sort(found.begin(), found.end(), [](const Hit& a, const Hit& b) {
      return a.distance < b.distance || (a.distance == b.distance && a.segment < b.segment);
    });
    return found;
  }

 private:
  std::size_t cx(double x) const {
    const double f = (x - lo_.real()) / cw_;
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(nx_ - 1)));
  }
  std::size_t cy(double y) const {
    const double f = (y - lo_.imag()) / ch_;
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(ny_ - 1)));
  }

  double cell_distance(std::size_t cell, std::complex<double> p) const {
    const double x0 = lo_.real() + static_cast<double>(cell % nx_) * cw_;
    const double y0 = lo_.imag() + static_cast<double>(cell / nx_) * ch_;
    const double dx = std::max({x0 - p.real(), 0.0, p.real() - (x0 + cw_)});
    const double dy = std::max({y0 - p.imag(), 0.0, p.imag() - (y0 + ch_)});
    return std::hypot(dx, dy);
  }

  template <class Fn>
  void visit_ring(std::ptrdiff_t px, std::ptrdiff_t py, std::ptrdiff_t ring, Fn&& fn) const {
    const auto nx = static_cast<std::ptrdiff_t>(nx_);
    const auto ny = static_cast<std::ptrdiff_t>(ny_);
    auto emit = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
      if (x >= 0 && y >= 0 && x < nx && y < ny) fn(static_cast<std::size_t>(y * nx + x));
    };
    if (ring == 0) {
      emit(px, py);
      return;
    }
    for (std::ptrdiff_t x = px - ring; x <= px + ring; ++x) {
      emit(x, py - ring);
      emit(x, py + ring);
    }
    for (std::ptrdiff_t y = py - ring + 1; y <= py + ring - 1; ++y) {
      emit(px - ring, y);
      emit(px + ring, y);
    }
  }

  void test(std::size_t k, std::complex<double> p, Hit& best) const {
    const auto a = pts_[k];
    const auto b = pts_[(k + 1) % pts_.size()];
    const auto ab = b - a;
    const double len2 = std::norm(ab);
    double u = 0.0;
    if (len2 > 0.0) {
      u = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
      u = std::clamp(u, 0.0, 1.0);
    }
    const auto c = a + u * ab;
    const double d = std::abs(p - c);
    if (d < best.distance || (d == best.distance && k < best.segment)) best = {d, c, k, u};
  }

  std::vector<std::complex<double>> pts_;
  std::size_t nseg_ = 0;
  std::complex<double> lo_{}, hi_{};
  std::size_t nx_ = 1, ny_ = 1;
  double cw_ = 1.0, ch_ = 1.0;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

}  // namespace capforge
