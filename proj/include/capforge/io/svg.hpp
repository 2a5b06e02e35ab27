#pragma once

// Minimal SVG figures. Every figure also serializes to JSON with the exact
// coordinates it plots, so each image has a machine-readable twin.

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "capforge/geometry.hpp"
#include "capforge/io/json.hpp"

namespace capforge::io {

struct SvgLayer {
  std::string name;
  std::vector<Point2> points;
  bool closed = false;
  std::string stroke = "#000000";
  std::string fill = "none";
  double width = 1.0;  ///< in pixels
};

struct SvgMarker {
  std::string label;
  Point2 at{};
  std::string colour = "#d62728";
};

class SvgFigure {
 public:
  explicit SvgFigure(std::string title, double pixels = 800.0) : title_(std::move(title)), pixels_(pixels) {}

  void add_layer(SvgLayer layer) { layers_.push_back(std::move(layer)); }
  void add_marker(SvgMarker m) { markers_.push_back(std::move(m)); }

  /// View box: joint bounding box of every layer and marker, plus a 5% margin.
  std::string svg() const {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    auto grow = [&](Point2 p) {
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
    };
    for (const auto& l : layers_) for (Point2 p : l.points) grow(p);
    for (const auto& m : markers_) grow(m.at);
    if (!(x0 <= x1)) x0 = y0 = -1.0, x1 = y1 = 1.0;
    double span = std::max({x1 - x0, y1 - y0, 1e-9});
    const double margin = 0.05 * span;
    x0 -= margin, y0 -= margin;
    span += 2.0 * margin;
    const double scale = pixels_ / span;
    // y flipped so the picture is in the usual orientation.
    auto X = [&](Point2 p) { return (p.real() - x0) * scale; };
    auto Y = [&](Point2 p) { return pixels_ - (p.imag() - y0) * scale; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(pixels_) + "\" height=\"" + num(pixels_) +
           "\" viewBox=\"0 0 " + num(pixels_) + " " + num(pixels_) + "\">\n";
    out += "<title>" + escape(title_) + "</title>\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (const auto& l : layers_) {
      if (l.points.empty()) continue;
      out += std::string("<") + (l.closed ? "polygon" : "polyline") + " id=\"" + escape(l.name) + "\" fill=\"" + l.fill +
             "\" stroke=\"" + l.stroke + "\" stroke-width=\"" + num(l.width) + "\" stroke-linejoin=\"round\" points=\"";
      for (std::size_t i = 0; i < l.points.size(); ++i) {
        if (i) out += ' ';
        out += num(X(l.points[i])) + "," + num(Y(l.points[i]));
      }
      out += "\"/>\n";
    }
    for (const auto& m : markers_) {
      out += "<circle cx=\"" + num(X(m.at)) + "\" cy=\"" + num(Y(m.at)) + "\" r=\"4\" fill=\"" + m.colour + "\"/>\n";
      if (!m.label.empty()) {
        out += "<text x=\"" + num(X(m.at) + 6.0) + "\" y=\"" + num(Y(m.at) - 6.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(m.label) + "</text>\n";
      }
    }
    out += "</svg>\n";
    return out;
  }

  Json json() const {
    Json j;
    j["title"] = title_;
    Json layers = Json::array();
    for (const auto& l : layers_) {
      layers.push_back({{"name", l.name}, {"closed", l.closed}, {"stroke", l.stroke}, {"points", points_json(l.points)}});
    }
    j["layers"] = std::move(layers);
    Json marks = Json::array();
    for (const auto& m : markers_) marks.push_back({{"label", m.label}, {"at", point_json(m.at)}});
    j["markers"] = std::move(marks);
    return j;
  }

  /// Writes `stem`.svg and `stem`.json.
  void write(const std::string& stem) const {
    write_text_file(stem + ".svg", svg());
    write_json_file(stem + ".json", json());
  }

 private:
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
  }

  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
      }
    }
    return out;
  }

  std::string title_;
  double pixels_;
  std::vector<SvgLayer> layers_;
  std::vector<SvgMarker> markers_;
};

}  // namespace capforge::io
