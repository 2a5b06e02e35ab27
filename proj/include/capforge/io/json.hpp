#pragma once

// JSON reading and writing for shapes, measures, polynomials, caps and
// curvature reports. Key order is fixed so equal inputs give equal bytes.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "capforge/cap.hpp"
#include "capforge/error.hpp"
#include "capforge/geometry.hpp"
#include "capforge/measure.hpp"
#include "capforge/polynomial.hpp"

namespace capforge::io {

using Json = nlohmann::ordered_json;

inline Json point_json(Point2 p) { return Json::array({p.real(), p.imag()}); }

inline Json points_json(const std::vector<Point2>& pts) {
  Json a = Json::array();
  for (Point2 p : pts) a.push_back(point_json(p));
  return a;
}

inline Point2 parse_point(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError("expected a point [x, y], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

inline void write_json_file(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

// Shapes: { "vertices": [[x, y], ...] }, normalized to counterclockwise.

inline Json shape_json(const Polyline& p) {
  Json j;
  j["vertices"] = points_json(p.points());
  return j;
}

inline Polyline parse_shape(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) {
    throw ValidationError("shape: expected an object with a \"vertices\" array");
  }
  std::vector<Point2> v;
  for (const auto& p : j["vertices"]) v.push_back(parse_point(p));
  if (v.size() < 2) throw ValidationError("shape: need at least two vertices");
  Polyline shape(std::move(v), true);
  if (shape.signed_area() < 0.0) shape = shape.reversed();
  return shape;
}

// Measures: { "atoms": [[t, mass], ...], "densities": [[t0, t1, value], ...] }.

inline Json measure_json(const BoundaryMeasure& m) {
  Json j;
  j["atoms"] = Json::array();
  for (const auto& a : m.atoms) j["atoms"].push_back(Json::array({a.t, a.mass}));
  j["densities"] = Json::array();
  for (const auto& d : m.densities) j["densities"].push_back(Json::array({d.t0, d.t1, d.value}));
  return j;
}

inline BoundaryMeasure parse_measure(const Json& j) {
  if (!j.is_object()) throw ValidationError("measure: expected an object");
  BoundaryMeasure m;
  if (j.contains("atoms")) {
    for (const auto& a : j["atoms"]) {
      if (!a.is_array() || a.size() != 2) throw ValidationError("measure: atom must be [t, mass]");
      m.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
  }
  if (j.contains("densities")) {
    for (const auto& d : j["densities"]) {
      if (!d.is_array() || d.size() != 3) throw ValidationError("measure: density must be [t0, t1, value]");
      m.densities.push_back({d[0].get<double>(), d[1].get<double>(), d[2].get<double>()});
    }
  }
  return m;
}

// Polynomials: { "type": "quadratic", "c": [re, im] } or { "coeffs": [...] }, ascending.

inline PolynomialMap parse_polynomial(const Json& j) {
  if (!j.is_object()) throw ValidationError("polynomial: expected an object");
  if (j.contains("type")) {
    if (j["type"] != "quadratic") throw ValidationError("polynomial: unknown type " + j["type"].dump());
    if (!j.contains("c")) throw ValidationError("polynomial: quadratic needs \"c\"");
    return PolynomialMap::quadratic(parse_point(j["c"]));
  }
  if (!j.contains("coeffs")) throw ValidationError("polynomial: need \"type\" or \"coeffs\"");
  std::vector<Point2> c;
  for (const auto& x : j["coeffs"]) c.push_back(parse_point(x));
  return PolynomialMap(std::move(c));
}

inline Json polynomial_json(const PolynomialMap& f) {
  Json j;
  if (f.is_unicritical_quadratic()) {
    j["type"] = "quadratic";
    j["c"] = point_json(f.quadratic_c());
  } else {
    j["coeffs"] = points_json(f.coeffs());
  }
  return j;
}

inline Json verdict_json(const SimplicityVerdict& v) {
  Json j;
  j["simple"] = v.simple;
  if (!v.simple) {
    j["first_segment"] = v.first;
    j["second_segment"] = v.second;
    j["where"] = point_json(v.where);
  }
  return j;
}

inline Json cap_json(const CapDevelopment& cap) {
  Json j;
  j["length"] = cap.length;
  j["closure_defect"] = cap.closure_defect;
  j["closes"] = cap.closes;
  j["planar"] = verdict_json(cap.planar);
  j["winding_ok"] = cap.winding_ok;
  j["obstructed"] = cap.obstructed();
  j["breakpoints"] = cap.breakpoints;
  j["boundary"] = points_json(cap.samples);
  j["boundary_t"] = cap.sample_t;
  Json angles = Json::array();
  for (const auto& a : cap.angles) {
    angles.push_back({{"t", a.t}, {"theta", a.theta}, {"mass", a.mass}, {"theta_hat", a.theta_hat},
                      {"obstructed", a.obstructed}});
  }
  j["angles"] = std::move(angles);
  Json rows = Json::array();
  for (const auto& r : cap.gluing) rows.push_back({{"t", r.t}, {"shape", point_json(r.source)}, {"cap", point_json(r.cap)}});
  j["gluing"] = std::move(rows);
  return j;
}

}  // namespace capforge::io
