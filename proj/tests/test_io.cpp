#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "capforge/capforge.hpp"
#include "capforge/io/json.hpp"
#include "capforge/io/svg.hpp"

using namespace capforge;
using io::Json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "capforge_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Json, ShapeRoundTrip) {
  const Polyline p = fixtures::l_hexagon();
  const Polyline q = io::parse_shape(Json::parse(io::shape_json(p).dump()));
  EXPECT_EQ(p.points(), q.points());
}

TEST(Json, ClockwiseShapeIsReversed) {
  const Json j = Json::parse(R"({"vertices": [[0,0],[0,1],[1,1],[1,0]]})");
  const Polyline p = io::parse_shape(j);
  EXPECT_GT(p.signed_area(), 0.0);
  EXPECT_EQ(p.size(), 4u);
}

TEST(Json, BadShapeRejected) {
  EXPECT_THROW(io::parse_shape(Json::parse(R"({"points": []})")), ValidationError);
  EXPECT_THROW(io::parse_shape(Json::parse(R"({"vertices": [[0,0],[1]]})")), ValidationError);
}

TEST(Json, MeasureRoundTripIsExact) {
  std::mt19937_64 rng(81);
  for (int i = 0; i < 20; ++i) {
    const BoundaryMeasure m = fixtures::random_measure(rng, 3.7);
    const BoundaryMeasure back = io::parse_measure(Json::parse(io::measure_json(m).dump()));
    ASSERT_EQ(back.atoms.size(), m.atoms.size());
    ASSERT_EQ(back.densities.size(), m.densities.size());
    for (std::size_t k = 0; k < m.atoms.size(); ++k) {
      EXPECT_EQ(back.atoms[k].t, m.atoms[k].t);
      EXPECT_EQ(back.atoms[k].mass, m.atoms[k].mass);
    }
    for (std::size_t k = 0; k < m.densities.size(); ++k) EXPECT_EQ(back.densities[k].value, m.densities[k].value);
  }
}

TEST(Json, PolynomialForms) {
  const auto q = io::parse_polynomial(Json::parse(R"({"type": "quadratic", "c": [-1, 0]})"));
  EXPECT_TRUE(q.is_unicritical_quadratic());
  EXPECT_EQ(q.quadratic_c(), Point2(-1.0));
  const auto cubic = io::parse_polynomial(Json::parse(R"({"coeffs": [[0,0],[0,0],[0,0],[1,0]]})"));
  EXPECT_EQ(cubic.degree(), 3u);
  EXPECT_EQ(io::polynomial_json(q)["type"], "quadratic");
  EXPECT_THROW(io::parse_polynomial(Json::parse(R"({"type": "cubic"})")), ValidationError);
}

TEST(Json, CapFields) {
  const Polyline sq = fixtures::square();
  BoundaryMeasure m;
  for (double t : {2.0, 4.0, 6.0, 8.0}) m.atoms.push_back({t, 0.25});
  const Json j = io::cap_json(cap_boundary(sq, m));
  for (const char* key : {"length", "closure_defect", "closes", "planar", "winding_ok", "obstructed", "boundary", "angles",
                          "gluing"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["closes"].get<bool>());
  EXPECT_TRUE(j["planar"]["simple"].get<bool>());
}

TEST(Json, MissingFileIsIoError) {
  EXPECT_THROW(io::read_json_file("/nonexistent/capforge.json"), IoError);
  const auto p = scratch("broken.json");
  io::write_text_file(p.string(), "{ not json");
  EXPECT_THROW(io::read_json_file(p.string()), ValidationError);
}

TEST(Svg, WritesTwinFiles) {
  io::SvgFigure fig("square");
  fig.add_layer({"shape", fixtures::square().points(), true});
  fig.add_marker({"s(0)", Point2(-1, -1)});
  const auto stem = scratch("fig");
  fig.write(stem.string());
  const std::string svg = slurp(stem.string() + ".svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("s(0)"), std::string::npos);
  const Json twin = io::read_json_file(stem.string() + ".json");
  EXPECT_EQ(twin["title"], "square");
  EXPECT_EQ(twin["layers"][0]["points"].size(), 4u);
}

TEST(Svg, OutputIsDeterministic) {
  auto make = [] {
    io::SvgFigure fig("t");
    fig.add_layer({"a", fixtures::regular_polygon(7).points(), true});
    return fig.svg();
  };
  EXPECT_EQ(make(), make());
}
