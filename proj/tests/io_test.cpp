#include <gtest/gtest.h>

#include <filesystem>

#include "fellkit/error.hpp"
#include "fellkit/io.hpp"
#include "fellkit/presets.hpp"

using namespace fellkit;

namespace {

void expectSameModel(const Model& a, const Model& b) {
  EXPECT_EQ(a.kind, b.kind);
  EXPECT_EQ(a.fibreDims, b.fibreDims);
  ASSERT_EQ(a.frame.has_value(), b.frame.has_value());
  if (a.frame)
    for (int x = 0; x < a.points(); ++x)
      for (int y = 0; y < a.points(); ++y) EXPECT_EQ((*a.frame)[(Arrow{x, y})], (*b.frame)[(Arrow{x, y})]);
  ASSERT_EQ(a.generator.has_value(), b.generator.has_value());
  if (a.generator) {
    EXPECT_EQ(a.generator->base, b.generator->base);
    EXPECT_EQ(a.generator->u, b.generator->u);
  }
  ASSERT_EQ(a.twist.has_value(), b.twist.has_value());
  if (a.twist) EXPECT_EQ(a.twist->values, b.twist->values);
}

}  // namespace

TEST(Json, ComplexAndMatrix) {
  const Complex z{1.5, -0.25};
  EXPECT_EQ(toJson(z), Json::parse("[1.5, -0.25]"));
  EXPECT_EQ(complexFromJson(toJson(z)), z);
  Matrix m(2, 3);
  m << 1.0, Complex(0.0, 1.0), 2.0, 3.0, 4.0, Complex(-1.0, 0.5);
  EXPECT_EQ(matrixFromJson(toJson(m)), m);
  EXPECT_THROW(matrixFromJson(Json::parse("[[[1,0]],[[1,0],[2,0]]]")), ParseError);
  EXPECT_THROW(complexFromJson(Json::parse("\"x\"")), ParseError);
}

TEST(Json, ArrowKeysAreOneIndexed) {
  EXPECT_EQ(arrowKey({0, 1}), "(1,2)");
  EXPECT_EQ(arrowFromKey("(3,1)", 3), (Arrow{2, 0}));
  EXPECT_EQ(arrowFromKey("(2,2)", 2), (Arrow{1, 1}));
  EXPECT_THROW(arrowFromKey("(0,1)", 3), ParseError);
  EXPECT_THROW(arrowFromKey("(1,4)", 3), ParseError);
  EXPECT_THROW(arrowFromKey("1,2", 3), ParseError);
}

TEST(ModelJson, RoundTripsEveryPreset) {
  for (const Model& m : {fourPointModel(), diagonalMasaModel(3), imprimitivityModel({2, 1, 3}),
                         imprimitivityModel({2, 2}), semidirectModel(3, 2, 4), cycleModel(3, 2, {}, 7),
                         cycleModel(4, 1, {2, 1, 4, 3}, 9)}) {
    const Json j = modelToJson(m);
    const Model back = modelFromJson(j);
    expectSameModel(m, back);
    EXPECT_EQ(modelToJson(back).dump(), j.dump());
  }
}

TEST(ModelJson, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "fellkit_io_test_model.json";
  const Model m = semidirectModel(2, 2, 11);
  saveModel(m, path);
  expectSameModel(m, loadModel(path));
  std::filesystem::remove(path);
  EXPECT_THROW(loadModel(path), ParseError);
}

TEST(ModelJson, MalformedInputIsAParseError) {
  EXPECT_THROW(modelFromJson(Json::parse("[]")), ParseError);
  EXPECT_THROW(modelFromJson(Json::parse(R"({"points": 2})")), ParseError);
  EXPECT_THROW(modelFromJson(Json::parse(R"({"points": 2, "fibre_dims": [1], "kind": "imprimitivity"})")),
               ParseError);
  EXPECT_THROW(modelFromJson(Json::parse(R"({"points": 1, "fibre_dims": [1], "kind": "other"})")), ParseError);

  // A frame that is not unitary fails validation.
  Json j = modelToJson(semidirectModel(2, 1, 3));
  j["frame"]["(1,2)"] = Json::parse("[[[2.0, 0.0]]]");
  EXPECT_THROW(modelFromJson(j), ParseError);

  // Generator that is not a permutation.
  Json g = modelToJson(fourPointModel());
  g["generator"]["perm"] = Json::parse("[1, 1, 2, 3]");
  EXPECT_THROW(modelFromJson(g), ParseError);
}

TEST(CheckReportJson, Shape) {
  CheckReport r{"axioms", true, 1e-15, Json::object()};
  r.details["samples"] = 3;
  const Json j = toJson(r);
  EXPECT_EQ(j["check"], "axioms");
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["details"]["samples"], 3);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"check", "pass", "residual", "details"}));
}
