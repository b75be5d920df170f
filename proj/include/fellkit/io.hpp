#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fellkit/linalg.hpp"
#include "fellkit/presets.hpp"

namespace fellkit {

using Json = nlohmann::ordered_json;

// Complex numbers are [re, im]; matrices are row-major nested arrays of them.
// Points are 1-indexed throughout.
Json toJson(Complex z);
Json toJson(const Matrix& m);
Complex complexFromJson(const Json& j);
Matrix matrixFromJson(const Json& j);

/// "(x,y)" with 1-indexed points.
std::string arrowKey(const Arrow& g);
Arrow arrowFromKey(const std::string& key, int points);

/// {"points", "fibre_dims", "kind", "frame"?, "twist"?, "generator"?}
Json modelToJson(const Model& m);
/// Throws ParseError on malformed input and re-validates the model.
Model modelFromJson(const Json& j);

Model loadModel(const std::filesystem::path& path);
void saveModel(const Model& m, const std::filesystem::path& path);

/// {check, pass, residual, details}
struct CheckReport {
  std::string check;
  bool pass = false;
  double residual = 0.0;
  Json details = Json::object();
};

Json toJson(const CheckReport& r);

}  // namespace fellkit
