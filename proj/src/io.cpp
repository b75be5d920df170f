#include "fellkit/io.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include "fellkit/error.hpp"

namespace fellkit {

Json toJson(Complex z) { return Json::array({z.real(), z.imag()}); }

Json toJson(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(toJson(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex complexFromJson(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrixFromJson(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ParseError("matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complexFromJson(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

std::string arrowKey(const Arrow& g) { return "(" + std::to_string(g.x + 1) + "," + std::to_string(g.y + 1) + ")"; }

Arrow arrowFromKey(const std::string& key, int points) {
  static const std::regex re(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  std::smatch m;
  if (!std::regex_match(key, m, re)) throw ParseError("bad arrow key '" + key + "'");
  const int x = std::stoi(m[1]) - 1;
  const int y = std::stoi(m[2]) - 1;
  if (x < 0 || y < 0 || x >= points || y >= points) throw ParseError("arrow " + key + " outside X x X");
  return {x, y};
}

namespace {

std::string pairKey(const ComposablePair& p) { return "(" + arrowKey(p.first()) + "," + arrowKey(p.second()) + ")"; }

ComposablePair pairFromKey(const std::string& key, int points) {
  static const std::regex re(R"(\(\s*(\(\s*\d+\s*,\s*\d+\s*\))\s*,\s*(\(\s*\d+\s*,\s*\d+\s*\))\s*\))");
  std::smatch m;
  if (!std::regex_match(key, m, re)) throw ParseError("bad composable pair key '" + key + "'");
  const Arrow g = arrowFromKey(m[1], points);
  const Arrow h = arrowFromKey(m[2], points);
  if (!composable(g, h)) throw ParseError("pair " + key + " is not composable");
  return {g.x, g.y, h.y};
}

}  // namespace

Json modelToJson(const Model& m) {
  Json j;
  j["points"] = m.points();
  j["fibre_dims"] = m.fibreDims;
  j["kind"] = toString(m.kind);
  if (m.frame) {
    Json frame = Json::object();
    for (const Arrow& g : PairGroupoid(m.points()).arrows()) frame[arrowKey(g)] = toJson((*m.frame)[g]);
    j["frame"] = std::move(frame);
  }
  if (m.twist) {
    Json twist = Json::object();
    for (const auto& [p, v] : m.twist->values) twist[pairKey(p)] = toJson(v(0, 0));
    j["twist"] = std::move(twist);
  }
  if (m.generator) {
    Json maps = Json::array();
    for (const Matrix& w : m.generator->fibreMaps) maps.push_back(toJson(w));
    j["generator"] = {{"perm", m.generator->base.oneIndexed()}, {"fibre_maps", std::move(maps)}};
  }
  return j;
}

Model modelFromJson(const Json& j) {
  try {
    Model m;
    if (!j.is_object()) throw ParseError("model must be a JSON object");
    m.fibreDims = j.at("fibre_dims").get<std::vector<int>>();
    const int n = static_cast<int>(m.fibreDims.size());
    if (j.contains("points") && j["points"].get<int>() != n) throw ParseError("points disagrees with fibre_dims");
    m.kind = bundleKindFromString(j.value("kind", std::string("imprimitivity")));

    if (j.contains("frame")) {
      UnitaryAssignment u = UnitaryAssignment::zeros(m.fibreDims);
      std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
      for (const auto& [key, value] : j["frame"].items()) {
        const Arrow g = arrowFromKey(key, n);
        u[g] = matrixFromJson(value);
        seen[static_cast<std::size_t>(g.x) * n + g.y] = true;
      }
      if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw ParseError("frame misses an arrow");
      m.frame = std::move(u);
    }
    if (j.contains("twist")) {
      Cocycle2 w;
      w.points = n;
      for (const auto& [key, value] : j["twist"].items())
        w.values.emplace(pairFromKey(key, n), Matrix::Constant(1, 1, complexFromJson(value)));
      if (w.values.size() != static_cast<std::size_t>(n) * n * n) throw ParseError("twist misses a composable pair");
      m.twist = std::move(w);
    }
    if (j.contains("generator")) {
      const Json& g = j["generator"];
      const Bisection base = Bisection::fromOneIndexed(g.at("perm").get<std::vector<int>>());
      std::vector<Matrix> maps;
      if (g.contains("fibre_maps")) {
        for (const Json& w : g["fibre_maps"]) maps.push_back(matrixFromJson(w));
      } else {
        for (int d : m.fibreDims) maps.push_back(Matrix::Identity(d, d));
      }
      m.generator = makeSpatialAutomorphism(base, std::move(maps), m.fibreDims);
    }
    if (m.kind == BundleKind::Semidirect && !m.frame) m.frame = identityFrame(CStarBundle{m.fibreDims});
    m.bundle();  // validates frame and twist
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid model: ") + e.what());
  }
}

Model loadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return modelFromJson(j);
}

void saveModel(const Model& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << modelToJson(m).dump(2) << '\n';
}

Json toJson(const CheckReport& r) {
  return {{"check", r.check}, {"pass", r.pass}, {"residual", r.residual}, {"details", r.details}};
}

}  // namespace fellkit
