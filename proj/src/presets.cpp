#include "fellkit/presets.hpp"

#include "fellkit/error.hpp"

namespace fellkit {

std::string toString(BundleKind kind) {
  return kind == BundleKind::Semidirect ? "semidirect" : "imprimitivity";
}

BundleKind bundleKindFromString(const std::string& s) {
  if (s == "semidirect") return BundleKind::Semidirect;
  if (s == "imprimitivity") return BundleKind::Imprimitivity;
  throw ParseError("unknown bundle kind '" + s + "'");
}

FellBundleModel Model::bundle(Tolerance tol) const {
  if (kind == BundleKind::Imprimitivity) return buildImprimitivityBundle(fibreDims);
  if (!frame) throw InvalidDescriptorError("semidirect model without a frame");
  return buildSemidirectBundle(CStarBundle{fibreDims}, *frame, twist, tol);
}

CovarianceGroup Model::covarianceGroup() const {
  if (!generator) throw InvalidDescriptorError("model has no generator");
  return makeCovarianceGroup(*generator);
}

namespace {

SpatialAutomorphism unitShift(const std::vector<int>& dims) {
  std::vector<Matrix> maps;
  for (int d : dims) maps.push_back(Matrix::Identity(d, d));
  return makeSpatialAutomorphism(Bisection::shift(static_cast<int>(dims.size())), std::move(maps), dims);
}

}  // namespace

Model fourPointModel() {
  Model m;
  m.kind = BundleKind::Semidirect;
  m.fibreDims = {1, 1, 1, 1};
  m.frame = identityFrame(CStarBundle{m.fibreDims});
  m.generator = makeSpatialAutomorphism(Bisection::fromOneIndexed({2, 3, 4, 1}),
                                        std::vector<Matrix>(4, Matrix::Identity(1, 1)), m.fibreDims);
  return m;
}

Model diagonalMasaModel(int n) {
  if (n < 1) throw InvalidDescriptorError("diag-masa needs n >= 1");
  Model m;
  m.fibreDims.assign(n, 1);
  m.generator = unitShift(m.fibreDims);
  return m;
}

Model imprimitivityModel(const std::vector<int>& dims) {
  Model m;
  m.fibreDims = dims;
  buildImprimitivityBundle(dims);  // validates
  if (CStarBundle{dims}.locallyTrivial()) m.generator = unitShift(dims);
  return m;
}

UnitaryAssignment randomFrame(int points, int dim, SplitMix64& rng) {
  UnitaryAssignment u = identityFrame(CStarBundle{std::vector<int>(points, dim)});
  for (int x = 0; x < points; ++x)
    for (int y = x + 1; y < points; ++y) {
      u[{x, y}] = randomUnitary(dim, rng);
      u[{y, x}] = u[{x, y}].adjoint();
    }
  return u;
}

Model semidirectModel(int n, int dim, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw InvalidDescriptorError("semidirect needs n >= 1 and dim >= 1");
  SplitMix64 rng(seed);
  Model m;
  m.kind = BundleKind::Semidirect;
  m.fibreDims.assign(n, dim);
  m.frame = randomFrame(n, dim, rng);
  const Complex phase = randomPhase(rng);
  m.generator = scalarHolonomyAutomorphism(Bisection::shift(n), n, dim, rng, phase);
  return m;
}

Model cycleModel(int n, int dim, const std::vector<int>& perm, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw InvalidDescriptorError("cycle needs n >= 1 and dim >= 1");
  if (!perm.empty() && static_cast<int>(perm.size()) != n)
    throw InvalidDescriptorError("permutation length differs from the number of points");
  SplitMix64 rng(seed);
  Model m;
  m.kind = BundleKind::Semidirect;
  m.fibreDims.assign(n, dim);
  m.frame = identityFrame(CStarBundle{m.fibreDims});
  const Bisection base = perm.empty() ? Bisection::shift(n) : Bisection::fromOneIndexed(perm);
  const Complex phase = randomPhase(rng);
  m.generator = scalarHolonomyAutomorphism(base, n, dim, rng, phase);
  return m;
}

}  // namespace fellkit
