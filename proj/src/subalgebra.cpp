#include "fellkit/subalgebra.hpp"

#include <set>

#include "fellkit/error.hpp"

namespace fellkit {

PairCandidate pairFromBundle(const FellBundleModel& e) {
  return {diagonalAlgebra(e), envelopingAlgebra(e), restrictionExpectation(e)};
}

double normalizerResidual(const Matrix& b, const FiniteCStarAlgebra& a) {
  if (b.rows() != a.ambientDim() || b.cols() != a.ambientDim())
    throw ShapeError("candidate normalizer does not act on the algebra's space");
  double worst = 0.0;
  const Matrix bs = b.adjoint();
  for (const Matrix& basisElement : a.basis()) {
    worst = std::max(worst, containmentResidual(bs * basisElement * b, a));
    worst = std::max(worst, containmentResidual(b * basisElement * bs, a));
  }
  return worst;
}

bool isNormalizer(const Matrix& b, const FiniteCStarAlgebra& a, Tolerance tol) {
  return normalizerResidual(b, a) <= tol.eps();
}

bool isFreeNormalizer(const Matrix& b, const FiniteCStarAlgebra& a, Tolerance tol) {
  return isNormalizer(b, a, tol) && operatorNorm(b * b) <= tol.eps();
}

bool isOffDiagonalFreeNormalizer(const Matrix& b, const FiniteCStarAlgebra& a, Tolerance tol) {
  if (!isFreeNormalizer(b, a, tol)) return false;
  for (const BlockProjection& p : a.projections())
    if (operatorNorm(p.matrix * b) > tol.eps() && operatorNorm(b * p.matrix) > tol.eps()) return false;
  return true;
}

bool isRegular(const PairCandidate& pair, std::span<const Matrix> normalizerSample, Tolerance tol) {
  std::vector<Matrix> family = pair.a.basis();
  for (const Matrix& n : normalizerSample) {
    if (!isNormalizer(n, pair.a, tol)) throw ContractViolation("regularity sample contains a non-normalizer");
    family.push_back(n);
  }
  const auto dimB = static_cast<std::size_t>(pair.b.dimension());
  return spanDimension(family, tol) == dimB;
}

std::string toString(PairKind kind) {
  switch (kind) {
    case PairKind::Diagonal:
      return "diagonal";
    case PairKind::Cartan:
      return "cartan";
    case PairKind::Neither:
      return "neither";
  }
  return "neither";
}

namespace {

// Matrix units of B whose row and column fall in different blocks of A.
std::vector<Matrix> crossBlockUnits(const FiniteCStarAlgebra& a) {
  const int dim = a.ambientDim();
  std::vector<int> blockOf(dim);
  for (int i = 0; i < a.blockCount(); ++i)
    for (int k = 0; k < a.blockSize(i); ++k) blockOf[a.blockOffsets()[i] + k] = i;
  std::vector<Matrix> out;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      if (blockOf[r] != blockOf[c]) out.push_back(matrixUnit(dim, dim, r, c));
  return out;
}

}  // namespace

PairClassification classifyPair(const PairCandidate& pair, std::span<const Matrix> normalizerSample, Tolerance tol,
                                SplitMix64& rng, int expectationSamples) {
  PairClassification c;
  c.dimB = static_cast<std::size_t>(pair.b.dimension());
  c.unitInA = contains(approximateUnit(pair.b), pair.a, tol);

  // Candidate normalizers: the caller's sample plus cross-block matrix units
  // that pass the normalizer test.
  std::vector<Matrix> normalizers;
  std::vector<Matrix> free;
  auto consider = [&](const Matrix& m) {
    if (!isNormalizer(m, pair.a, tol)) return false;
    normalizers.push_back(m);
    if (isOffDiagonalFreeNormalizer(m, pair.a, tol)) free.push_back(m);
    else if (isFreeNormalizer(m, pair.a, tol)) c.nilpotentNormalizersInA++;
    return true;
  };
  for (const Matrix& m : normalizerSample)
    if (!consider(m)) throw ContractViolation("classification sample contains a non-normalizer");
  for (const Matrix& m : crossBlockUnits(pair.a)) consider(m);

  std::vector<Matrix> regularFamily = pair.a.basis();
  regularFamily.insert(regularFamily.end(), normalizers.begin(), normalizers.end());
  c.normalizerSpanDim = spanDimension(regularFamily, tol);
  c.regular = c.normalizerSpanDim == c.dimB;

  c.expectation = verifyExpectation(pair.p, expectationSamples, tol, rng);
  c.expectationOk = c.expectation.allPass();

  const std::vector<Matrix> kernel = kernelBasis(pair.p, tol);
  c.kernelDim = spanDimension(kernel, tol);
  c.freeNormalizersFound = free.size();
  c.freeNormalizerSpanDim = spanDimension(free, tol);
  std::vector<Matrix> both = kernel;
  both.insert(both.end(), free.begin(), free.end());
  c.kernelPlusFreeSpanDim = spanDimension(both, tol);

  const bool kernelIdentity =
      c.kernelDim == c.freeNormalizerSpanDim && c.kernelPlusFreeSpanDim == c.kernelDim;
  if (c.unitInA && c.regular && c.expectationOk)
    c.kind = kernelIdentity ? PairKind::Diagonal : PairKind::Cartan;
  else
    c.kind = PairKind::Neither;
  return c;
}

bool extensionPropertyCheck(const PairCandidate& pair, Tolerance tol) {
  std::vector<Matrix> family = pair.a.basis();
  const std::vector<Matrix> basisA = pair.a.basis();
  const int dim = pair.b.ambientDim();
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const Matrix b = matrixUnit(dim, dim, r, c);
      for (const Matrix& a : basisA) {
        Matrix comm = b * a - a * b;
        if (!comm.isZero(0.0)) family.push_back(std::move(comm));
      }
    }
  return spanDimension(family, tol) == static_cast<std::size_t>(pair.b.dimension());
}

SliceReport sliceCheck(const Slice& m, const FiniteCStarAlgebra& a, Tolerance tol) {
  SliceReport r;
  r.dimA = static_cast<std::size_t>(a.dimension());
  const std::vector<Matrix> basisA = a.basis();

  r.allNormalizers = true;
  for (const Matrix& x : m.basis)
    if (!isNormalizer(x, a, tol)) r.allNormalizers = false;

  bool inSpan = true;
  for (const Matrix& x : m.basis)
    for (const Matrix& y : basisA) {
      const Matrix left = y * x;
      const Matrix right = x * y;
      r.bimoduleResidual = std::max({r.bimoduleResidual, spanResidual(left, m.basis, tol),
                                     spanResidual(right, m.basis, tol)});
      inSpan = inSpan && isInSpan(left, m.basis, tol) && isInSpan(right, m.basis, tol);
    }
  r.bimodule = inSpan;

  std::vector<Matrix> leftInner;
  std::vector<Matrix> rightInner;
  for (const Matrix& x : m.basis)
    for (const Matrix& y : m.basis) {
      leftInner.push_back(x.adjoint() * y);
      rightInner.push_back(x * y.adjoint());
    }
  for (const Matrix& p : leftInner) r.productContainmentResidual = std::max(r.productContainmentResidual, containmentResidual(p, a));
  for (const Matrix& p : rightInner) r.productContainmentResidual = std::max(r.productContainmentResidual, containmentResidual(p, a));
  r.leftInnerSpan = spanDimension(leftInner, tol);
  r.rightInnerSpan = spanDimension(rightInner, tol);
  r.hilbert = r.productContainmentResidual <= tol.eps() && r.leftInnerSpan == r.dimA && r.rightInnerSpan == r.dimA;
  return r;
}

NormalizerSupport normalizerSupport(const Matrix& b, const FiniteCStarAlgebra& a, Tolerance tol) {
  if (b.rows() != a.ambientDim() || b.cols() != a.ambientDim())
    throw ShapeError("element does not act on the algebra's space");
  NormalizerSupport s;
  std::set<int> rows;
  std::set<int> cols;
  for (int x = 0; x < a.blockCount(); ++x)
    for (int y = 0; y < a.blockCount(); ++y) {
      const Matrix blk = b.block(a.blockOffsets()[x], a.blockOffsets()[y], a.blockSize(x), a.blockSize(y));
      if (operatorNorm(blk) > tol.eps()) {
        s.pairs.push_back({x, y});
        if (!rows.insert(x).second || !cols.insert(y).second) s.partialBijection = false;
      }
    }
  return s;
}

}  // namespace fellkit
