#include <gtest/gtest.h>

#include "fellkit/embedding.hpp"
#include "fellkit/error.hpp"
#include "fellkit/presets.hpp"
#include "fellkit/random.hpp"

using namespace fellkit;

namespace {

std::map<Arrow, Matrix> scalarUnits(int n) {
  std::map<Arrow, Matrix> units;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) units[{i, j}] = matrixUnit(n, n, i, j);
  return units;
}

CovarianceGroup randomMinimalGroup(int n, int dim, SplitMix64& rng) {
  return makeCovarianceGroup(scalarHolonomyAutomorphism(Bisection::shift(n), n, dim, rng, randomPhase(rng)));
}

}  // namespace

TEST(PhiFromBlockUnits, ScalarUnitsSumToAllOnes) {
  const EmbeddingInvariant phi = phiFromBlockUnits(scalarUnits(4), {1, 1, 1, 1});
  EXPECT_EQ(phi.phi, Matrix(Matrix::Ones(4, 4)));
  EXPECT_EQ(numericalRank(phi.phi), 1u);
  EXPECT_EQ(phi.support().size(), 16u);
  EXPECT_TRUE(isOrientable(phi));
}

TEST(PhiFromBlockUnits, SubsetRestrictsToCorner) {
  const EmbeddingInvariant phi = phiFromBlockUnits(scalarUnits(4), {1, 1, 1, 1}, std::vector<int>{0, 1});
  Matrix expected = Matrix::Zero(4, 4);
  expected.topLeftCorner(2, 2).setOnes();
  EXPECT_EQ(phi.phi, expected);
  EXPECT_EQ(phi.support(), (std::vector<Arrow>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  EXPECT_FALSE(isOrientable(phi));
  EXPECT_THROW(phiFromBlockUnits(scalarUnits(4), {1, 1, 1, 1}, std::vector<int>{5}), InvalidDescriptorError);
}

TEST(PhiFromBlockUnits, VaryingDimensionsUsePartialIsometries) {
  SplitMix64 rng(1);
  std::map<Arrow, Matrix> units;
  units[{0, 0}] = randomUnitary(2, rng);
  units[{1, 1}] = Matrix::Identity(1, 1);
  Matrix v = Matrix::Zero(2, 1);
  v(1, 0) = 1.0;
  units[{0, 1}] = v;
  units[{1, 0}] = v.adjoint();
  const EmbeddingInvariant phi = phiFromBlockUnits(units, {2, 1});
  EXPECT_EQ(phi.block(0, 1), v);
  EXPECT_EQ(phi.block(1, 0), Matrix(v.adjoint()));
  EXPECT_TRUE(isPartialIsometry(phi.block(0, 1)));
  EXPECT_TRUE(isOrientable(phi));
  EXPECT_EQ(phi.projections().size(), 2u);
}

TEST(PhiFromBlockUnits, Errors) {
  std::map<Arrow, Matrix> outside;
  outside[{0, 1}] = Matrix(matrixUnit(3, 3, 0, 1) + matrixUnit(3, 3, 2, 2));
  EXPECT_THROW(phiFromBlockUnits(outside, {1, 1, 1}), SupportError);

  std::map<Arrow, Matrix> notIsometry;
  notIsometry[{0, 1}] = Matrix::Constant(1, 1, 2.0);
  EXPECT_THROW(phiFromBlockUnits(notIsometry, {1, 1, 1}), ContractViolation);

  std::map<Arrow, Matrix> wrongShape;
  wrongShape[{0, 1}] = Matrix::Identity(2, 2);
  EXPECT_THROW(phiFromBlockUnits(wrongShape, {1, 1, 1}), ShapeError);
}

TEST(PhiFromCovarianceGroup, FourPointHasFullSupport) {
  const Model m = fourPointModel();
  const EmbeddingInvariant phi = phiFromCovarianceGroup(m.covarianceGroup());
  EXPECT_EQ(phi.support().size(), 16u);
  EXPECT_TRUE(isOrientable(phi));
  // Unit fibre maps: every u_ij is 1.
  EXPECT_LE(operatorNorm(phi.phi - Matrix::Ones(4, 4)), 1e-14);
}

TEST(PhiFromCovarianceGroup, SinglePointIsTheGenerator) {
  SplitMix64 rng(2);
  const auto s = randomSpatialAutomorphism(Bisection::identity(1), {2}, rng);
  const EmbeddingInvariant phi = phiFromCovarianceGroup(makeCovarianceGroup(s));
  EXPECT_LE(operatorNorm(phi.phi - s.u), 1e-14);
}

TEST(PhiFromCovarianceGroup, NonMinimalListsMissingPairs) {
  SplitMix64 rng(3);
  const auto s = randomSpatialAutomorphism(Bisection::fromOneIndexed({2, 1, 4, 3}), {1, 1, 1, 1}, rng);
  try {
    phiFromCovarianceGroup(makeCovarianceGroup(s));
    FAIL() << "expected an incomplete-support error";
  } catch (const IncompleteSupportError& e) {
    EXPECT_NE(std::string(e.what()).find("(1,3)"), std::string::npos);
  }
  const auto uneven = randomSpatialAutomorphism(Bisection::identity(2), {2, 1}, rng);
  EXPECT_THROW(phiFromCovarianceGroup(makeCovarianceGroup(uneven)), LocalTrivialityError);
}

TEST(PhiFromCovarianceGroup, EqualsBlockUnitPresentationExactly) {
  SplitMix64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + static_cast<int>(rng.below(3));
    const int dim = 1 + static_cast<int>(rng.below(2));
    const CovarianceGroup gs = randomMinimalGroup(n, dim, rng);
    const EmbeddingInvariant phi = phiFromCovarianceGroup(gs);
    // Blocks p_x sigma^m p_{g^m(x)} of the stored powers.
    std::map<Arrow, Matrix> units;
    for (const SpatialAutomorphism& el : gs.elements)
      for (int x = 0; x < n; ++x) units[{x, el.base(x)}] = el.u.block(x * dim, el.base(x) * dim, dim, dim);
    const EmbeddingInvariant other = phiFromBlockUnits(units, gs.fibreDims());
    EXPECT_EQ(phi.phi, other.phi);
  }
}

TEST(PhiFromCovarianceGroup, ProductFormAgrees) {
  SplitMix64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const CovarianceGroup gs = randomMinimalGroup(2 + static_cast<int>(rng.below(3)), 2, rng);
    EXPECT_LE(operatorNorm(phiProductForm(gs) - phiFromCovarianceGroup(gs).phi), 1e-12);
  }
}

TEST(PhiFromCovarianceGroup, BlocksReproduceTheCocycle) {
  SplitMix64 rng(6);
  const CovarianceGroup gs = randomMinimalGroup(4, 1, rng);
  const EmbeddingInvariant phi = phiFromCovarianceGroup(gs);
  const Cocycle2 w = extractCocycle(assignmentFromGenerator(gs));
  const Matrix lhs = phi.block(0, 1) * phi.block(1, 2);
  EXPECT_LE(operatorNorm(lhs - w({0, 1, 2}) * phi.block(0, 2)), 1e-12);
}

TEST(Orientability, ZeroedBlockIsNotOrientable) {
  EmbeddingInvariant phi = phiFromCovarianceGroup(fourPointModel().covarianceGroup());
  phi.phi(0, 2) = 0.0;
  EXPECT_FALSE(isOrientable(phi));
  EXPECT_THROW(readOffPair(phi), NonOrientableError);
}

TEST(ReadOff, FourPointGivesMasa) {
  const ReadOff r = readOffPair(phiFromCovarianceGroup(fourPointModel().covarianceGroup()));
  EXPECT_EQ(r.a.blockDims(), (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(r.b.ambientDim(), 4);
  SplitMix64 rng(7);
  const Matrix b = randomMatrix(4, 4, rng);
  const Matrix pb = r.p(b);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(pb(i, j), i == j ? b(i, j) : Complex(0.0));
  for (const Matrix& u : r.normalizerSample) EXPECT_TRUE(isNormalizer(u, r.a));
  ASSERT_TRUE(r.omega.has_value());
  EXPECT_TRUE(cocycleIdentityCheck(*r.omega).pass);
}

TEST(ReadOff, SinglePoint) {
  SplitMix64 rng(8);
  const ReadOff r = readOffPair(phiFromCovarianceGroup(makeCovarianceGroup(identityAutomorphism({3}))));
  EXPECT_EQ(r.a, r.b);
  const Matrix b = randomMatrix(3, 3, rng);
  EXPECT_LE(operatorNorm(r.p(b) - b), 1e-14);
  ASSERT_TRUE(r.omega.has_value());
  EXPECT_LE(std::abs(r.omega->scalar({0, 0, 0}) - 1.0), 1e-12);
}

TEST(ReadOff, LineBundleBlocksArePhases) {
  SplitMix64 rng(9);
  const ReadOff r = readOffPair(phiFromCovarianceGroup(randomMinimalGroup(3, 1, rng)));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(r.assignment[{i, j}](0, 0)), 1.0, 1e-12);
}

TEST(ReadOff, RecoversBlockDimensions) {
  SplitMix64 rng(10);
  std::map<Arrow, Matrix> units;
  const std::vector<int> dims{2, 1, 3};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Matrix u = randomUnitary(std::max(dims[i], dims[j]), rng);
      units[{i, j}] = u.topLeftCorner(dims[i], dims[j]);
      // Corners of a unitary are contractions; use the partial isometry part.
      Eigen::JacobiSVD<Matrix> svd(units[{i, j}], Eigen::ComputeThinU | Eigen::ComputeThinV);
      units[{i, j}] = svd.matrixU() * svd.matrixV().adjoint();
    }
  const ReadOff r = readOffPair(phiFromBlockUnits(units, dims));
  EXPECT_EQ(r.a.blockDims(), dims);
  EXPECT_FALSE(r.omega.has_value());
}

TEST(CartanFromFellBundle, ImprimitivityAndLineBundles) {
  SplitMix64 rng(11);
  const CartanFromBundle imp = cartanFromFellBundle(buildImprimitivityBundle({2, 1}), 10, Tolerance(), rng);
  EXPECT_EQ(imp.classification.kind, PairKind::Diagonal);
  EXPECT_EQ(imp.pair.a.blockDims(), (std::vector<int>{2, 1}));

  const CartanFromBundle line = cartanFromFellBundle(fourPointModel().bundle(), 10, Tolerance(), rng);
  EXPECT_EQ(line.classification.kind, PairKind::Diagonal);
  EXPECT_EQ(line.classification.kernelDim, 12u);

  const Model twisted = cycleModel(3, 1, {}, 5);
  EXPECT_EQ(cartanFromFellBundle(twisted.bundle(), 10, Tolerance(), rng).classification.kind, PairKind::Diagonal);
}

TEST(CartanFromFellBundle, BrokenBundleIsRejected) {
  SplitMix64 rng(12);
  const CStarBundle e0{{2, 2, 2}};
  const FellBundleModel good = buildSemidirectBundle(e0, randomFrame(3, 2, rng));
  const FellBundleModel bad = good.withFrameEntryUnchecked({1, 0}, randomUnitary(2, rng));
  EXPECT_THROW(cartanFromFellBundle(bad, 5, Tolerance(), rng), InvalidBundleError);
}

TEST(BridgeRoundTrip, RandomInstances) {
  SplitMix64 rng(13);
  for (int t = 0; t < 12; ++t) {
    const int n = 2 + t % 3;
    const int dim = 1 + (t / 3) % 2;
    const RoundTripReport r = bridgeRoundTrip(randomMinimalGroup(n, dim, rng), Tolerance(), rng, 20);
    EXPECT_TRUE(r.pass) << n << " points, dim " << dim;
    EXPECT_EQ(r.recoveredDims, r.inputDims);
    EXPECT_LE(r.omegaResidual, 1e-9);
    EXPECT_LE(r.expectationResidual, 1e-9);
    EXPECT_FALSE(r.stages.empty());
  }
}

TEST(BridgeRoundTrip, FourCycleLineBundleIsExact) {
  SplitMix64 rng(14);
  const RoundTripReport r = bridgeRoundTrip(randomMinimalGroup(4, 1, rng), Tolerance(), rng, 20);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.omegaResidual, 1e-10);
}

TEST(BridgeRoundTrip, NonMinimalGeneratorFailsAtPhi) {
  SplitMix64 rng(15);
  const auto id = makeCovarianceGroup(identityAutomorphism({1, 1, 1}));
  try {
    bridgeRoundTrip(id, Tolerance(), rng);
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "phi");
  }
}
