#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fellkit/cocycle.hpp"
#include "fellkit/dynamics.hpp"
#include "fellkit/error.hpp"
#include "fellkit/random.hpp"

using namespace fellkit;

namespace {

UnitaryAssignment phaseAssignment(const std::vector<std::vector<double>>& theta) {
  const int n = static_cast<int>(theta.size());
  std::vector<Matrix> blocks;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) blocks.push_back(Matrix::Constant(1, 1, std::polar(1.0, theta[x][y])));
  return UnitaryAssignment(std::vector<int>(static_cast<std::size_t>(n), 1), std::move(blocks));
}

double reproductionResidual(const UnitaryAssignment& u, const Cocycle2& w) {
  double worst = 0.0;
  for (const auto& [p, v] : w.values) {
    const Matrix lhs = u[p.first()] * u[p.second()];
    const Matrix rhs = v * u[p.product()];
    worst = std::max(worst, operatorNorm(lhs - rhs));
  }
  return worst;
}

}  // namespace

TEST(UnitaryAssignment, ShapesAreChecked) {
  EXPECT_THROW(UnitaryAssignment({1, 1}, {Matrix::Identity(1, 1)}), ShapeError);
  std::vector<Matrix> wrong(4, Matrix::Identity(2, 2));
  EXPECT_THROW(UnitaryAssignment({2, 1}, wrong), ShapeError);
  const UnitaryAssignment z = UnitaryAssignment::zeros({2, 1});
  EXPECT_EQ(z[(Arrow{0, 1})].rows(), 2);
  EXPECT_EQ(z[(Arrow{0, 1})].cols(), 1);
  EXPECT_EQ(z.maxUnitarityResidual(), std::numeric_limits<double>::infinity());
}

TEST(ExtractCocycle, DimensionOnePhasesMatchPhaseArithmetic) {
  SplitMix64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng.below(3));
    std::vector<std::vector<double>> theta(n, std::vector<double>(n));
    for (auto& row : theta)
      for (double& v : row) v = 6.283185307179586 * rng.uniform();
    const Cocycle2 w = extractCocycle(phaseAssignment(theta));
    for (const auto& [p, v] : w.values) {
      const double expected = theta[p.x][p.y] + theta[p.y][p.z] - theta[p.x][p.z];
      EXPECT_LE(std::abs(v(0, 0) - std::polar(1.0, expected)), 1e-12);
    }
  }
}

TEST(ExtractCocycle, HomomorphismGivesTrivialCocycle) {
  // u_(x,y) = v_x v_y^* is a representation of the pair groupoid.
  SplitMix64 rng(5);
  const int n = 3;
  std::vector<Matrix> v;
  for (int x = 0; x < n; ++x) v.push_back(randomUnitary(2, rng));
  std::vector<Matrix> blocks;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) blocks.push_back(v[x] * v[y].adjoint());
  const Cocycle2 w = extractCocycle(UnitaryAssignment({2, 2, 2}, blocks));
  for (const auto& [p, val] : w.values) EXPECT_LE(operatorNorm(val - Matrix::Identity(2, 2)), 1e-12);
}

TEST(ExtractCocycle, FourCycleGeneratorReproducesTwistedProducts) {
  SplitMix64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const Complex phase = randomPhase(rng);
    const auto sigma = scalarHolonomyAutomorphism(Bisection::shift(4), 4, 1, rng, phase);
    const UnitaryAssignment u = assignmentFromGenerator(makeCovarianceGroup(sigma));
    const Cocycle2 w = extractCocycle(u);
    EXPECT_LE(reproductionResidual(u, w), 1e-10);
    // u_12 u_23 = omega(12, 23) u_13
    const Matrix lhs = u[{0, 1}] * u[{1, 2}];
    EXPECT_LE(operatorNorm(lhs - w({0, 1, 2}) * u[{0, 2}]), 1e-10);
  }
}

TEST(ExtractCocycle, RejectsNonUnitaryAndNonDiagonalProducts) {
  std::vector<std::vector<double>> zero(2, std::vector<double>(2, 0.0));
  UnitaryAssignment u = phaseAssignment(zero);
  u[{0, 1}] = Matrix::Constant(1, 1, 2.0);
  EXPECT_THROW(extractCocycle(u), NotATwistError);

  // Dimension 2 with random unitaries: u_g u_h u_gh^* is not diagonal.
  SplitMix64 rng(7);
  std::vector<Matrix> blocks;
  for (int k = 0; k < 4; ++k) blocks.push_back(randomUnitary(2, rng));
  EXPECT_THROW(extractCocycle(UnitaryAssignment({2, 2}, blocks)), NotATwistError);
}

TEST(CocycleIdentity, HoldsForEveryExtractedCocycle) {
  SplitMix64 rng(13);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + static_cast<int>(rng.below(3));
    const int dim = 1 + static_cast<int>(rng.below(2));
    const auto sigma = scalarHolonomyAutomorphism(Bisection::shift(n), n, dim, rng, randomPhase(rng));
    const Cocycle2 w = extractCocycle(assignmentFromGenerator(makeCovarianceGroup(sigma)));
    const auto r = cocycleIdentityCheck(w, Tolerance(1e-12));
    EXPECT_TRUE(r.pass) << "residual " << r.maxResidual;
  }
}

TEST(CocycleIdentity, TrivialPassesAndNegatedValueFails) {
  EXPECT_TRUE(cocycleIdentityCheck(Cocycle2::trivial(3)).pass);
  Cocycle2 w = Cocycle2::trivial(3);
  w.values[{0, 1, 2}] *= -1.0;
  const auto r = cocycleIdentityCheck(w);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.maxResidual, 2.0, 1e-12);
  ASSERT_TRUE(r.worstTriple.has_value());
}

TEST(InvolutionCompatibility, ExtractedScalarCocyclesAreCompatible) {
  SplitMix64 rng(17);
  for (int t = 0; t < 20; ++t) {
    // Hermitian phase data theta(y,x) = -theta(x,y) gives u_(y,x) = u_(x,y)^*.
    const int n = 3;
    std::vector<std::vector<double>> theta(n, std::vector<double>(n, 0.0));
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        theta[x][y] = 6.283185307179586 * rng.uniform();
        theta[y][x] = -theta[x][y];
      }
    EXPECT_TRUE(isInvolutionCompatible(extractCocycle(phaseAssignment(theta))));
  }
  Cocycle2 w = Cocycle2::trivial(3);
  w.values[{0, 1, 2}] = Matrix::Constant(1, 1, Complex(0.0, 1.0));
  EXPECT_FALSE(isInvolutionCompatible(w));
  w.values[{2, 1, 0}] = Matrix::Constant(1, 1, Complex(0.0, -1.0));
  EXPECT_TRUE(isInvolutionCompatible(w));
}
