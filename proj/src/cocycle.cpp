#include "fellkit/cocycle.hpp"

#include <limits>
#include <numeric>

#include "fellkit/error.hpp"

namespace fellkit {

UnitaryAssignment::UnitaryAssignment(std::vector<int> fibreDims, std::vector<Matrix> blocks)
    : dims_(std::move(fibreDims)), blocks_(std::move(blocks)) {
  const std::size_t n = dims_.size();
  if (blocks_.size() != n * n) throw ShapeError("assignment needs one block per arrow");
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const Matrix& b = blocks_[x * n + y];
      if (b.rows() != dims_[x] || b.cols() != dims_[y])
        throw ShapeError("assignment block has the wrong shape for its arrow");
    }
}

UnitaryAssignment UnitaryAssignment::zeros(std::vector<int> fibreDims) {
  std::vector<Matrix> blocks;
  for (int nx : fibreDims)
    for (int ny : fibreDims) blocks.push_back(Matrix::Zero(nx, ny));
  return UnitaryAssignment(std::move(fibreDims), std::move(blocks));
}

std::size_t UnitaryAssignment::flat(const Arrow& g) const {
  const auto n = static_cast<int>(dims_.size());
  if (g.x < 0 || g.y < 0 || g.x >= n || g.y >= n) throw ShapeError("arrow outside the assignment's groupoid");
  return static_cast<std::size_t>(g.x) * dims_.size() + g.y;
}

double UnitaryAssignment::maxUnitarityResidual() const {
  double worst = 0.0;
  for (const Matrix& b : blocks_) {
    if (b.rows() != b.cols()) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, unitarityResidual(b));
  }
  return worst;
}

Matrix UnitaryAssignment::embedded(const Arrow& g) const {
  const int total = std::accumulate(dims_.begin(), dims_.end(), 0);
  Matrix out = Matrix::Zero(total, total);
  const int rowOff = std::accumulate(dims_.begin(), dims_.begin() + g.x, 0);
  const int colOff = std::accumulate(dims_.begin(), dims_.begin() + g.y, 0);
  out.block(rowOff, colOff, dims_[g.x], dims_[g.y]) = (*this)[g];
  return out;
}

bool Cocycle2::isScalar(Tolerance tol) const {
  for (const auto& [pair, v] : values) {
    const Matrix scaled = v(0, 0) * Matrix::Identity(v.rows(), v.cols());
    if (operatorNorm(v - scaled) > tol.eps()) return false;
  }
  return true;
}

Cocycle2 Cocycle2::trivial(int points) {
  Cocycle2 w;
  w.points = points;
  for (int x = 0; x < points; ++x)
    for (int y = 0; y < points; ++y)
      for (int z = 0; z < points; ++z) w.values.emplace(ComposablePair{x, y, z}, Matrix::Identity(1, 1));
  return w;
}

Cocycle2 extractCocycle(const UnitaryAssignment& u, Tolerance tol) {
  const int n = u.points();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const Matrix& b = u[{x, y}];
      if (b.rows() != b.cols() || !isUnitary(b, tol))
        throw NotATwistError("assignment block at (" + std::to_string(x + 1) + "," + std::to_string(y + 1) +
                             ") is not unitary");
    }

  Cocycle2 w;
  w.points = n;
  w.frame = u;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const ComposablePair p{x, y, z};
        Matrix value = u[p.first()] * u[p.second()] * u[p.product()].adjoint();
        const Matrix diag = value.diagonal().asDiagonal();
        double offDiagonal = operatorNorm(value - diag);
        double modulus = 0.0;
        for (Eigen::Index i = 0; i < value.rows(); ++i)
          modulus = std::max(modulus, std::abs(std::abs(value(i, i)) - 1.0));
        if (offDiagonal > tol.eps() || modulus > tol.eps())
          throw NotATwistError("u_g u_h u_gh^* is not a diagonal unitary for g = (" + std::to_string(x + 1) + "," +
                               std::to_string(y + 1) + "), h = (" + std::to_string(y + 1) + "," +
                               std::to_string(z + 1) + ")");
        if (value.rows() == 1) {
          w.values.emplace(p, std::move(value));
        } else {
          w.values.emplace(p, diag);
        }
      }
  return w;
}

CocycleIdentityResult cocycleIdentityCheck(const Cocycle2& omega, Tolerance tol) {
  CocycleIdentityResult result;
  const int n = omega.points;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          const Matrix& gh = omega({x, y, z});
          const Matrix& gh_k = omega({x, z, w});
          const Matrix& hk = omega({y, z, w});
          const Matrix& g_hk = omega({x, y, w});
          Matrix twisted = hk;
          if (omega.frame) {
            const Matrix& ug = (*omega.frame)[{x, y}];
            if (hk.rows() == ug.cols()) twisted = ug * hk * ug.adjoint();
          }
          const double r = operatorNorm(gh * gh_k - twisted * g_hk);
          if (!result.worstTriple || r > result.maxResidual) {
            result.maxResidual = r;
            result.worstTriple = std::make_tuple(x, y, z, w);
          }
        }
  result.pass = result.maxResidual <= tol.eps();
  return result;
}

bool isInvolutionCompatible(const Cocycle2& omega, Tolerance tol) {
  for (const auto& [p, v] : omega.values) {
    // (g, h) = ((x,y),(y,z))  ->  (h*, g*) = ((z,y),(y,x))
    const Matrix& mirrored = omega({p.z, p.y, p.x});
    if (std::abs(mirrored(0, 0) - std::conj(v(0, 0))) > tol.eps()) return false;
  }
  return true;
}

}  // namespace fellkit
