#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fellkit/error.hpp"

namespace fellkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Absolute bound applied to residual norms. Every algebraic identity in the
/// library is tested as `norm(lhs - rhs) <= eps`.
class Tolerance {
 public:
  static constexpr double kDefaultEps = 1e-9;

  constexpr Tolerance() = default;
  explicit Tolerance(double eps) : eps_(eps) {
    if (!(eps > 0.0)) throw InvalidDescriptorError("tolerance eps must be positive");
  }

  constexpr double eps() const noexcept { return eps_; }

 private:
  double eps_ = kDefaultEps;
};

template <typename Derived>
Matrix adjoint(const Eigen::MatrixBase<Derived>& m) {
  return m.adjoint();
}

/// Largest singular value, i.e. the C*-norm of a matrix acting on C^n.
template <typename Derived>
double operatorNorm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(Matrix(m), Eigen::DecompositionOptions(0));
  return svd.singularValues()(0);
}

/// Singular values in decreasing order.
template <typename Derived>
Eigen::VectorXd singularValues(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<Matrix> svd(Matrix(m), Eigen::DecompositionOptions(0));
  return svd.singularValues();
}

/// Number of singular values above eps * sigma_max.
template <typename Derived>
std::size_t numericalRank(const Eigen::MatrixBase<Derived>& m, Tolerance tol = {}) {
  const Eigen::VectorXd s = singularValues(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol.eps() * s(0)) ++rank;
  return rank;
}

template <typename Derived>
double unitarityResidual(const Eigen::MatrixBase<Derived>& m) {
  const Matrix id = Matrix::Identity(m.rows(), m.rows());
  return std::max(operatorNorm(m.adjoint() * m - id), operatorNorm(m * m.adjoint() - id));
}

template <typename Derived>
bool isUnitary(const Eigen::MatrixBase<Derived>& m, Tolerance tol = {}) {
  if (m.rows() != m.cols()) return false;
  return unitarityResidual(m) <= tol.eps();
}

template <typename Derived>
double partialIsometryResidual(const Eigen::MatrixBase<Derived>& m) {
  return operatorNorm(m * m.adjoint() * m - m);
}

/// V V* V = V. The companion identity V* V V* = V* follows by taking adjoints.
template <typename Derived>
bool isPartialIsometry(const Eigen::MatrixBase<Derived>& m, Tolerance tol = {}) {
  return partialIsometryResidual(m) <= tol.eps();
}

template <typename Derived>
bool isPositiveSemidefinite(const Eigen::MatrixBase<Derived>& m, Tolerance tol = {}) {
  if (m.rows() != m.cols()) throw ShapeError("positivity test needs a square matrix");
  if (m.size() == 0) return true;
  if (operatorNorm(m - m.adjoint()) > tol.eps()) return false;
  const Matrix herm = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol.eps();
}

/// Row-major flattening used by every span computation.
Vector vectorize(const Matrix& m);

/// Rank of the family {vec(m_i)}; singular values below eps * sigma_max are
/// discarded. Empty input has dimension 0. Shapes must agree.
std::size_t spanDimension(std::span<const Matrix> mats, Tolerance tol = {});

/// Orthonormal (in the Frobenius inner product) basis of span(mats), using the
/// same rank cutoff as spanDimension.
std::vector<Matrix> spanBasis(std::span<const Matrix> mats, Tolerance tol = {});

/// Least-squares membership: residual of projecting vec(m) onto
/// span(vec(mats)) is at most eps * (1 + |m|_F).
bool isInSpan(const Matrix& m, std::span<const Matrix> mats, Tolerance tol = {});

/// The residual used by isInSpan, exposed for reports.
double spanResidual(const Matrix& m, std::span<const Matrix> mats, Tolerance tol = {});

/// n x n matrix unit e_{ij} (0-indexed).
Matrix matrixUnit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j);

}  // namespace fellkit
