#include "fellkit/linalg.hpp"

namespace fellkit {

Vector vectorize(const Matrix& m) {
  Vector v(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(k++) = m(i, j);
  return v;
}

namespace {

// Columns are the vectorized inputs.
Matrix stackColumns(std::span<const Matrix> mats) {
  const Matrix& first = mats.front();
  Matrix cols(first.size(), static_cast<Eigen::Index>(mats.size()));
  for (std::size_t k = 0; k < mats.size(); ++k) {
    if (mats[k].rows() != first.rows() || mats[k].cols() != first.cols())
      throw ShapeError("span computation needs matrices of equal shape");
    cols.col(static_cast<Eigen::Index>(k)) = vectorize(mats[k]);
  }
  return cols;
}

Matrix unvectorize(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(k++);
  return m;
}

}  // namespace

std::size_t spanDimension(std::span<const Matrix> mats, Tolerance tol) {
  if (mats.empty()) return 0;
  // JacobiSVD rather than BDCSVD: the divide-and-conquer solver in Eigen 3.4
  // returns NaN on families with many repeated singular values, which is
  // exactly what spans of matrix units look like.
  Eigen::JacobiSVD<Matrix> svd(stackColumns(mats));
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol.eps() * s(0)) ++rank;
  return rank;
}

std::vector<Matrix> spanBasis(std::span<const Matrix> mats, Tolerance tol) {
  if (mats.empty()) return {};
  const Matrix cols = stackColumns(mats);
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<Matrix> basis;
  if (s.size() == 0 || s(0) == 0.0) return basis;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= tol.eps() * s(0)) break;
    basis.push_back(unvectorize(svd.matrixU().col(i), mats.front().rows(), mats.front().cols()));
  }
  return basis;
}

double spanResidual(const Matrix& m, std::span<const Matrix> mats, Tolerance tol) {
  const Vector target = vectorize(m);
  if (mats.empty()) return target.norm();
  for (const Matrix& x : mats)
    if (x.rows() != m.rows() || x.cols() != m.cols())
      throw ShapeError("span membership needs matrices of equal shape");
  // Project onto an orthonormal basis of the span so the rank cutoff matches
  // spanDimension exactly.
  const std::vector<Matrix> basis = spanBasis(mats, tol);
  Vector residual = target;
  for (const Matrix& b : basis) {
    const Vector q = vectorize(b);
    residual -= q * q.dot(residual);
  }
  return residual.norm();
}

bool isInSpan(const Matrix& m, std::span<const Matrix> mats, Tolerance tol) {
  return spanResidual(m, mats, tol) <= tol.eps() * (1.0 + m.norm());
}

Matrix matrixUnit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j) {
  Matrix e = Matrix::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

}  // namespace fellkit
