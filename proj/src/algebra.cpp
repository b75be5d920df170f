#include "fellkit/algebra.hpp"

#include <algorithm>
#include <numeric>

namespace fellkit {

FiniteCStarAlgebra makeAlgebra(std::vector<int> blockDims, std::vector<int> multiplicities) {
  if (blockDims.empty()) throw InvalidDescriptorError("algebra needs at least one block");
  if (multiplicities.empty()) multiplicities.assign(blockDims.size(), 1);
  if (multiplicities.size() != blockDims.size())
    throw InvalidDescriptorError("one multiplicity per block is required");
  for (std::size_t i = 0; i < blockDims.size(); ++i) {
    if (blockDims[i] <= 0) throw InvalidDescriptorError("block dimensions must be positive");
    if (multiplicities[i] <= 0) throw InvalidDescriptorError("multiplicities must be positive");
  }

  FiniteCStarAlgebra a;
  a.dims_ = std::move(blockDims);
  a.mults_ = std::move(multiplicities);
  a.offsets_.reserve(a.dims_.size());
  int offset = 0;
  for (std::size_t i = 0; i < a.dims_.size(); ++i) {
    a.offsets_.push_back(offset);
    offset += a.dims_[i] * a.mults_[i];
  }
  a.ambient_ = offset;
  return a;
}

FiniteCStarAlgebra fullMatrixAlgebra(int n) { return makeAlgebra({n}); }

bool FiniteCStarAlgebra::multiplicityFree() const noexcept {
  return std::all_of(mults_.begin(), mults_.end(), [](int m) { return m == 1; });
}

int FiniteCStarAlgebra::dimension() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), 0, [](int acc, int n) { return acc + n * n; });
}

std::vector<BlockProjection> FiniteCStarAlgebra::projections() const {
  std::vector<BlockProjection> out;
  out.reserve(dims_.size());
  for (int i = 0; i < blockCount(); ++i) {
    Matrix p = Matrix::Zero(ambient_, ambient_);
    p.block(offsets_[i], offsets_[i], blockSize(i), blockSize(i)).setIdentity();
    out.push_back({i, std::move(p)});
  }
  return out;
}

Matrix FiniteCStarAlgebra::embed(int block, const Matrix& x) const {
  const int n = dims_.at(block);
  const int m = mults_.at(block);
  if (x.rows() != n || x.cols() != n) throw ShapeError("block element has the wrong size");
  Matrix out = Matrix::Zero(ambient_, ambient_);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < m; ++k) out(offsets_[block] + a * m + k, offsets_[block] + b * m + k) = x(a, b);
  return out;
}

std::vector<Matrix> FiniteCStarAlgebra::basis() const {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(dimension()));
  for (int i = 0; i < blockCount(); ++i)
    for (int a = 0; a < dims_[i]; ++a)
      for (int b = 0; b < dims_[i]; ++b) out.push_back(embed(i, matrixUnit(dims_[i], dims_[i], a, b)));
  return out;
}

Matrix FiniteCStarAlgebra::project(const Matrix& b) const {
  if (b.rows() != ambient_ || b.cols() != ambient_)
    throw ShapeError("element does not act on the algebra's ambient space");
  Matrix out = Matrix::Zero(ambient_, ambient_);
  for (int i = 0; i < blockCount(); ++i) {
    const int n = dims_[i];
    const int m = mults_[i];
    const int off = offsets_[i];
    if (m == 1) {
      out.block(off, off, n, n) = b.block(off, off, n, n);
      continue;
    }
    Matrix reduced = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        for (int k = 0; k < m; ++k) reduced(a, c) += b(off + a * m + k, off + c * m + k);
    reduced /= static_cast<double>(m);
    out += embed(i, reduced);
  }
  return out;
}

double containmentResidual(const Matrix& b, const FiniteCStarAlgebra& algebra) {
  return operatorNorm(b - algebra.project(b));
}

bool contains(const Matrix& b, const FiniteCStarAlgebra& algebra, Tolerance tol) {
  return containmentResidual(b, algebra) <= tol.eps();
}

Matrix approximateUnit(const FiniteCStarAlgebra& algebra) {
  return Matrix::Identity(algebra.ambientDim(), algebra.ambientDim());
}

}  // namespace fellkit
