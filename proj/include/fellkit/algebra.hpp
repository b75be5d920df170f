#pragma once

#include <vector>

#include "fellkit/linalg.hpp"

namespace fellkit {

struct BlockProjection {
  int index = 0;  // point of X, 0-indexed
  Matrix matrix;
};

/// A finite-dimensional C*-algebra  (+)_i M_{n_i} (x) 1_{m_i}  carried in its
/// faithful representation on C^{sum n_i m_i}. Block i occupies a contiguous
/// diagonal range; within it the index (a, k) with a < n_i, k < m_i sits at
/// offset a * m_i + k, so an element of the block has the form x (x) 1_{m_i}.
///
/// The multiplicities exist so that non-multiplicity-free subalgebras such as
/// C.1 in M_2 can be represented; every algebra built from a Fell bundle has
/// all multiplicities equal to one.
class FiniteCStarAlgebra {
 public:
  FiniteCStarAlgebra() = default;

  const std::vector<int>& blockDims() const noexcept { return dims_; }
  const std::vector<int>& multiplicities() const noexcept { return mults_; }
  const std::vector<int>& blockOffsets() const noexcept { return offsets_; }
  int ambientDim() const noexcept { return ambient_; }
  int blockCount() const noexcept { return static_cast<int>(dims_.size()); }
  int blockSize(int i) const { return dims_.at(i) * mults_.at(i); }
  bool multiplicityFree() const noexcept;

  /// dim_C of the algebra, sum n_i^2.
  int dimension() const noexcept;

  /// Block projections p_i of rank n_i m_i; pairwise orthogonal, summing to 1.
  std::vector<BlockProjection> projections() const;

  /// Linear basis: the matrix units of each M_{n_i}, embedded as
  /// e_{ab} (x) 1_{m_i} in the ambient representation.
  std::vector<Matrix> basis() const;

  /// Embeds x in M_{n_i} into block i.
  Matrix embed(int block, const Matrix& x) const;

  /// Trace-preserving projection onto the algebra. With unit multiplicities
  /// this is the compression b -> sum_i p_i b p_i.
  Matrix project(const Matrix& b) const;

  friend bool operator==(const FiniteCStarAlgebra&, const FiniteCStarAlgebra&) = default;

 private:
  friend FiniteCStarAlgebra makeAlgebra(std::vector<int>, std::vector<int>);

  std::vector<int> dims_;
  std::vector<int> mults_;
  std::vector<int> offsets_;
  int ambient_ = 0;
};

/// Throws InvalidDescriptorError on an empty list or a non-positive entry.
/// Multiplicities default to one.
FiniteCStarAlgebra makeAlgebra(std::vector<int> blockDims, std::vector<int> multiplicities = {});

/// Single-block algebra M_n.
FiniteCStarAlgebra fullMatrixAlgebra(int n);

/// Residual norm |b - project(b)|. Throws ShapeError on size mismatch.
double containmentResidual(const Matrix& b, const FiniteCStarAlgebra& algebra);

bool contains(const Matrix& b, const FiniteCStarAlgebra& algebra, Tolerance tol = {});

/// The unit of B lies in A; in finite dimension the approximate unit is exact.
Matrix approximateUnit(const FiniteCStarAlgebra& algebra);

}  // namespace fellkit
