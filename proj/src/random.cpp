#include "fellkit/random.hpp"

#include <cmath>
#include <numbers>

namespace fellkit {

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) return 0;
  // Rejection keeps the result unbiased.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t x;
  do {
    x = (*this)();
  } while (x >= limit);
  return x % bound;
}

double SplitMix64::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex SplitMix64::complexNormal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

Matrix randomMatrix(Eigen::Index rows, Eigen::Index cols, SplitMix64& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.complexNormal();
  return m;
}

Matrix randomUnitary(Eigen::Index n, SplitMix64& rng) {
  const Matrix z = randomMatrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Complex randomPhase(SplitMix64& rng) {
  return std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
}

}  // namespace fellkit
