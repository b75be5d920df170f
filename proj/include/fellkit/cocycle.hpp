#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "fellkit/groupoid.hpp"
#include "fellkit/linalg.hpp"

namespace fellkit {

/// An assignment of operators to the arrows of a pair groupoid: the block at
/// arrow (x, y) is an n_x x n_y matrix mapping fibre y to fibre x.
class UnitaryAssignment {
 public:
  UnitaryAssignment(std::vector<int> fibreDims, std::vector<Matrix> blocks);

  /// Every block set to zero of the right shape.
  static UnitaryAssignment zeros(std::vector<int> fibreDims);

  int points() const noexcept { return static_cast<int>(dims_.size()); }
  const std::vector<int>& fibreDims() const noexcept { return dims_; }
  const Matrix& operator[](const Arrow& g) const { return blocks_.at(flat(g)); }
  Matrix& operator[](const Arrow& g) { return blocks_.at(flat(g)); }

  /// Max over arrows of the unitarity residual (rectangular blocks count as
  /// non-unitary with residual +inf).
  double maxUnitarityResidual() const;

  /// Embeds the block at g into the ambient space C^{sum n_x}.
  Matrix embedded(const Arrow& g) const;

 private:
  std::size_t flat(const Arrow& g) const;

  std::vector<int> dims_;
  std::vector<Matrix> blocks_;
};

/// A composable pair ((x, y), (y, z)) of pair-groupoid arrows.
struct ComposablePair {
  int x = 0;
  int y = 0;
  int z = 0;

  Arrow first() const noexcept { return {x, y}; }
  Arrow second() const noexcept { return {y, z}; }
  Arrow product() const noexcept { return {x, z}; }

  friend auto operator<=>(const ComposablePair&, const ComposablePair&) = default;
};

/// omega(g, h) for every composable pair. Values are either 1 x 1 (a phase)
/// or n_x x n_x diagonal unitaries. When the cocycle came from an assignment u
/// the assignment is kept so the identity can be checked with the twisted
/// action alpha_g = Ad(u_g).
struct Cocycle2 {
  int points = 0;
  std::map<ComposablePair, Matrix> values;
  std::optional<UnitaryAssignment> frame;

  const Matrix& operator()(const ComposablePair& p) const { return values.at(p); }
  /// True when every value is a multiple of the identity within eps.
  bool isScalar(Tolerance tol = {}) const;
  /// The scalar part (top-left entry); meaningful when isScalar().
  Complex scalar(const ComposablePair& p) const { return values.at(p)(0, 0); }

  /// The constant cocycle 1 on n points.
  static Cocycle2 trivial(int points);
};

/// omega(g, h) := u_g u_h u_{gh}^*. Throws NotATwistError if a block is not
/// unitary or a value is not a diagonal unitary within eps.
Cocycle2 extractCocycle(const UnitaryAssignment& assignment, Tolerance tol = {});

struct CocycleIdentityResult {
  bool pass = false;
  double maxResidual = 0.0;
  std::optional<std::tuple<int, int, int, int>> worstTriple;  // (x, y, z, w)
};

/// For every composable triple g = (x,y), h = (y,z), k = (z,w):
///   omega(g,h) omega(gh,k) = alpha_g(omega(h,k)) omega(g,hk)
/// with alpha_g = Ad(u_g) when a frame is attached, the identity otherwise.
CocycleIdentityResult cocycleIdentityCheck(const Cocycle2& omega, Tolerance tol = {});

/// omega(h*, g*) = conj(omega(g, h)) for scalar cocycles: the condition under
/// which the involution of a twisted bundle stays anti-multiplicative.
bool isInvolutionCompatible(const Cocycle2& omega, Tolerance tol = {});

}  // namespace fellkit
