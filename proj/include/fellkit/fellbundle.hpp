#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fellkit/algebra.hpp"
#include "fellkit/cocycle.hpp"
#include "fellkit/groupoid.hpp"
#include "fellkit/random.hpp"

namespace fellkit {

/// A C*-bundle over a finite discrete space: the fibre over x is M_{n_x}.
struct CStarBundle {
  std::vector<int> fibreDims;

  int points() const noexcept { return static_cast<int>(fibreDims.size()); }
  bool locallyTrivial() const noexcept;
};

/// An element of the fibre E_g, stored as its image in the enveloping algebra:
/// the n_x x n_y block at arrow g = (x, y).
struct FibreElement {
  Arrow arrow;
  Matrix value;
};

FibreElement operator+(const FibreElement& a, const FibreElement& b);
FibreElement operator*(Complex s, const FibreElement& e);

/// A Fell bundle over the pair groupoid X x X realized as the block
/// decomposition E_{(x,y)} = p_x B p_y of B = M_{sum n_x}.
///
/// Two flavours share the representation:
///  * imprimitivity (no frame): fibre elements are arbitrary n_x x n_y
///    blocks, product is the block product, involution the adjoint;
///  * semidirect (frame u present, constant fibre dimension): the element
///    (g, a) with a in E^0_{r(g)} has image a u_g. The involution is
///    (g, a)* = (g*, alpha_{g*}(a*)) with alpha_g = Ad(u_g), which agrees
///    with the adjoint exactly when u_{g*} = u_g^*.
/// An optional scalar twist tau multiplies every product:
/// image(e1 e2) = tau(g, h) image(e1) image(e2).
class FellBundleModel {
 public:
  const PairGroupoid& base() const noexcept { return base_; }
  int points() const noexcept { return base_.points(); }
  const std::vector<int>& fibreDims() const noexcept { return dims_; }
  int fibreDim(int x) const { return dims_.at(x); }
  int totalDim() const noexcept;
  int offset(int x) const;
  const std::optional<UnitaryAssignment>& frame() const noexcept { return frame_; }
  const std::optional<Cocycle2>& twist() const noexcept { return twist_; }

  /// dim_C E_g; zero for a fibre replaced by the zero subspace.
  int fibreDimension(const Arrow& g) const;

  /// Builds the element of E_g with the given coefficient: an n_x x n_x
  /// matrix when a frame is present, the n_x x n_y block otherwise.
  FibreElement element(const Arrow& g, const Matrix& coefficient) const;
  Matrix coefficient(const FibreElement& e) const;

  /// Throws CompositionError for non-composable arrows.
  FibreElement multiply(const FibreElement& a, const FibreElement& b) const;
  FibreElement involution(const FibreElement& e) const;
  double norm(const FibreElement& e) const;

  /// Coefficient matrix units mapped to fibre elements; empty for a zeroed fibre.
  std::vector<FibreElement> fibreBasis(const Arrow& g) const;
  /// Gaussian coefficient, normalised to unit operator norm.
  FibreElement randomElement(const Arrow& g, SplitMix64& rng) const;
  FibreElement zero(const Arrow& g) const;

  /// Block placed into the ambient (sum n_x)-square matrix.
  Matrix embed(const FibreElement& e) const;

  /// Copy with the frame entry at g overwritten without validation. Used to
  /// build negative controls for the axiom checker.
  FellBundleModel withFrameEntryUnchecked(const Arrow& g, const Matrix& u) const;
  /// Copy in which E_g is the zero subspace.
  FellBundleModel withZeroFibre(const Arrow& g) const;

 private:
  friend FellBundleModel buildImprimitivityBundle(const std::vector<int>&);
  friend FellBundleModel buildSemidirectBundle(const CStarBundle&, const UnitaryAssignment&,
                                               const std::optional<Cocycle2>&, Tolerance);

  explicit FellBundleModel(std::vector<int> dims);

  Complex twistValue(const Arrow& g, const Arrow& h) const;

  PairGroupoid base_;
  std::vector<int> dims_;
  std::optional<UnitaryAssignment> frame_;
  std::optional<Cocycle2> twist_;
  std::vector<bool> zeroFibre_;
};

/// Fibres E_{(x,y)} = all n_x x n_y matrices; C*(E) = M_{sum n}.
FellBundleModel buildImprimitivityBundle(const std::vector<int>& dims);

/// Requires constant fibre dimension (LocalTrivialityError), a unitary frame
/// with u_{(x,x)} = 1 and u_{(y,x)} = u_{(x,y)}^* (FrameError), and a twist
/// with phase values satisfying tau(h*, g*) = conj(tau(g, h)) (FrameError).
FellBundleModel buildSemidirectBundle(const CStarBundle& e0, const UnitaryAssignment& frame,
                                      const std::optional<Cocycle2>& twist = std::nullopt, Tolerance tol = {});

/// Frame with u = 1 on every arrow (requires constant fibre dimension).
UnitaryAssignment identityFrame(const CStarBundle& e0);

struct AxiomResult {
  int number = 0;
  std::string name;
  bool pass = true;
  double maxResidual = 0.0;
  std::size_t evaluations = 0;
};

struct AxiomReport {
  std::array<AxiomResult, 10> axioms;

  bool allPass() const noexcept;
  const AxiomResult& operator[](int number) const { return axioms.at(number - 1); }
};

/// Samples `sampleCount` random fibre elements per arrow, composable pair and
/// composable triple and checks the ten Fell bundle axioms. With
/// `basisExhaustive`, fibre basis elements are added to the samples (sensible
/// for fibre dimensions up to about 4). Failures are reported, never thrown.
AxiomReport checkFellAxioms(const FellBundleModel& e, int sampleCount, Tolerance tol, SplitMix64& rng,
                            bool basisExhaustive = false);

/// E_{gh} = span E_g E_h for every composable (g, h).
bool isSaturated(const FellBundleModel& e, Tolerance tol = {});

/// B = C*(E) acting on H = (+)_x C^{n_x}.
FiniteCStarAlgebra envelopingAlgebra(const FellBundleModel& e);

/// A = C*(E^0) = (+)_x M_{n_x}, block diagonal in B.
FiniteCStarAlgebra diagonalAlgebra(const FellBundleModel& e);

/// Products a u b with a, b running over a basis of A and u over the frame
/// (semidirect bundles) or over fibre basis elements (otherwise).
std::vector<Matrix> normalizerProducts(const FellBundleModel& e);

class ConditionalExpectation {
 public:
  ConditionalExpectation(FiniteCStarAlgebra domain, FiniteCStarAlgebra range);

  const FiniteCStarAlgebra& domain() const noexcept { return domain_; }
  const FiniteCStarAlgebra& range() const noexcept { return range_; }
  std::vector<BlockProjection> projections() const { return range_.projections(); }

  Matrix operator()(const Matrix& b) const { return range_.project(b); }

  /// Lower bound c with |P(b* b)| >= c |b|^2 for all b (c = 1/m for m
  /// multiplicity-free blocks).
  double faithfulnessConstant() const noexcept;

 private:
  FiniteCStarAlgebra domain_;
  FiniteCStarAlgebra range_;
};

ConditionalExpectation restrictionExpectation(const FellBundleModel& e);

struct PropertyCheck {
  bool pass = true;
  double maxResidual = 0.0;
};

struct ExpectationReport {
  PropertyCheck fixesRange;    // P(a) = a
  PropertyCheck bimodule;      // P(a1 b a2) = a1 P(b) a2
  PropertyCheck positive;      // b >= 0 => P(b) >= 0
  PropertyCheck faithful;      // |P(b*b)| >= c |b|^2 > 0
  PropertyCheck idempotent;    // P(P(b)) = P(b)
  PropertyCheck contractive;   // |P(b)| <= |b|
  PropertyCheck landsInRange;  // P(b) in A
  std::string uniqueness = "assumed";

  bool allPass() const noexcept;
};

ExpectationReport verifyExpectation(const ConditionalExpectation& p, int samples, Tolerance tol, SplitMix64& rng);

/// Basis of ker P. For multiplicity-free ranges these are the matrix units
/// outside the diagonal blocks; dimension (sum n)^2 - sum n^2.
std::vector<Matrix> kernelBasis(const ConditionalExpectation& p, Tolerance tol = {});

/// Random element of the algebra (Gaussian in each block).
Matrix randomElementOf(const FiniteCStarAlgebra& a, SplitMix64& rng);

}  // namespace fellkit
