#pragma once

#include <span>
#include <string>
#include <vector>

#include "fellkit/algebra.hpp"
#include "fellkit/fellbundle.hpp"
#include "fellkit/groupoid.hpp"
#include "fellkit/random.hpp"

namespace fellkit {

/// A candidate (A, B, P): A block diagonal in the single-block algebra B and
/// P a conditional expectation of B onto A.
struct PairCandidate {
  FiniteCStarAlgebra a;
  FiniteCStarAlgebra b;
  ConditionalExpectation p;
};

/// (diagonalAlgebra, envelopingAlgebra, restrictionExpectation) of a bundle.
PairCandidate pairFromBundle(const FellBundleModel& e);

/// Largest containment residual of b* a b and b a b* over a basis of A.
double normalizerResidual(const Matrix& b, const FiniteCStarAlgebra& a);

/// b* A b in A and b A b* in A, checked on the matrix-unit basis of A (the
/// condition is linear in a, so this is complete).
bool isNormalizer(const Matrix& b, const FiniteCStarAlgebra& a, Tolerance tol = {});

/// A normalizer with b^2 = 0.
bool isFreeNormalizer(const Matrix& b, const FiniteCStarAlgebra& a, Tolerance tol = {});

/// A free normalizer whose range and source sit in disjoint blocks of A: no
/// block projection p has both p b != 0 and b p != 0. For a masa this is
/// the same as b^2 = 0; for non-abelian A it leaves out the nilpotents of A
/// itself, which can never lie in ker P.
bool isOffDiagonalFreeNormalizer(const Matrix& b, const FiniteCStarAlgebra& a, Tolerance tol = {});

/// span(sample + basis(A)) = B. Throws ContractViolation if a sample element
/// is not a normalizer.
bool isRegular(const PairCandidate& pair, std::span<const Matrix> normalizerSample, Tolerance tol = {});

enum class PairKind { Diagonal, Cartan, Neither };

std::string toString(PairKind kind);

struct PairClassification {
  PairKind kind = PairKind::Neither;
  bool unitInA = false;
  bool regular = false;
  bool expectationOk = false;
  ExpectationReport expectation;
  std::size_t normalizerSpanDim = 0;
  std::size_t dimB = 0;
  std::size_t kernelDim = 0;
  std::size_t freeNormalizerSpanDim = 0;
  std::size_t kernelPlusFreeSpanDim = 0;
  std::size_t freeNormalizersFound = 0;
  std::size_t nilpotentNormalizersInA = 0;  // b^2 = 0 but supported inside one block
  std::string uniqueness = "assumed";
};

/// Checks (i) 1_B in A, (ii) regularity, (iii) the expectation contract and
/// faithfulness on `expectationSamples` random samples. The pair is diagonal
/// when additionally ker P = span N_f(A), where free normalizers (in the
/// off-diagonal sense above) are found by scanning the sample and the matrix
/// units of B linking distinct blocks of A.
PairClassification classifyPair(const PairCandidate& pair, std::span<const Matrix> normalizerSample, Tolerance tol,
                                SplitMix64& rng, int expectationSamples = 50);

/// B = A + span [B, A].
bool extensionPropertyCheck(const PairCandidate& pair, Tolerance tol = {});

/// A closed subspace M of N(A), given by a spanning family.
struct Slice {
  std::vector<Matrix> basis;
};

struct SliceReport {
  bool bimodule = false;
  bool hilbert = false;
  double bimoduleResidual = 0.0;
  double productContainmentResidual = 0.0;
  std::size_t leftInnerSpan = 0;   // dim span {m1* m2}
  std::size_t rightInnerSpan = 0;  // dim span {m1 m2*}
  std::size_t dimA = 0;
  bool allNormalizers = false;
};

/// bimodule: A M and M A lie in M. hilbert: M* M and M M* lie in A and each
/// spans all of A.
SliceReport sliceCheck(const Slice& m, const FiniteCStarAlgebra& a, Tolerance tol = {});

struct NormalizerSupport {
  std::vector<Arrow> pairs;  // (x, y) with |p_x b p_y| > eps
  bool partialBijection = true;
};

/// Block support of b relative to the block projections of A. For a
/// normalizer this is a partial bijection of X.
NormalizerSupport normalizerSupport(const Matrix& b, const FiniteCStarAlgebra& a, Tolerance tol = {});

}  // namespace fellkit
