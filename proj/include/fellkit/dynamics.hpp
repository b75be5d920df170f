#pragma once

#include <cstddef>
#include <vector>

#include "fellkit/algebra.hpp"
#include "fellkit/cocycle.hpp"
#include "fellkit/fellbundle.hpp"
#include "fellkit/groupoid.hpp"
#include "fellkit/random.hpp"
#include "fellkit/subalgebra.hpp"

namespace fellkit {

/// A spatial automorphism a -> U a U* of A = (+)_x M_{n_x}. U is the block
/// matrix whose only nonzero blocks sit on the graph {(x, g(x))} of the base
/// bisection g, with block (x, g(x)) equal to the unitary w_x. Conjugation by
/// U carries fibre g(x) onto fibre x, so block support equals graph(g) and
/// products of automorphisms multiply their bases as bisections.
struct SpatialAutomorphism {
  Bisection base;
  std::vector<int> fibreDims;
  std::vector<Matrix> fibreMaps;  // w_x, shape n_x x n_{g(x)}
  Matrix u;

  Matrix conjugate(const Matrix& a) const { return u * a * u.adjoint(); }
};

/// Requires n_x = n_{g(x)} (CovarianceError) and unitary fibre maps
/// (FrameError).
SpatialAutomorphism makeSpatialAutomorphism(const Bisection& base, std::vector<Matrix> fibreMaps,
                                            const std::vector<int>& fibreDims, Tolerance tol = {});

SpatialAutomorphism identityAutomorphism(const std::vector<int>& fibreDims);

/// Base s.base * t.base, U = s.U t.U.
SpatialAutomorphism composeAutomorphisms(const SpatialAutomorphism& s, const SpatialAutomorphism& t);

SpatialAutomorphism inverseAutomorphism(const SpatialAutomorphism& s);

/// Haar-random fibre maps over the given base.
SpatialAutomorphism randomSpatialAutomorphism(const Bisection& base, const std::vector<int>& fibreDims,
                                              SplitMix64& rng);

/// Uniformly random permutation of n points.
Bisection randomBisection(int n, SplitMix64& rng);

/// Random unitary fibre maps over `base` (constant fibre dimension `dim`)
/// arranged so that the product around every cycle of the base is
/// holonomyPhase * 1. The cocycle read off the resulting covariance group is
/// then scalar.
SpatialAutomorphism scalarHolonomyAutomorphism(const Bisection& base, int points, int dim, SplitMix64& rng,
                                               Complex holonomyPhase);

/// G_sigma: the cyclic group generated by one spatial automorphism sigma.
struct CovarianceGroup {
  CyclicFlow flow;
  SpatialAutomorphism sigma;
  std::vector<SpatialAutomorphism> elements;  // sigma, sigma^2, ..., sigma^order

  int order() const noexcept { return flow.order(); }
  const std::vector<int>& fibreDims() const noexcept { return sigma.fibreDims; }
};

CovarianceGroup makeCovarianceGroup(const SpatialAutomorphism& sigma);

/// Arrow assignment read from the powers of sigma: u_{(x, g^m(x))} is the
/// block of sigma^m at that arrow. Arrows outside the orbit get zero blocks.
UnitaryAssignment assignmentFromGenerator(const CovarianceGroup& gs);

struct UnitaryNormalizerReport {
  int automorphismsTested = 0;
  int automorphismsUnitaryNormalizers = 0;
  double maxAutomorphismResidual = 0.0;
  int candidatesTested = 0;
  int candidatesNormalizing = 0;
  int normalizingOnBisection = 0;
  int offBisectionCandidates = 0;
  int offBisectionRejected = 0;
  bool forwardInclusion = false;   // S in N_U(A)
  bool backwardInclusion = false;  // N_U(A) in S
  bool pass() const noexcept { return forwardInclusion && backwardInclusion; }
};

/// A random unitary in B that is block diagonal (w.r.t. the fibres) except
/// for a rotation mixing two distinct fibres, so that one block row carries
/// two nonzero blocks. Requires at least two points of equal fibre dimension.
Matrix randomOffBisectionUnitary(const std::vector<int>& fibreDims, SplitMix64& rng);

/// Sample-scale check that spatial automorphisms and unitary normalizers of
/// A = C*(E^0) in B = C*(E) coincide. Requires a saturated bundle with
/// constant fibre dimension.
UnitaryNormalizerReport checkUnitaryNormalizerTheorem(const FellBundleModel& e, int samples, Tolerance tol,
                                                      SplitMix64& rng);

struct GenerationReport {
  bool minimalFlow = false;
  bool generates = false;
  std::size_t spanDim = 0;
  std::size_t dimB = 0;
  int levels = 0;
};

/// Whether products a_0 sigma^{t_1} a_1 ... of at most |X| slice translates
/// a sigma^t span B.
GenerationReport aDynamicalGenerationCheck(const CovarianceGroup& gs, const FiniteCStarAlgebra& a,
                                           const FiniteCStarAlgebra& b, Tolerance tol = {});

/// M = span {a U : a in basis(A)}. The base must be self-adjoint.
Slice sliceFromBisection(const FiniteCStarAlgebra& a, const SpatialAutomorphism& u);

struct PartialIsometryReport {
  bool partialIsometry = false;
  double partialIsometryResidual = 0.0;
  bool endomorphism = false;  // V A V* in A
  bool invertible = false;
  bool spatialAutomorphism = false;  // invertible partial isometry, i.e. unitary
};

PartialIsometryReport partialIsometryEndomorphismCheck(const Matrix& v, const FiniteCStarAlgebra& a,
                                                       Tolerance tol = {});

}  // namespace fellkit
