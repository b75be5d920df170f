#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fellkit/algebra.hpp"
#include "fellkit/cocycle.hpp"
#include "fellkit/dynamics.hpp"
#include "fellkit/fellbundle.hpp"
#include "fellkit/subalgebra.hpp"

namespace fellkit {

/// The element Phi = sum_{(i,j)} u_(i,j) of B together with the block
/// decomposition of the ambient space it was built against.
struct EmbeddingInvariant {
  Matrix phi;
  std::vector<int> fibreDims;

  int points() const noexcept { return static_cast<int>(fibreDims.size()); }
  /// p_i Phi p_j as an n_i x n_j matrix.
  Matrix block(int i, int j) const;
  std::vector<BlockProjection> projections() const;
  /// Arrows (i, j) with a block of norm above eps.
  std::vector<Arrow> support(Tolerance tol = {}) const;
};

/// Phi = sum of the units over Y x Y (all of X when `subset` is empty).
/// A unit may be given either as its n_i x n_j block or as an ambient matrix;
/// an ambient unit with mass outside block (i, j) raises SupportError and a
/// block that is not a partial isometry raises ContractViolation.
EmbeddingInvariant phiFromBlockUnits(const std::map<Arrow, Matrix>& units, const std::vector<int>& fibreDims,
                                     const std::optional<std::vector<int>>& subset = std::nullopt,
                                     Tolerance tol = {});

/// Phi = sigma + sigma^2 + ... + sigma^n. Requires a minimal flow
/// (IncompleteSupportError listing the arrows never reached) and constant
/// fibre dimension (LocalTrivialityError).
EmbeddingInvariant phiFromCovarianceGroup(const CovarianceGroup& gs);

/// The same sum evaluated as sum_m prod_{i=1}^m U_g, multiplying the
/// generator out step by step instead of reusing the stored powers.
Matrix phiProductForm(const CovarianceGroup& gs);

/// Every block has full rank min(n_i, n_j): no singular value below eps.
bool isOrientable(const EmbeddingInvariant& phi, Tolerance tol = {});

struct ReadOff {
  FiniteCStarAlgebra a;
  FiniteCStarAlgebra b;
  ConditionalExpectation p;
  std::vector<Matrix> normalizerSample;  // embedded blocks u_ij
  UnitaryAssignment assignment;
  std::optional<Cocycle2> omega;  // present when the fibre dimension is constant
};

/// Reads (A, B, P, blocks, omega) off an orientable Phi. Throws
/// NonOrientableError otherwise.
ReadOff readOffPair(const EmbeddingInvariant& phi, Tolerance tol = {});

struct CartanFromBundle {
  PairCandidate pair;
  PairClassification classification;
  AxiomReport axioms;
};

/// The pair (C*(E^0), C*(E), P) of a bundle together with its classification.
/// The normalizer sample is the embedded fibre basis. Throws
/// InvalidBundleError when the axiom suite fails.
CartanFromBundle cartanFromFellBundle(const FellBundleModel& e, int samples, Tolerance tol, SplitMix64& rng);

struct StageResidual {
  std::string stage;
  double residual = 0.0;
};

struct RoundTripReport {
  std::vector<int> inputDims;
  std::vector<int> recoveredDims;
  bool dimsPreserved = false;
  bool supportPreserved = false;
  bool axiomsPass = false;
  double omegaResidual = 0.0;
  double expectationResidual = 0.0;
  std::vector<StageResidual> stages;
  bool pass = false;
};

/// Gs -> Phi -> (A, B, P, omega) -> semidirect Fell bundle -> sections -> omega', P'.
/// The read-off blocks are first rescaled by phases so that u_xx = 1 and
/// u_yx = u_xy^*; the bundle is then built over the flat frame
/// v_xy = u_{x x0} u_{x0 y} with the normalized cocycle as twist, and the
/// phases are put back on the recovered sections. Errors from any stage are
/// rethrown as StageError.
RoundTripReport bridgeRoundTrip(const CovarianceGroup& gs, Tolerance tol, SplitMix64& rng, int samples = 50);

}  // namespace fellkit
