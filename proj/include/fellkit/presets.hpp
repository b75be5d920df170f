#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fellkit/cocycle.hpp"
#include "fellkit/dynamics.hpp"
#include "fellkit/fellbundle.hpp"

namespace fellkit {

enum class BundleKind { Imprimitivity, Semidirect };

std::string toString(BundleKind kind);
BundleKind bundleKindFromString(const std::string& s);

/// A serializable model: the data needed to rebuild a Fell bundle and,
/// optionally, a generating spatial automorphism.
struct Model {
  BundleKind kind = BundleKind::Imprimitivity;
  std::vector<int> fibreDims;
  std::optional<UnitaryAssignment> frame;  // semidirect only
  std::optional<Cocycle2> twist;           // scalar phases
  std::optional<SpatialAutomorphism> generator;

  int points() const noexcept { return static_cast<int>(fibreDims.size()); }
  FellBundleModel bundle(Tolerance tol = {}) const;
  /// Throws InvalidDescriptorError when the model carries no generator.
  CovarianceGroup covarianceGroup() const;
};

/// Four points, one-dimensional fibres, trivial frame, generator the 4-cycle
/// 1 -> 2 -> 3 -> 4 -> 1 with unit fibre maps.
Model fourPointModel();

/// n one-dimensional fibres; the pair is the diagonal masa of M_n. Carries the
/// shift generator with unit maps.
Model diagonalMasaModel(int n);

/// E_(x,y) = M_{n_x, n_y}. When the dimensions are constant the shift
/// generator with identity maps is attached.
Model imprimitivityModel(const std::vector<int>& dims);

/// n points, fibre M_dim, random frame (u_xx = 1, u_yx = u_xy^*, Haar
/// elsewhere) and a shift generator with scalar holonomy.
Model semidirectModel(int n, int dim, std::uint64_t seed);

/// Trivial frame over n points of fibre dim; generator over `perm` (the shift
/// when empty) with random fibre maps and a random scalar holonomy phase.
Model cycleModel(int n, int dim, const std::vector<int>& perm, std::uint64_t seed);

/// Haar-random frame with u_xx = 1 and u_yx = u_xy^*.
UnitaryAssignment randomFrame(int points, int dim, SplitMix64& rng);

}  // namespace fellkit
