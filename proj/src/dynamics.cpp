#include "fellkit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fellkit/error.hpp"

namespace fellkit {

namespace {

std::vector<int> offsetsOf(const std::vector<int>& dims) {
  std::vector<int> off(dims.size(), 0);
  for (std::size_t i = 1; i < dims.size(); ++i) off[i] = off[i - 1] + dims[i - 1];
  return off;
}

int totalOf(const std::vector<int>& dims) { return std::accumulate(dims.begin(), dims.end(), 0); }

}  // namespace

SpatialAutomorphism makeSpatialAutomorphism(const Bisection& base, std::vector<Matrix> fibreMaps,
                                            const std::vector<int>& fibreDims, Tolerance tol) {
  const int n = base.size();
  if (static_cast<int>(fibreDims.size()) != n || static_cast<int>(fibreMaps.size()) != n)
    throw ShapeError("one fibre dimension and one fibre map per point are required");
  const std::vector<int> off = offsetsOf(fibreDims);
  Matrix u = Matrix::Zero(totalOf(fibreDims), totalOf(fibreDims));
  for (int x = 0; x < n; ++x) {
    const int gx = base(x);
    if (fibreDims[x] != fibreDims[gx])
      throw CovarianceError("fibre dimensions differ along the base map: n_" + std::to_string(x + 1) + " = " +
                            std::to_string(fibreDims[x]) + " but n_" + std::to_string(gx + 1) + " = " +
                            std::to_string(fibreDims[gx]));
    const Matrix& w = fibreMaps[x];
    if (w.rows() != fibreDims[x] || w.cols() != fibreDims[gx]) throw ShapeError("fibre map has the wrong shape");
    if (!isUnitary(w, tol)) throw FrameError("fibre map at point " + std::to_string(x + 1) + " is not unitary");
    u.block(off[x], off[gx], fibreDims[x], fibreDims[gx]) = w;
  }
  return {base, fibreDims, std::move(fibreMaps), std::move(u)};
}

SpatialAutomorphism identityAutomorphism(const std::vector<int>& fibreDims) {
  std::vector<Matrix> maps;
  for (int d : fibreDims) maps.push_back(Matrix::Identity(d, d));
  return makeSpatialAutomorphism(Bisection::identity(static_cast<int>(fibreDims.size())), std::move(maps),
                                 fibreDims);
}

SpatialAutomorphism composeAutomorphisms(const SpatialAutomorphism& s, const SpatialAutomorphism& t) {
  if (s.fibreDims != t.fibreDims) throw CompositionError("automorphisms act on different bundles");
  const Bisection base = s.base * t.base;
  std::vector<Matrix> maps;
  maps.reserve(s.fibreMaps.size());
  for (int x = 0; x < base.size(); ++x) maps.push_back(s.fibreMaps[x] * t.fibreMaps[s.base(x)]);
  return {base, s.fibreDims, std::move(maps), s.u * t.u};
}

SpatialAutomorphism inverseAutomorphism(const SpatialAutomorphism& s) {
  const Bisection inv = s.base.inverse();
  std::vector<Matrix> maps;
  for (int y = 0; y < inv.size(); ++y) maps.push_back(s.fibreMaps[inv(y)].adjoint());
  return {inv, s.fibreDims, std::move(maps), s.u.adjoint()};
}

Bisection randomBisection(int n, SplitMix64& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  return Bisection(std::move(p));
}

SpatialAutomorphism randomSpatialAutomorphism(const Bisection& base, const std::vector<int>& fibreDims,
                                              SplitMix64& rng) {
  std::vector<Matrix> maps;
  for (int x = 0; x < base.size(); ++x) maps.push_back(randomUnitary(fibreDims[x], rng));
  return makeSpatialAutomorphism(base, std::move(maps), fibreDims);
}

SpatialAutomorphism scalarHolonomyAutomorphism(const Bisection& base, int points, int dim, SplitMix64& rng,
                                               Complex holonomyPhase) {
  if (base.size() != points) throw ShapeError("base bisection has the wrong number of points");
  std::vector<Matrix> maps(points);
  for (const auto& cycle : base.cycles()) {
    Matrix prefix = Matrix::Identity(dim, dim);
    for (std::size_t k = 0; k + 1 < cycle.size(); ++k) {
      maps[cycle[k]] = randomUnitary(dim, rng);
      prefix = prefix * maps[cycle[k]];
    }
    // w_{x0} w_{g x0} ... w_{last} = phase * 1
    maps[cycle.back()] = holonomyPhase * prefix.adjoint();
  }
  return makeSpatialAutomorphism(base, std::move(maps), std::vector<int>(points, dim));
}

CovarianceGroup makeCovarianceGroup(const SpatialAutomorphism& sigma) {
  CovarianceGroup gs{cyclicFlow(sigma.base), sigma, {}};
  SpatialAutomorphism current = sigma;
  for (int m = 1; m <= gs.flow.order(); ++m) {
    gs.elements.push_back(current);
    current = composeAutomorphisms(current, sigma);
  }
  return gs;
}

UnitaryAssignment assignmentFromGenerator(const CovarianceGroup& gs) {
  UnitaryAssignment u = UnitaryAssignment::zeros(gs.fibreDims());
  std::vector<bool> set(gs.fibreDims().size() * gs.fibreDims().size(), false);
  const auto n = static_cast<int>(gs.fibreDims().size());
  for (const SpatialAutomorphism& element : gs.elements)
    for (int x = 0; x < n; ++x) {
      const Arrow g{x, element.base(x)};
      const auto flat = static_cast<std::size_t>(g.x) * n + g.y;
      if (set[flat]) continue;
      u[g] = element.fibreMaps[x];
      set[flat] = true;
    }
  return u;
}

Matrix randomOffBisectionUnitary(const std::vector<int>& fibreDims, SplitMix64& rng) {
  const int n = static_cast<int>(fibreDims.size());
  std::vector<std::pair<int, int>> candidates;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (fibreDims[a] == fibreDims[b]) candidates.emplace_back(a, b);
  if (candidates.empty()) throw ShapeError("need two fibres of equal dimension to mix");
  const auto [y1, y2] = candidates[rng.below(candidates.size())];

  const std::vector<int> off = offsetsOf(fibreDims);
  const int total = totalOf(fibreDims);
  Matrix diag = Matrix::Zero(total, total);
  for (int x = 0; x < n; ++x) diag.block(off[x], off[x], fibreDims[x], fibreDims[x]) = randomUnitary(fibreDims[x], rng);

  // Angle kept away from 0 and pi/2 so both mixed blocks are clearly nonzero.
  const double theta = 0.2 + 1.1 * rng.uniform();
  const int d = fibreDims[y1];
  const Matrix v = randomUnitary(d, rng);
  Matrix rot = Matrix::Identity(total, total);
  rot.block(off[y1], off[y1], d, d) = std::cos(theta) * Matrix::Identity(d, d);
  rot.block(off[y2], off[y2], d, d) = std::cos(theta) * Matrix::Identity(d, d);
  rot.block(off[y1], off[y2], d, d) = std::sin(theta) * v;
  rot.block(off[y2], off[y1], d, d) = -std::sin(theta) * v.adjoint();
  return diag * rot;
}

namespace {

bool supportIsBisectionGraph(const NormalizerSupport& s, int points) {
  if (!s.partialBijection || static_cast<int>(s.pairs.size()) != points) return false;
  return true;
}

}  // namespace

UnitaryNormalizerReport checkUnitaryNormalizerTheorem(const FellBundleModel& e, int samples, Tolerance tol,
                                                      SplitMix64& rng) {
  if (!CStarBundle{e.fibreDims()}.locallyTrivial())
    throw LocalTrivialityError("unitary normalizer comparison needs constant fibre dimension");
  if (!isSaturated(e, tol)) throw InvalidBundleError("unitary normalizer comparison needs a saturated bundle");

  const FiniteCStarAlgebra a = diagonalAlgebra(e);
  const int n = e.points();
  UnitaryNormalizerReport r;

  for (int s = 0; s < samples; ++s) {
    const SpatialAutomorphism aut = randomSpatialAutomorphism(randomBisection(n, rng), e.fibreDims(), rng);
    const double res = std::max(unitarityResidual(aut.u), normalizerResidual(aut.u, a));
    r.maxAutomorphismResidual = std::max(r.maxAutomorphismResidual, res);
    r.automorphismsTested++;
    if (res <= tol.eps()) r.automorphismsUnitaryNormalizers++;
  }
  r.forwardInclusion = r.automorphismsUnitaryNormalizers == r.automorphismsTested;

  // Candidate unitaries: half supported on bisections, half mixing two fibres.
  bool backward = true;
  for (int s = 0; s < samples; ++s) {
    const bool offBisection = n >= 2 && (s % 2 == 1);
    Matrix cand = offBisection ? randomOffBisectionUnitary(e.fibreDims(), rng)
                               : randomSpatialAutomorphism(randomBisection(n, rng), e.fibreDims(), rng).u;
    r.candidatesTested++;
    const bool normalizing = isUnitary(cand, tol) && isNormalizer(cand, a, tol);
    const NormalizerSupport support = normalizerSupport(cand, a, tol);
    const bool onBisection = supportIsBisectionGraph(support, n);
    if (normalizing) {
      r.candidatesNormalizing++;
      if (onBisection) r.normalizingOnBisection++;
      else backward = false;
    }
    if (!onBisection) {
      r.offBisectionCandidates++;
      if (!normalizing) r.offBisectionRejected++;
    }
  }
  r.backwardInclusion = backward && r.offBisectionRejected == r.offBisectionCandidates;
  return r;
}

GenerationReport aDynamicalGenerationCheck(const CovarianceGroup& gs, const FiniteCStarAlgebra& a,
                                           const FiniteCStarAlgebra& b, Tolerance tol) {
  GenerationReport r;
  r.minimalFlow = isMinimalFlow(gs.flow.generator);
  r.dimB = static_cast<std::size_t>(b.dimension());

  const std::vector<Matrix> basisA = a.basis();
  std::vector<Matrix> level;
  const Matrix id = Matrix::Identity(a.ambientDim(), a.ambientDim());
  std::vector<Matrix> powers{id};
  for (const SpatialAutomorphism& el : gs.elements) powers.push_back(el.u);
  for (const Matrix& p : powers)
    for (const Matrix& x : basisA) level.push_back(x * p);
  const std::vector<Matrix> generators = spanBasis(level, tol);

  std::vector<Matrix> current = generators;
  r.levels = 1;
  r.spanDim = current.size();
  const int maxLevels = std::max(1, static_cast<int>(gs.fibreDims().size()));
  while (r.spanDim < r.dimB && r.levels < maxLevels) {
    std::vector<Matrix> next = current;
    for (const Matrix& c : current)
      for (const Matrix& g : generators) next.push_back(c * g);
    current = spanBasis(next, tol);
    r.levels++;
    if (current.size() == r.spanDim) break;
    r.spanDim = current.size();
  }
  r.generates = r.spanDim == r.dimB;
  return r;
}

Slice sliceFromBisection(const FiniteCStarAlgebra& a, const SpatialAutomorphism& u) {
  if (!u.base.isSelfAdjoint()) throw ContractViolation("slices need a self-adjoint bisection (g = g*)");
  Slice m;
  for (const Matrix& x : a.basis()) m.basis.push_back(x * u.u);
  return m;
}

PartialIsometryReport partialIsometryEndomorphismCheck(const Matrix& v, const FiniteCStarAlgebra& a, Tolerance tol) {
  PartialIsometryReport r;
  r.partialIsometryResidual = partialIsometryResidual(v);
  r.partialIsometry = r.partialIsometryResidual <= tol.eps();
  if (v.rows() == a.ambientDim() && v.cols() == a.ambientDim()) {
    double worst = 0.0;
    for (const Matrix& x : a.basis()) worst = std::max(worst, containmentResidual(v * x * v.adjoint(), a));
    r.endomorphism = worst <= tol.eps();
  }
  if (v.rows() == v.cols() && v.size() > 0) {
    const Eigen::VectorXd s = singularValues(v);
    r.invertible = s(s.size() - 1) > tol.eps();
  }
  r.spatialAutomorphism = r.partialIsometry && r.invertible && r.endomorphism;
  return r;
}

}  // namespace fellkit
