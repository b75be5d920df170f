#include "fellkit/embedding.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "fellkit/error.hpp"

namespace fellkit {

namespace {

std::vector<int> offsetsOf(const std::vector<int>& dims) {
  std::vector<int> off(dims.size(), 0);
  for (std::size_t i = 1; i < dims.size(); ++i) off[i] = off[i - 1] + dims[i - 1];
  return off;
}

int totalOf(const std::vector<int>& dims) { return std::accumulate(dims.begin(), dims.end(), 0); }

std::string arrowName(const Arrow& g) { return "(" + std::to_string(g.x + 1) + "," + std::to_string(g.y + 1) + ")"; }

}  // namespace

Matrix EmbeddingInvariant::block(int i, int j) const {
  const std::vector<int> off = offsetsOf(fibreDims);
  return phi.block(off.at(i), off.at(j), fibreDims.at(i), fibreDims.at(j));
}

std::vector<BlockProjection> EmbeddingInvariant::projections() const { return makeAlgebra(fibreDims).projections(); }

std::vector<Arrow> EmbeddingInvariant::support(Tolerance tol) const {
  std::vector<Arrow> out;
  for (int i = 0; i < points(); ++i)
    for (int j = 0; j < points(); ++j)
      if (operatorNorm(block(i, j)) > tol.eps()) out.push_back({i, j});
  return out;
}

EmbeddingInvariant phiFromBlockUnits(const std::map<Arrow, Matrix>& units, const std::vector<int>& fibreDims,
                                     const std::optional<std::vector<int>>& subset, Tolerance tol) {
  const FiniteCStarAlgebra a = makeAlgebra(fibreDims);
  const int n = static_cast<int>(fibreDims.size());
  const int total = totalOf(fibreDims);
  const std::vector<int> off = offsetsOf(fibreDims);

  std::vector<bool> inY(n, subset ? false : true);
  if (subset)
    for (int y : *subset) {
      if (y < 0 || y >= n) throw InvalidDescriptorError("subset point outside X");
      inY[y] = true;
    }

  EmbeddingInvariant inv{Matrix::Zero(total, total), fibreDims};
  for (const auto& [g, unit] : units) {
    if (g.x < 0 || g.y < 0 || g.x >= n || g.y >= n) throw InvalidDescriptorError("unit indexed outside X x X");
    Matrix blk;
    if (unit.rows() == total && unit.cols() == total && !(fibreDims[g.x] == total && fibreDims[g.y] == total)) {
      Matrix outside = unit;
      blk = unit.block(off[g.x], off[g.y], fibreDims[g.x], fibreDims[g.y]);
      outside.block(off[g.x], off[g.y], fibreDims[g.x], fibreDims[g.y]).setZero();
      if (operatorNorm(outside) > tol.eps())
        throw SupportError("unit at " + arrowName(g) + " has mass outside block " + arrowName(g));
    } else if (unit.rows() == fibreDims[g.x] && unit.cols() == fibreDims[g.y]) {
      blk = unit;
    } else {
      throw ShapeError("unit at " + arrowName(g) + " has neither block nor ambient shape");
    }
    if (!isPartialIsometry(blk, tol))
      throw ContractViolation("unit at " + arrowName(g) + " is not a partial isometry");
    if (!inY[g.x] || !inY[g.y]) continue;
    inv.phi.block(off[g.x], off[g.y], fibreDims[g.x], fibreDims[g.y]) += blk;
  }
  return inv;
}

EmbeddingInvariant phiFromCovarianceGroup(const CovarianceGroup& gs) {
  const std::vector<int>& dims = gs.fibreDims();
  if (!CStarBundle{dims}.locallyTrivial()) throw LocalTrivialityError("Phi needs constant fibre dimension");
  if (!isMinimalFlow(gs.flow.generator)) {
    const std::vector<Arrow> reached = flowOrbitArrows(gs.flow.generator);
    const std::set<Arrow> hit(reached.begin(), reached.end());
    std::ostringstream msg;
    msg << "generator is not minimal; missing pairs:";
    for (const Arrow& g : PairGroupoid(gs.flow.generator.size()).arrows())
      if (!hit.contains(g)) msg << ' ' << arrowName(g);
    throw IncompleteSupportError(msg.str());
  }
  EmbeddingInvariant inv{Matrix::Zero(gs.sigma.u.rows(), gs.sigma.u.cols()), dims};
  for (const SpatialAutomorphism& el : gs.elements) inv.phi += el.u;
  return inv;
}

Matrix phiProductForm(const CovarianceGroup& gs) {
  Matrix phi = Matrix::Zero(gs.sigma.u.rows(), gs.sigma.u.cols());
  for (int m = 1; m <= gs.order(); ++m) {
    Matrix transport = Matrix::Identity(phi.rows(), phi.cols());
    for (int i = 1; i <= m; ++i) transport = transport * gs.sigma.u;
    phi += transport;
  }
  return phi;
}

bool isOrientable(const EmbeddingInvariant& phi, Tolerance tol) {
  for (int i = 0; i < phi.points(); ++i)
    for (int j = 0; j < phi.points(); ++j) {
      const Matrix blk = phi.block(i, j);
      const Eigen::VectorXd s = singularValues(blk);
      const auto full = std::min(blk.rows(), blk.cols());
      if (s.size() < full || (full > 0 && s(full - 1) <= tol.eps())) return false;
    }
  return true;
}

ReadOff readOffPair(const EmbeddingInvariant& phi, Tolerance tol) {
  if (!isOrientable(phi, tol)) {
    std::ostringstream msg;
    msg << "Phi is not orientable; vanishing or rank-deficient blocks:";
    const std::vector<Arrow> sup = phi.support(tol);
    for (int i = 0; i < phi.points(); ++i)
      for (int j = 0; j < phi.points(); ++j) {
        const Matrix blk = phi.block(i, j);
        if (static_cast<Eigen::Index>(numericalRank(blk, tol)) < std::min(blk.rows(), blk.cols()) ||
            std::find(sup.begin(), sup.end(), Arrow{i, j}) == sup.end())
          msg << ' ' << arrowName({i, j});
      }
    throw NonOrientableError(msg.str());
  }
  FiniteCStarAlgebra a = makeAlgebra(phi.fibreDims);
  FiniteCStarAlgebra b = fullMatrixAlgebra(totalOf(phi.fibreDims));
  ConditionalExpectation p(b, a);

  std::vector<Matrix> blocks;
  for (int i = 0; i < phi.points(); ++i)
    for (int j = 0; j < phi.points(); ++j) blocks.push_back(phi.block(i, j));
  UnitaryAssignment u(phi.fibreDims, std::move(blocks));

  std::vector<Matrix> sample;
  for (const Arrow& g : PairGroupoid(phi.points()).arrows()) sample.push_back(u.embedded(g));

  std::optional<Cocycle2> omega;
  if (CStarBundle{phi.fibreDims}.locallyTrivial()) omega = extractCocycle(u, tol);
  return {std::move(a), std::move(b), std::move(p), std::move(sample), std::move(u), std::move(omega)};
}

CartanFromBundle cartanFromFellBundle(const FellBundleModel& e, int samples, Tolerance tol, SplitMix64& rng) {
  AxiomReport axioms = checkFellAxioms(e, samples, tol, rng);
  if (!axioms.allPass()) {
    std::ostringstream msg;
    msg << "bundle fails axioms:";
    for (const AxiomResult& r : axioms.axioms)
      if (!r.pass) msg << ' ' << r.number;
    throw InvalidBundleError(msg.str());
  }
  PairCandidate pair = pairFromBundle(e);
  std::vector<Matrix> sample;
  for (const Arrow& g : e.base().arrows())
    for (const FibreElement& f : e.fibreBasis(g)) sample.push_back(e.embed(f));
  PairClassification c = classifyPair(pair, sample, tol, rng);
  return {std::move(pair), std::move(c), std::move(axioms)};
}

namespace {

template <typename F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& err) {
    throw StageError(name, err.what());
  }
}

}  // namespace

RoundTripReport bridgeRoundTrip(const CovarianceGroup& gs, Tolerance tol, SplitMix64& rng, int samples) {
  RoundTripReport r;
  r.inputDims = gs.fibreDims();
  const int n = static_cast<int>(r.inputDims.size());

  const EmbeddingInvariant phi = stage("phi", [&] { return phiFromCovarianceGroup(gs); });
  const ReadOff read = stage("readoff", [&] { return readOffPair(phi, tol); });
  if (!read.omega) throw StageError("readoff", "no cocycle was read off");
  const Cocycle2& omega = *read.omega;

  // Phase gauge c_g with c_xx u_xx = 1 and c_yx u_yx = (c_xy u_xy)^*.
  std::vector<Complex> c(static_cast<std::size_t>(n) * n, Complex(1.0, 0.0));
  const auto at = [n](int x, int y) { return static_cast<std::size_t>(x) * n + y; };
  double gaugeResidual = 0.0;
  stage("gauge", [&] {
    const auto scalarOf = [&](const Matrix& m, const std::string& what) {
      const Complex lambda = m(0, 0);
      const double res = operatorNorm(m - lambda * Matrix::Identity(m.rows(), m.cols()));
      gaugeResidual = std::max(gaugeResidual, res);
      if (res > tol.eps()) throw NotATwistError(what + " is not a scalar unitary");
      return lambda;
    };
    for (int x = 0; x < n; ++x) c[at(x, x)] = std::conj(scalarOf(read.assignment[{x, x}], "holonomy at " + arrowName({x, x})));
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        const Complex mu = scalarOf(read.assignment[{y, x}] * read.assignment[{x, y}], "loop through " + arrowName({x, y}));
        c[at(y, x)] = std::conj(mu);
      }
    return 0;
  });

  UnitaryAssignment normalized = read.assignment;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) normalized[{x, y}] = c[at(x, y)] * read.assignment[{x, y}];

  const Cocycle2 tau = stage("twist", [&] {
    Cocycle2 t = extractCocycle(normalized, tol);
    Cocycle2 scalarTwist;
    scalarTwist.points = n;
    for (const auto& [p, v] : t.values) {
      if (operatorNorm(v - v(0, 0) * Matrix::Identity(v.rows(), v.cols())) > tol.eps())
        throw NotATwistError("normalized cocycle is not scalar");
      scalarTwist.values.emplace(p, Matrix::Constant(1, 1, v(0, 0)));
    }
    return scalarTwist;
  });

  // Flat frame through the base point 0.
  UnitaryAssignment frame = normalized;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) frame[{x, y}] = normalized[{x, 0}] * normalized[{0, y}];

  const FellBundleModel bundle =
      stage("bundle", [&] { return buildSemidirectBundle(CStarBundle{r.inputDims}, frame, tau, tol); });
  r.axiomsPass = checkFellAxioms(bundle, std::max(1, samples / 5), tol, rng).allPass();
  r.recoveredDims = bundle.fibreDims();
  r.dimsPreserved = r.recoveredDims == r.inputDims;

  // Sections u'_g = conj(c_g) (g, 1) reproduce omega exactly.
  std::vector<FibreElement> sections;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int d = r.inputDims[x];
      sections.push_back(bundle.element({x, y}, std::conj(c[at(x, y)]) * Matrix::Identity(d, d)));
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const FibreElement prod = bundle.multiply(sections[at(x, y)], sections[at(y, z)]);
        const Matrix recovered = prod.value * sections[at(x, z)].value.adjoint();
        r.omegaResidual = std::max(r.omegaResidual, operatorNorm(recovered - omega({x, y, z})));
      }

  const ConditionalExpectation recoveredP = restrictionExpectation(bundle);
  for (int s = 0; s < samples; ++s) {
    const Matrix b = randomMatrix(bundle.totalDim(), bundle.totalDim(), rng);
    r.expectationResidual = std::max(r.expectationResidual, operatorNorm(recoveredP(b) - read.p(b)));
  }

  // Recovered sigma: the sections along the graph of the base map.
  Matrix sigma = Matrix::Zero(bundle.totalDim(), bundle.totalDim());
  for (const Arrow& g : gs.sigma.base.graph()) sigma += bundle.embed(sections[at(g.x, g.y)]);
  const EmbeddingInvariant recoveredSigma{sigma, r.recoveredDims};
  const EmbeddingInvariant inputSigma{gs.sigma.u, r.inputDims};
  r.supportPreserved = recoveredSigma.support(tol) == inputSigma.support(tol);

  r.stages = {{"gauge", gaugeResidual}, {"omega", r.omegaResidual}, {"expectation", r.expectationResidual}};
  r.pass = r.dimsPreserved && r.supportPreserved && r.axiomsPass && r.omegaResidual <= tol.eps() &&
           r.expectationResidual <= tol.eps();
  return r;
}

}  // namespace fellkit
