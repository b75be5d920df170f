// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "fellkit/commands.hpp"
#include "fellkit/embedding.hpp"
#include "fellkit/presets.hpp"
#include "fellkit/random.hpp"
#include "oracles.hpp"

using namespace fellkit;

namespace {

struct Outcome {
  bool pass = false;
  std::string note;
};

FellBundleModel nonCocycleTwist() {
  const CStarBundle e0{{1, 1, 1}};
  Cocycle2 tau = Cocycle2::trivial(3);
  tau.values[{0, 1, 2}] = Matrix::Constant(1, 1, Complex(0.0, 1.0));
  tau.values[{2, 1, 0}] = Matrix::Constant(1, 1, Complex(0.0, -1.0));
  return buildSemidirectBundle(e0, identityFrame(e0), tau);
}

double maxResidual(const AxiomReport& r) {
  double worst = 0.0;
  for (const auto& a : r.axioms) worst = std::max(worst, a.maxResidual);
  return worst;
}

std::vector<Matrix> offDiagonalFibreBasis(const FellBundleModel& e) {
  std::vector<Matrix> out;
  for (const Arrow& g : e.base().arrows())
    if (!g.isUnit())
      for (const FibreElement& f : e.fibreBasis(g)) out.push_back(e.embed(f));
  return out;
}

Outcome fellAxioms() {
  const Tolerance tol(1e-9);
  SplitMix64 rng(1);
  const AxiomReport imp = checkFellAxioms(imprimitivityModel({2, 1, 3}).bundle(), 200, tol, rng);
  const AxiomReport semi = checkFellAxioms(semidirectModel(4, 2, 1).bundle(), 200, tol, rng);
  const FellBundleModel good = semidirectModel(3, 2, 2).bundle();
  const AxiomReport broken = checkFellAxioms(good.withFrameEntryUnchecked({1, 0}, randomUnitary(2, rng)), 20, tol, rng);
  const AxiomReport twisted = checkFellAxioms(nonCocycleTwist(), 20, tol, rng);
  std::ostringstream note;
  note << "max residual " << std::max(maxResidual(imp), maxResidual(semi)) << ", broken frame axiom 8 "
       << (broken[8].pass ? "passes" : "fails") << ", bad twist axiom 3 " << (twisted[3].pass ? "passes" : "fails");
  return {imp.allPass() && semi.allPass() && !broken[8].pass && !twisted[3].pass, note.str()};
}

Outcome saturationRegularity() {
  const FellBundleModel imp = imprimitivityModel({2, 1, 3}).bundle();
  const FellBundleModel semi = semidirectModel(4, 2, 1).bundle();
  const std::size_t a = spanDimension(normalizerProducts(imp));
  const std::size_t b = spanDimension(normalizerProducts(semi));
  std::ostringstream note;
  note << "span " << a << "/36, " << b << "/64";
  return {isSaturated(imp) && isSaturated(semi) && a == 36 && b == 64, note.str()};
}

Outcome kernelIdentity() {
  SplitMix64 rng(3);
  const FellBundleModel masa = diagonalMasaModel(4).bundle();
  const PairClassification c = classifyPair(pairFromBundle(masa), offDiagonalFibreBasis(masa), Tolerance(), rng);
  const FellBundleModel imp = imprimitivityModel({2, 1}).bundle();
  const std::size_t k = spanDimension(kernelBasis(restrictionExpectation(imp)));
  std::ostringstream note;
  note << "masa ker P " << c.kernelDim << ", span N_f " << c.freeNormalizerSpanDim << ", " << toString(c.kind)
       << "; (2,1) ker P " << k;
  return {c.kernelDim == 12 && c.freeNormalizerSpanDim == 12 && c.kind == PairKind::Diagonal && k == 4, note.str()};
}

Outcome expectationContract() {
  SplitMix64 rng(4);
  const Tolerance tol(1e-9);
  bool ok = true;
  double worst = 0.0;
  for (const Model& m : {imprimitivityModel({2, 1, 3}), semidirectModel(4, 2, 1), diagonalMasaModel(4)}) {
    const ExpectationReport r = verifyExpectation(restrictionExpectation(m.bundle()), 500, tol, rng);
    for (const PropertyCheck* p : {&r.fixesRange, &r.bimodule, &r.positive, &r.faithful}) {
      ok = ok && p->pass;
      worst = std::max(worst, p->maxResidual);
    }
  }
  std::ostringstream note;
  note << "500 samples per preset, max residual " << worst;
  return {ok, note.str()};
}

Outcome fourPoint() {
  RunConfig cfg;
  cfg.command = "phi";
  cfg.subcommand = "build";
  cfg.preset = "fourpoint";
  cfg.format = OutputFormat::Json;
  const CommandResult res = runCommand(cfg);
  const Json& powers = res.output["details"]["generator_powers"];
  const Json g1 = Json::array({"(1,2)", "(2,3)", "(3,4)", "(4,1)"});
  const Json g2 = Json::array({"(1,3)", "(2,4)", "(3,1)", "(4,2)"});
  const bool supports = powers.size() >= 2 && powers[0]["support"] == g1 && powers[1]["support"] == g2;

  const CovarianceGroup gs = fourPointModel().covarianceGroup();
  const UnitaryAssignment u = assignmentFromGenerator(gs);
  const Cocycle2 w = extractCocycle(u);
  const double repro = operatorNorm(u[{0, 1}] * u[{1, 2}] - w({0, 1, 2}) * u[{0, 2}]);
  const EmbeddingInvariant phi = phiFromCovarianceGroup(gs);
  const std::size_t blocks = phi.support().size();
  const bool orientable = isOrientable(phi);

  std::ostringstream note;
  note << "supports " << (supports ? "match" : "differ") << ", u12 u23 residual " << repro << ", " << blocks
       << " blocks, orientable " << (orientable ? "yes" : "no");
  return {res.exitCode == 0 && supports && repro < 1e-10 && blocks == 16 && orientable, note.str()};
}

Outcome unitaryNormalizers() {
  SplitMix64 rng(6);
  const std::vector<int> dims{2, 2, 2, 2};
  const FiniteCStarAlgebra a = makeAlgebra(dims);
  int forward = 0;
  int rejected = 0;
  for (int s = 0; s < 100; ++s) {
    const SpatialAutomorphism aut = randomSpatialAutomorphism(randomBisection(4, rng), dims, rng);
    if (isUnitary(aut.u) && isNormalizer(aut.u, a)) ++forward;
    const Matrix cand = randomOffBisectionUnitary(dims, rng);
    if (isUnitary(cand) && !normalizerSupport(cand, a).partialBijection && !isNormalizer(cand, a)) ++rejected;
  }
  std::ostringstream note;
  note << forward << "/100 automorphisms normalize, " << rejected << "/100 off-bisection unitaries rejected";
  return {forward == 100 && rejected == 100, note.str()};
}

Outcome cocycleIdentity() {
  SplitMix64 rng(7);
  const Tolerance tol(1e-12);
  double worst = 0.0;
  bool ok = true;
  int count = 0;
  for (int n = 1; n <= 5; ++n)
    for (int dim = 1; dim <= 3; ++dim)
      for (int t = 0; t < 4; ++t) {
        // Generators over random n-cycles: the assignment is then defined on
        // every arrow.
        Bisection base = randomBisection(n, rng);
        while (!isMinimalFlow(base)) base = randomBisection(n, rng);
        const auto sigma = scalarHolonomyAutomorphism(base, n, dim, rng, randomPhase(rng));
        const auto r = cocycleIdentityCheck(extractCocycle(assignmentFromGenerator(makeCovarianceGroup(sigma))), tol);
        ok = ok && r.pass;
        worst = std::max(worst, r.maxResidual);
        ++count;
      }
  std::ostringstream note;
  note << count << " generators, max residual " << worst;
  return {ok && count > 0, note.str()};
}

Outcome slices() {
  SplitMix64 rng(8);
  const std::vector<int> dims{1, 1, 1, 1};
  const FiniteCStarAlgebra a = makeAlgebra(dims);
  const auto list = selfAdjointBisections(PairGroupoid(4));
  int good = 0;
  for (const Bisection& g : list) {
    const SliceReport r = sliceCheck(sliceFromBisection(a, randomSpatialAutomorphism(g, dims, rng)), a);
    if (r.bimodule && r.hilbert) ++good;
  }
  std::ostringstream note;
  const int bruteForce = oracle::involutionCountByMaps(4);
  note << list.size() << " self-adjoint bisections (brute force " << bruteForce << "), " << good
       << " Hilbert bimodules";
  return {list.size() == 10 && bruteForce == 10 && good == 10, note.str()};
}

Outcome generation() {
  const std::vector<int> dims{1, 1, 1, 1};
  const FiniteCStarAlgebra a = makeAlgebra(dims);
  const FiniteCStarAlgebra b = fullMatrixAlgebra(4);
  SplitMix64 rng(9);
  const GenerationReport four = aDynamicalGenerationCheck(fourPointModel().covarianceGroup(), a, b);
  const GenerationReport id = aDynamicalGenerationCheck(makeCovarianceGroup(identityAutomorphism(dims)), a, b);
  const GenerationReport two = aDynamicalGenerationCheck(
      makeCovarianceGroup(randomSpatialAutomorphism(Bisection::fromOneIndexed({2, 1, 4, 3}), dims, rng)), a, b);
  std::ostringstream note;
  note << "4-cycle span " << four.spanDim << ", identity span " << id.spanDim << ", 2-cycles span " << two.spanDim;
  return {four.generates && four.spanDim == 16 && !id.generates && !two.generates, note.str()};
}

Outcome roundTrip() {
  SplitMix64 rng(10);
  const Tolerance tol(1e-9);
  int passed = 0;
  double omega = 0.0;
  double p = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 3;
    const int dim = 1 + (t / 3) % 2;
    const auto sigma = scalarHolonomyAutomorphism(Bisection::shift(n), n, dim, rng, randomPhase(rng));
    const RoundTripReport r = bridgeRoundTrip(makeCovarianceGroup(sigma), tol, rng, 50);
    omega = std::max(omega, r.omegaResidual);
    p = std::max(p, r.expectationResidual);
    if (r.pass && r.dimsPreserved && r.omegaResidual <= 1e-9 && r.expectationResidual <= 1e-9) ++passed;
  }
  std::ostringstream note;
  note << passed << "/20 instances, omega residual " << omega << ", P residual " << p;
  return {passed == 20, note.str()};
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  status = pclose(pipe);
  return out;
}

Outcome cliDeterminism() {
  const std::string cmd = std::string(FELLKIT_CLI) + " report --preset fourpoint --seed 1 --format json";
  int s1 = 0;
  int s2 = 0;
  const std::string first = capture(cmd, s1);
  const std::string second = capture(cmd, s2);
  std::ostringstream note;
  note << first.size() << " bytes, runs " << (first == second ? "identical" : "differ");
  return {s1 == 0 && s2 == 0 && !first.empty() && first == second, note.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"fell axioms and negative controls", fellAxioms},
      {"saturation gives regularity", saturationRegularity},
      {"diagonal pair kernel identity", kernelIdentity},
      {"conditional expectation contract", expectationContract},
      {"four-point example", fourPoint},
      {"spatial automorphisms are the unitary normalizers", unitaryNormalizers},
      {"cocycle identity", cocycleIdentity},
      {"self-adjoint slices are Hilbert bimodules", slices},
      {"A-dynamical generation", generation},
      {"bridge round trip", roundTrip},
      {"CLI determinism", cliDeterminism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << "  [" << o.note
              << "]\n";
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria pass\n";
  return failures == 0 ? 0 : 1;
}
