#include "fellkit/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "fellkit/embedding.hpp"
#include "fellkit/error.hpp"

namespace fellkit {

Tolerance resolveTolerance(const RunConfig& cfg) {
  double eps = Tolerance::kDefaultEps;
  if (cfg.eps) {
    eps = *cfg.eps;
  } else if (const char* env = std::getenv("FELLKIT_EPS"); env && *env) {
    char* end = nullptr;
    eps = std::strtod(env, &end);
    if (end == env || *end != '\0') throw UsageError(std::string("FELLKIT_EPS is not a number: ") + env);
  }
  if (!(eps > 0.0)) throw UsageError("tolerance must be positive");
  return Tolerance(eps);
}

Model resolveModel(const RunConfig& cfg) {
  if (cfg.preset.has_value() == cfg.input.has_value())
    throw UsageError("give exactly one of --preset or --input");
  if (cfg.input) return loadModel(*cfg.input);
  const std::string& p = *cfg.preset;
  try {
    if (p == "fourpoint") return fourPointModel();
    if (p == "diag-masa") return diagonalMasaModel(cfg.n);
    if (p == "imprimitivity") return imprimitivityModel(cfg.dims);
    if (p == "semidirect") return semidirectModel(cfg.n, cfg.dim, cfg.seed);
    if (p == "cycle") return cycleModel(cfg.n, cfg.dim, cfg.perm, cfg.seed);
  } catch (const InvalidDescriptorError& e) {
    throw UsageError(std::string("bad preset parameters: ") + e.what());
  }
  throw UsageError("unknown preset '" + p + "' (expected fourpoint, diag-masa, imprimitivity, semidirect or cycle)");
}

namespace {

Json supportJson(const std::vector<Arrow>& arrows) {
  Json out = Json::array();
  for (const Arrow& g : arrows) out.push_back(arrowKey(g));
  return out;
}

std::string pairKey(const ComposablePair& p) { return "(" + arrowKey(p.first()) + "," + arrowKey(p.second()) + ")"; }

Json omegaTable(const Cocycle2& w) {
  Json table = Json::object();
  for (const auto& [p, v] : w.values)
    table[pairKey(p)] = v.rows() == 1 || w.isScalar() ? toJson(v(0, 0)) : toJson(v);
  return table;
}

Json propertyJson(const PropertyCheck& c) { return {{"pass", c.pass}, {"residual", c.maxResidual}}; }

std::vector<Matrix> fibreBasisSample(const FellBundleModel& e) {
  std::vector<Matrix> sample;
  for (const Arrow& g : e.base().arrows())
    for (const FibreElement& f : e.fibreBasis(g)) sample.push_back(e.embed(f));
  return sample;
}

// Runs a check body; library errors turn into a failing report.
CheckReport guarded(const std::string& name, const std::function<CheckReport()>& body) {
  try {
    return body();
  } catch (const UsageError&) {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    CheckReport r{name, false, 0.0, Json::object()};
    r.details["error"] = e.what();
    return r;
  }
}

}  // namespace

CheckReport checkAxioms(const Model& m, const RunConfig& cfg) {
  return guarded("axioms", [&] {
    const Tolerance tol = resolveTolerance(cfg);
    SplitMix64 rng(cfg.seed);
    const FellBundleModel e = m.bundle(tol);
    const int maxDim = *std::max_element(m.fibreDims.begin(), m.fibreDims.end());
    const AxiomReport rep = checkFellAxioms(e, cfg.samples.value_or(200), tol, rng, maxDim <= 4);
    CheckReport r{"axioms", rep.allPass(), 0.0, Json::object()};
    Json list = Json::array();
    int passed = 0;
    for (const AxiomResult& a : rep.axioms) {
      r.residual = std::max(r.residual, a.maxResidual);
      passed += a.pass ? 1 : 0;
      list.push_back({{"number", a.number}, {"name", a.name}, {"pass", a.pass}, {"residual", a.maxResidual},
                      {"evaluations", a.evaluations}});
    }
    r.details["passed"] = std::to_string(passed) + "/10";
    r.details["axioms"] = std::move(list);
    return r;
  });
}

CheckReport checkPair(const Model& m, const RunConfig& cfg) {
  return guarded("pair", [&] {
    const Tolerance tol = resolveTolerance(cfg);
    SplitMix64 rng(cfg.seed);
    const FellBundleModel e = m.bundle(tol);
    const PairCandidate pair = pairFromBundle(e);
    const std::vector<Matrix> sample = fibreBasisSample(e);
    const PairClassification c = classifyPair(pair, sample, tol, rng, cfg.samples.value_or(50));
    CheckReport r{"pair", c.kind != PairKind::Neither, 0.0, Json::object()};
    const ExpectationReport& x = c.expectation;
    for (const PropertyCheck* p : {&x.fixesRange, &x.bimodule, &x.positive, &x.idempotent, &x.contractive,
                                   &x.landsInRange})
      r.residual = std::max(r.residual, p->maxResidual);
    r.details["classification"] = toString(c.kind);
    r.details["unit_in_A"] = c.unitInA;
    r.details["regular"] = c.regular;
    r.details["saturated"] = isSaturated(e, tol);
    r.details["dim_A"] = pair.a.dimension();
    r.details["dim_B"] = c.dimB;
    r.details["normalizer_span"] = c.normalizerSpanDim;
    r.details["normalizer_product_span"] = spanDimension(normalizerProducts(e), tol);
    r.details["kernel_dim"] = c.kernelDim;
    r.details["free_normalizer_span"] = c.freeNormalizerSpanDim;
    r.details["nilpotent_normalizers_in_A"] = c.nilpotentNormalizersInA;
    r.details["kernel_plus_free_span"] = c.kernelPlusFreeSpanDim;
    r.details["expectation"] = {{"fixes_range", propertyJson(x.fixesRange)},
                                {"bimodule", propertyJson(x.bimodule)},
                                {"positive", propertyJson(x.positive)},
                                {"faithful", propertyJson(x.faithful)},
                                {"idempotent", propertyJson(x.idempotent)},
                                {"contractive", propertyJson(x.contractive)},
                                {"lands_in_range", propertyJson(x.landsInRange)}};
    r.details["extension_property"] = extensionPropertyCheck(pair, tol);
    r.details["uniqueness"] = c.uniqueness;
    return r;
  });
}

CheckReport checkCocycle(const Model& m, const RunConfig& cfg) {
  return guarded("cocycle", [&] {
    const Tolerance tol = resolveTolerance(cfg);
    Cocycle2 w;
    std::string source;
    if (m.generator) {
      w = extractCocycle(assignmentFromGenerator(m.covarianceGroup()), tol);
      source = "generator";
    } else if (m.twist) {
      w = *m.twist;
      source = "twist";
    } else {
      w = Cocycle2::trivial(m.points());
      source = "trivial";
    }
    const CocycleIdentityResult res = cocycleIdentityCheck(w, tol);
    CheckReport r{"cocycle", res.pass, res.maxResidual, Json::object()};
    r.details["source"] = source;
    r.details["scalar"] = w.isScalar(tol);
    if (w.isScalar(tol)) r.details["involution_compatible"] = isInvolutionCompatible(w, tol);
    if (res.worstTriple) {
      const auto [x, y, z, v] = *res.worstTriple;
      r.details["worst_triple"] = {x + 1, y + 1, z + 1, v + 1};
    }
    r.details["omega"] = omegaTable(w);
    return r;
  });
}

CheckReport checkUnitaryNormalizers(const Model& m, const RunConfig& cfg) {
  return guarded("unitary-normalizers", [&] {
    const Tolerance tol = resolveTolerance(cfg);
    SplitMix64 rng(cfg.seed);
    const UnitaryNormalizerReport u = checkUnitaryNormalizerTheorem(m.bundle(tol), cfg.samples.value_or(100), tol, rng);
    CheckReport r{"unitary-normalizers", u.pass(), u.maxAutomorphismResidual, Json::object()};
    r.details["automorphisms_tested"] = u.automorphismsTested;
    r.details["automorphisms_unitary_normalizers"] = u.automorphismsUnitaryNormalizers;
    r.details["candidates_tested"] = u.candidatesTested;
    r.details["candidates_normalizing"] = u.candidatesNormalizing;
    r.details["normalizing_on_bisection"] = u.normalizingOnBisection;
    r.details["off_bisection_candidates"] = u.offBisectionCandidates;
    r.details["off_bisection_rejected"] = u.offBisectionRejected;
    r.details["forward_inclusion"] = u.forwardInclusion;
    r.details["backward_inclusion"] = u.backwardInclusion;
    return r;
  });
}

CheckReport checkGeneration(const Model& m, const RunConfig& cfg) {
  return guarded("generation", [&] {
    const Tolerance tol = resolveTolerance(cfg);
    const FellBundleModel e = m.bundle(tol);
    const GenerationReport g =
        aDynamicalGenerationCheck(m.covarianceGroup(), diagonalAlgebra(e), envelopingAlgebra(e), tol);
    CheckReport r{"generation", g.generates, 0.0, Json::object()};
    r.details["minimal_flow"] = g.minimalFlow;
    r.details["generator"] = m.generator->base.oneIndexed();
    r.details["span_dim"] = g.spanDim;
    r.details["dim_B"] = g.dimB;
    r.details["levels"] = g.levels;
    return r;
  });
}

CheckReport phiBuild(const Model& m, const RunConfig& cfg) {
  return guarded("phi-build", [&] {
    const Tolerance tol = resolveTolerance(cfg);
    const CovarianceGroup gs = m.covarianceGroup();
    CheckReport r{"phi-build", false, 0.0, Json::object()};
    Json powers = Json::array();
    for (std::size_t k = 0; k < gs.elements.size() && k < 2; ++k)
      powers.push_back({{"power", k + 1},
                        {"base", gs.elements[k].base.oneIndexed()},
                        {"support", supportJson(EmbeddingInvariant{gs.elements[k].u, m.fibreDims}.support(tol))}});
    r.details["generator_powers"] = std::move(powers);
    try {
      const EmbeddingInvariant phi = phiFromCovarianceGroup(gs);
      const std::vector<Arrow> sup = phi.support(tol);
      r.pass = isOrientable(phi, tol);
      r.residual = operatorNorm(phi.phi - phiProductForm(gs));
      r.details["nonzero_blocks"] = sup.size();
      r.details["orientable"] = r.pass;
      r.details["product_form_residual"] = r.residual;
      r.details["support"] = supportJson(sup);
      r.details["phi"] = toJson(phi.phi);
    } catch (const IncompleteSupportError& e) {
      r.details["error"] = e.what();
    }
    return r;
  });
}

CheckReport phiReadoff(const Model& m, const RunConfig& cfg) {
  return guarded("phi-readoff", [&] {
    const Tolerance tol = resolveTolerance(cfg);
    const EmbeddingInvariant phi = phiFromCovarianceGroup(m.covarianceGroup());
    const ReadOff read = readOffPair(phi, tol);
    const PairCandidate pair{read.a, read.b, read.p};
    CheckReport r{"phi-readoff", true, 0.0, Json::object()};
    r.details["A_block_dims"] = read.a.blockDims();
    r.details["dim_A"] = read.a.dimension();
    r.details["dim_B"] = read.b.dimension();
    r.details["kernel_dim"] = spanDimension(kernelBasis(read.p, tol), tol);
    bool normalizers = true;
    for (const Matrix& u : read.normalizerSample) normalizers = normalizers && isNormalizer(u, read.a, tol);
    // Products a u_ij (a in A) are again normalizers; with them the blocks span B.
    std::vector<Matrix> products;
    for (const Matrix& u : read.normalizerSample)
      for (const Matrix& a : read.a.basis()) products.push_back(a * u);
    const bool regular = isRegular(pair, products, tol);
    r.details["blocks_are_normalizers"] = normalizers;
    r.details["regular"] = regular;
    r.pass = normalizers && regular;
    if (read.omega) {
      // u_g u_h = omega(g, h) u_gh on every composable pair
      for (const auto& [p, v] : read.omega->values) {
        const Matrix lhs = read.assignment[p.first()] * read.assignment[p.second()];
        r.residual = std::max(r.residual, operatorNorm(lhs - v * read.assignment[p.product()]));
      }
      r.details["cocycle_reproduction_residual"] = r.residual;
      r.details["omega"] = omegaTable(*read.omega);
      r.pass = r.pass && r.residual <= tol.eps();
    }
    return r;
  });
}

CheckReport phiRoundtrip(const Model& m, const RunConfig& cfg) {
  return guarded("phi-roundtrip", [&] {
    const Tolerance tol = resolveTolerance(cfg);
    SplitMix64 rng(cfg.seed);
    CheckReport r{"phi-roundtrip", false, 0.0, Json::object()};
    try {
      const RoundTripReport rt = bridgeRoundTrip(m.covarianceGroup(), tol, rng, cfg.samples.value_or(50));
      r.pass = rt.pass;
      r.residual = std::max(rt.omegaResidual, rt.expectationResidual);
      r.details["input_dims"] = rt.inputDims;
      r.details["recovered_dims"] = rt.recoveredDims;
      r.details["dims_preserved"] = rt.dimsPreserved;
      r.details["support_preserved"] = rt.supportPreserved;
      r.details["axioms_pass"] = rt.axiomsPass;
      r.details["omega_residual"] = rt.omegaResidual;
      r.details["expectation_residual"] = rt.expectationResidual;
      Json stages = Json::object();
      for (const StageResidual& s : rt.stages) stages[s.stage] = s.residual;
      r.details["stages"] = std::move(stages);
    } catch (const StageError& e) {
      r.details["stage"] = e.stage();
      r.details["error"] = e.what();
    }
    return r;
  });
}

namespace {

int exitFor(const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports)
    if (!r.pass) return 1;
  return 0;
}

CommandResult collect(const std::vector<CheckReport>& reports) {
  CommandResult out;
  out.exitCode = exitFor(reports);
  if (reports.size() == 1) {
    out.output = toJson(reports.front());
  } else {
    out.output = Json::array();
    for (const CheckReport& r : reports) out.output.push_back(toJson(r));
  }
  return out;
}

}  // namespace

CommandResult runCommand(const RunConfig& cfg) {
  if (cfg.command == "generate") {
    const Model m = resolveModel(cfg);
    return {modelToJson(m), 0};
  }
  const Model m = resolveModel(cfg);
  resolveTolerance(cfg);  // reject a malformed FELLKIT_EPS up front

  if (cfg.command == "check") {
    using Fn = CheckReport (*)(const Model&, const RunConfig&);
    const std::vector<std::pair<std::string, Fn>> table{{"axioms", checkAxioms},
                                                        {"pair", checkPair},
                                                        {"cocycle", checkCocycle},
                                                        {"unitary-normalizers", checkUnitaryNormalizers},
                                                        {"generation", checkGeneration}};
    for (const auto& [name, fn] : table)
      if (name == cfg.subcommand) return collect({fn(m, cfg)});
    throw UsageError("unknown check '" + cfg.subcommand + "'");
  }
  if (cfg.command == "phi") {
    if (!m.generator) throw UsageError("phi needs a model with a generator");
    if (cfg.subcommand == "build") return collect({phiBuild(m, cfg)});
    if (cfg.subcommand == "readoff") return collect({phiReadoff(m, cfg)});
    if (cfg.subcommand == "roundtrip") return collect({phiRoundtrip(m, cfg)});
    if (!cfg.subcommand.empty()) throw UsageError("unknown phi stage '" + cfg.subcommand + "'");
    // Read-off and round trip only make sense once Phi exists.
    const CheckReport build = phiBuild(m, cfg);
    if (!build.pass) return collect({build});
    return collect({build, phiReadoff(m, cfg), phiRoundtrip(m, cfg)});
  }
  if (cfg.command == "report") {
    std::vector<CheckReport> reports{checkAxioms(m, cfg), checkPair(m, cfg), checkCocycle(m, cfg)};
    const bool constant = CStarBundle{m.fibreDims}.locallyTrivial();
    if (constant && m.points() >= 2) reports.push_back(checkUnitaryNormalizers(m, cfg));
    if (m.generator) {
      reports.push_back(checkGeneration(m, cfg));
      if (isMinimalFlow(m.generator->base) && constant) {
        reports.push_back(phiBuild(m, cfg));
        reports.push_back(phiRoundtrip(m, cfg));
      }
    }
    return collect(reports);
  }
  throw UsageError("unknown command '" + cfg.command + "'");
}

namespace {

void renderReport(std::ostringstream& out, const Json& r) {
  out << r.at("check").get<std::string>() << ": " << (r.at("pass").get<bool>() ? "PASS" : "FAIL")
      << "  (residual " << r.at("residual").get<double>() << ")\n";
  for (const auto& [key, value] : r.at("details").items()) {
    const std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    if (text.size() <= 100) out << "  " << key << ": " << text << '\n';
    else out << "  " << key << ": (" << value.size() << " entries, see --format json)\n";
  }
}

}  // namespace

std::string renderText(const Json& output) {
  std::ostringstream out;
  out.precision(3);
  if (output.is_object() && output.contains("check")) {
    renderReport(out, output);
  } else if (output.is_array()) {
    for (const Json& r : output) renderReport(out, r);
  } else {
    out << output.dump(2) << '\n';
  }
  return out.str();
}

}  // namespace fellkit
