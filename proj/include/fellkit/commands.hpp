#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fellkit/io.hpp"
#include "fellkit/presets.hpp"

namespace fellkit {

enum class OutputFormat { Text, Json };

struct RunConfig {
  std::string command;     // generate | check | phi | report
  std::string subcommand;  // check: axioms | pair | cocycle | unitary-normalizers | generation; phi: build | readoff | roundtrip
  std::optional<std::string> input;
  std::optional<std::string> preset;  // fourpoint | diag-masa | imprimitivity | semidirect | cycle
  int n = 4;
  int dim = 2;
  std::vector<int> dims{2, 1, 3};
  std::vector<int> perm;  // 1-indexed; empty means the shift
  std::uint64_t seed = 1;
  std::optional<double> eps;
  std::optional<int> samples;
  OutputFormat format = OutputFormat::Text;
};

struct CommandResult {
  Json output;  // a model, one report object, or an array of reports
  int exitCode = 0;
};

/// --eps wins over FELLKIT_EPS, which wins over the default.
Tolerance resolveTolerance(const RunConfig& cfg);

/// Exactly one of preset / input must be given (UsageError otherwise).
Model resolveModel(const RunConfig& cfg);

CheckReport checkAxioms(const Model& m, const RunConfig& cfg);
CheckReport checkPair(const Model& m, const RunConfig& cfg);
CheckReport checkCocycle(const Model& m, const RunConfig& cfg);
CheckReport checkUnitaryNormalizers(const Model& m, const RunConfig& cfg);
CheckReport checkGeneration(const Model& m, const RunConfig& cfg);
CheckReport phiBuild(const Model& m, const RunConfig& cfg);
CheckReport phiReadoff(const Model& m, const RunConfig& cfg);
CheckReport phiRoundtrip(const Model& m, const RunConfig& cfg);

/// Runs the configured command. Library errors inside a check become a
/// failing report; usage and parse errors propagate.
CommandResult runCommand(const RunConfig& cfg);

/// Human-readable rendering of a command result.
std::string renderText(const Json& output);

}  // namespace fellkit
