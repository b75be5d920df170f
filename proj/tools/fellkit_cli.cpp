// fellkit: build models, run the verification suites and emit reports.
//
//   fellkit generate --preset fourpoint -o fourpoint.json
//   fellkit check axioms --input fourpoint.json
//   fellkit phi --preset cycle --n 3 --dim 2 --seed 7 --format json
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fellkit/commands.hpp"
#include "fellkit/error.hpp"

namespace {

void addCommon(CLI::App* cmd, fellkit::RunConfig& cfg, std::string& format, std::string& outPath) {
  cmd->add_option("--preset", cfg.preset, "fourpoint | diag-masa | imprimitivity | semidirect | cycle");
  cmd->add_option("--input", cfg.input, "model JSON file");
  cmd->add_option("--n", cfg.n, "number of points (diag-masa, semidirect, cycle)")->check(CLI::PositiveNumber);
  cmd->add_option("--dim", cfg.dim, "fibre dimension (semidirect, cycle)")->check(CLI::PositiveNumber);
  cmd->add_option("--dims", cfg.dims, "fibre dimensions, comma separated (imprimitivity)")->delimiter(',');
  cmd->add_option("--perm", cfg.perm, "generator in 1-indexed one-line form (cycle)")->delimiter(',');
  cmd->add_option("--seed", cfg.seed, "sampling seed");
  cmd->add_option("--eps", cfg.eps, "tolerance; overrides FELLKIT_EPS");
  cmd->add_option("--samples", cfg.samples, "sample count for randomized checks")->check(CLI::PositiveNumber);
  cmd->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("-o,--output", outPath, "write to a file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  fellkit::RunConfig cfg;
  std::string format = "text";
  std::string outPath;

  CLI::App app{"Finite Fell bundles, Cartan pairs and the embedding invariant"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "write a model file for a preset");
  addCommon(generate, cfg, format, outPath);

  auto* check = app.add_subcommand("check", "run one verification suite");
  check->add_option("suite", cfg.subcommand, "axioms | pair | cocycle | unitary-normalizers | generation")
      ->required()
      ->check(CLI::IsMember({"axioms", "pair", "cocycle", "unitary-normalizers", "generation"}));
  addCommon(check, cfg, format, outPath);

  auto* phi = app.add_subcommand("phi", "build Phi, read the pair off it and run the round trip");
  phi->add_option("stage", cfg.subcommand, "build | readoff | roundtrip (default: all)")
      ->check(CLI::IsMember({"build", "readoff", "roundtrip"}));
  addCommon(phi, cfg, format, outPath);

  auto* report = app.add_subcommand("report", "run every applicable suite");
  addCommon(report, cfg, format, outPath);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  // generate always writes JSON; there is no text form of a model.
  cfg.format = (format == "json" || cfg.command == "generate") ? fellkit::OutputFormat::Json
                                                                : fellkit::OutputFormat::Text;

  fellkit::CommandResult result;
  try {
    result = fellkit::runCommand(cfg);
  } catch (const fellkit::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const fellkit::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const fellkit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  const std::string text = cfg.format == fellkit::OutputFormat::Json ? result.output.dump(2) + "\n"
                                                                     : fellkit::renderText(result.output);
  if (outPath.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(outPath);
    if (!out) {
      std::cerr << "cannot write " << outPath << '\n';
      return 2;
    }
    out << text;
  }
  return result.exitCode;
}
