// gls: Grand Lebesgue Space norms, equivalence constants, tail envelopes and
// convolution checks from the command line.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gls/cli.hpp"

namespace {

void add_common(CLI::App* cmd, gls::cli::ExperimentConfig& c, std::string& config_path) {
  cmd->add_option("--model", c.model, "gaussian | uniform01 | exponential | rademacher | constant:<c> | pareto:<a> | empirical:<path>");
  cmd->add_option("--psi", c.psi, "power_slowvary(r=<float>, delta=<float>) | natural | oscillating_sqrt");
  cmd->add_option("--set", c.set, "full | intervals:1-2,3-inf | grid:<grid spec>");
  cmd->add_option("--grid", c.grid, "geometric:D=<int>:M=<int> | integers:M=<int>");
  cmd->add_option("--group", c.group, "cyclic:<n> | dihedral:<n> | symmetric:<n> | product:<spec>x<spec>");
  cmd->add_option("--p-max", c.p_max, "Truncation of the supremum over p");
  cmd->add_option("--M", c.M, "Grid truncation index");
  cmd->add_option("--seed", c.seed, "RNG seed (default: $GLS_DEFAULT_SEED, else 42)");
  cmd->add_option("--n", c.n, "Monte Carlo sample size");
  cmd->add_option("--out", c.out, "Write CSV here instead of stdout");
  cmd->add_flag("--strict", c.strict, "Exit 1 when a norm diverges");
  cmd->add_option("--config", config_path, "key=value file; flags override it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grand Lebesgue Space norms and inequality checks"};
  app.require_subcommand(1);

  gls::cli::ExperimentConfig flags;
  std::string config_path;

  auto* norm = app.add_subcommand("norm", "Full, restricted or discrete GLS norm");
  add_common(norm, flags, config_path);

  auto* verify = app.add_subcommand("verify", "Run a randomized verification suite");
  add_common(verify, flags, config_path);
  verify->add_option("--suite", flags.suite, "sandwich | tails | young | algebra | all")
      ->check(CLI::IsMember({"sandwich", "tails", "young", "algebra", "all"}));

  auto* tail = app.add_subcommand("tail", "Tail envelope check and K estimate");
  add_common(tail, flags, config_path);
  tail->add_option("--x", flags.x, "Comma separated thresholds");

  auto* conv = app.add_subcommand("convolve", "Convolve two function files over a group");
  add_common(conv, flags, config_path);
  conv->add_option("files", flags.files, "f and g, one value per line in element order")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gls::cli::kExitUsage;
  }

  gls::cli::ExperimentConfig config = flags;
  if (!config_path.empty()) {
    try {
      config = gls::cli::merge(gls::cli::load_config_file(config_path), flags);
    } catch (const gls::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return gls::cli::kExitUsage;
    }
  }

  if (norm->parsed()) return gls::cli::cmd_norm(config, std::cout, std::cerr);
  if (verify->parsed()) return gls::cli::cmd_verify(config, std::cout, std::cerr);
  if (tail->parsed()) return gls::cli::cmd_tail(config, std::cout, std::cerr);
  return gls::cli::cmd_convolve(config, std::cout, std::cerr);
}
