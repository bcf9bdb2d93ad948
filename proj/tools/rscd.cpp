#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "rscd/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantised compactified trigonometric Ruijsenaars-Schneider systems"};
  app.require_subcommand(1);
  rscd::cli::RunConfig cfg;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "check parameters and report the coupling type"},
      {"lattice", "list the lattice of dominant weights"},
      {"spectrum", "eigenvalue tuples of the Hamiltonians"},
      {"operators", "matrices of the S, D and H operators"},
      {"eigenbasis", "joint eigenfunctions and normalisation data"},
      {"verify", "run the full invariant suite"},
      {"classical", "sample the classical reduced Hamiltonians"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--n", cfg.n, "number of particles")->required();
    sub->add_option("--p", cfg.p, "winding parameter coprime to n")->required();
    sub->add_option("--M", cfg.M, "nonzero integer quantisation index")->required();
    sub->add_option("--g", cfg.g, "coupling")->required();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--output", cfg.output, "write the report to this file");
    sub->add_option("--tol-eigen", cfg.tol_eigen)->capture_default_str();
    sub->add_option("--tol-gram", cfg.tol_gram)->capture_default_str();
    sub->add_option("--tol-identity", cfg.tol_identity)->capture_default_str();
    sub->callback([&cfg, name = name]() { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rscd::cli::kExitInvalid;
  }

  const auto result = rscd::cli::run(cfg);
  if (cfg.output.empty()) {
    std::cout << result.text;
  } else {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open " << cfg.output << "\n";
      return rscd::cli::kExitFailure;
    }
    out << result.text;
  }
  return result.exit_code;
}
