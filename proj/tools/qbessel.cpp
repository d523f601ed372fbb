// qbessel: series solutions of fractional quasi-Bessel equations.
//
//   qbessel solve spec.json --out results/ [--root k] [--oracle]
//                                          [--max-terms N] [--eps-tail E]

#include <cstddef>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qbessel/cli/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Series solutions of fractional quasi-Bessel equations"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string output_dir = ".";
  std::size_t root = 0;
  std::size_t max_terms = 0;
  double eps_tail = 0.0;
  qbessel::cli::Flags flags;

  CLI::App* solve = app.add_subcommand("solve", "Solve the equation described by a JSON spec");
  solve->add_option("spec", spec_path, "Equation spec (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("-o,--out", output_dir, "Output directory")->capture_default_str();
  auto* root_opt = solve->add_option("--root", root, "Only build the series for root k (index into roots.csv)");
  solve->add_flag("--oracle", flags.oracle, "Cross-check against special-function closed forms when applicable");
  auto* terms_opt = solve->add_option("--max-terms", max_terms, "Override options.n_terms_max")->check(CLI::PositiveNumber);
  auto* eps_opt = solve->add_option("--eps-tail", eps_tail, "Override options.eps_tail")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qbessel::cli::exit_validation_failure;
  }

  if (*root_opt) flags.root = root;
  if (*terms_opt) flags.max_terms = max_terms;
  if (*eps_opt) flags.eps_tail = eps_tail;
  return qbessel::cli::solve_command(spec_path, output_dir, flags, std::cerr);
}
