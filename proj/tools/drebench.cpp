// Benchmark and invariant-check driver for the splitting toolkit.
//
//   drebench bench --problem boxqp --n 500 --seed 1 --solver fdrs --out trace.csv
//   drebench sweep --problem l1ls --m 100 --n 1000 --fractions 0.2,0.6,0.8 --out run
//   drebench check --level fast

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dre/cli.hpp"

namespace {

using dre::cli::ExperimentSpec;

void add_spec_flags(CLI::App* cmd, ExperimentSpec& spec, std::string& problem,
                    std::string& solver, std::string& gamma, std::string& lambda) {
  cmd->add_option("--problem", problem, "problem family: boxqp or l1ls")
      ->check(CLI::IsMember({"boxqp", "l1ls"}));
  cmd->add_option("--n", spec.n, "number of variables");
  cmd->add_option("--m", spec.m, "number of rows (l1ls)");
  cmd->add_option("--seed", spec.seed, "generator seed");
  cmd->add_option("--cond", spec.cond, "target condition number (boxqp)");
  cmd->add_option("--rho", spec.rho, "l1 regularization weight (l1ls)");
  cmd->add_option("--nnz", spec.nnz, "planted support size (l1ls)");
  cmd->add_option("--solver", solver, "drs or fdrs")->check(CLI::IsMember({"drs", "fdrs"}));
  cmd->add_option("--gamma", gamma, "star or a fraction of 1/L_f in (0,1)");
  cmd->add_option("--lambda", lambda, "theorem or an explicit value in (0,2)");
  cmd->add_option("--max-iter", spec.max_iter, "iteration cap");
  cmd->add_option("--tol", spec.tol, "relative fixed-point residual target");
}

int apply_spec_strings(ExperimentSpec& spec, const std::string& problem,
                       const std::string& solver, const std::string& gamma,
                       const std::string& lambda) {
  spec.family = problem == "l1ls" ? ExperimentSpec::Family::L1Ls
                                  : ExperimentSpec::Family::BoxQp;
  spec.solver =
      solver == "fdrs" ? ExperimentSpec::Solver::Fdrs : ExperimentSpec::Solver::Drs;
  if (gamma == "star") {
    spec.gamma_star = true;
  } else {
    spec.gamma_star = false;
    try {
      spec.gamma_fraction = std::stod(gamma);
    } catch (const std::exception&) {
      std::cerr << "invalid --gamma value: " << gamma << '\n';
      return 2;
    }
  }
  if (lambda == "theorem") {
    spec.lambda_theorem = true;
  } else {
    spec.lambda_theorem = false;
    try {
      spec.lambda_value = std::stod(lambda);
    } catch (const std::exception&) {
      std::cerr << "invalid --lambda value: " << lambda << '\n';
      return 2;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Douglas-Rachford splitting benchmark harness"};
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::string problem = "boxqp", solver = "drs", gamma = "star", lambda = "theorem";
  std::string out_path = "trace.csv";
  std::vector<double> fractions;
  std::string level = "fast";

  auto* bench = app.add_subcommand("bench", "run one experiment and write its trace");
  add_spec_flags(bench, spec, problem, solver, gamma, lambda);
  bench->add_option("--out", out_path, "trace CSV path");

  auto* sweep = app.add_subcommand("sweep", "compare gamma choices on one instance");
  add_spec_flags(sweep, spec, problem, solver, gamma, lambda);
  sweep->add_option("--out", out_path, "output prefix");
  sweep->add_option("--fractions", fractions, "gamma fractions of 1/L_f")->delimiter(',');

  auto* check = app.add_subcommand("check", "run the invariant suites");
  check->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const int spec_rc = apply_spec_strings(spec, problem, solver, gamma, lambda);
  if (spec_rc != 0) return spec_rc;

  if (bench->parsed()) {
    return dre::cli::cmd_bench(spec, out_path, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    return dre::cli::cmd_gamma_sweep(spec, fractions, out_path, std::cout, std::cerr);
  }
  const auto lvl = level == "full" ? dre::checks::Level::Full : dre::checks::Level::Fast;
  return dre::cli::cmd_check(lvl, std::cout);
}
