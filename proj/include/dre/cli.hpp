#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dre/checks.hpp"
#include "dre/problems.hpp"

namespace dre::cli {

struct ExperimentSpec {
  enum class Family { BoxQp, L1Ls };
  enum class Solver { Drs, Fdrs };

  Family family = Family::BoxQp;
  Index n = 50;
  Index m = 20;
  std::uint64_t seed = 1;
  double cond = 100.0;
  double rho = 1.0;
  Index nnz = 5;
  double box_width = 1.0;
  Solver solver = Solver::Drs;
  bool gamma_star = true;
  double gamma_fraction = 0.0;  // of 1/L_f, used when gamma_star is false
  bool lambda_theorem = true;
  double lambda_value = 0.0;
  int max_iter = 20000;
  double tol = 1e-12;
};

// Returns an empty string when the spec is consistent, else a diagnostic.
std::string validate_spec(const ExperimentSpec& spec);

// Runs one experiment, writing the trace CSV to out_path and a key: value
// summary to out_path + ".summary.txt". Exit codes: 0 converged, 2 invalid
// spec or unwritable output, 3 residual target not reached.
int cmd_bench(const ExperimentSpec& spec, const std::string& out_path, std::ostream& out,
              std::ostream& err);

// One run per gamma fraction plus gamma_star, solved concurrently over a
// shared instance. Traces land at out_prefix + "_gamma_<label>.csv", the
// comparison table (rows sorted by gamma) at out_prefix + "_sweep.txt".
int cmd_gamma_sweep(const ExperimentSpec& spec, const std::vector<double>& fractions,
                    const std::string& out_prefix, std::ostream& out, std::ostream& err);

// Runs every invariant suite; exit 0 iff no suite reports a violation.
int cmd_check(checks::Level level, std::ostream& out,
              const checks::CheckHooks& hooks = {});

}  // namespace dre::cli
