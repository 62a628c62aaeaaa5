#include "dre/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <future>
#include <memory>
#include <ostream>
#include <sstream>
#include <utility>

namespace dre::cli {

namespace {

std::string family_name(ExperimentSpec::Family f) {
  return f == ExperimentSpec::Family::BoxQp ? "boxqp" : "l1ls";
}

std::string solver_name(ExperimentSpec::Solver s) {
  return s == ExperimentSpec::Solver::Drs ? "drs" : "fdrs";
}

std::unique_ptr<CompositeProblem> build_problem(const ExperimentSpec& spec) {
  if (spec.family == ExperimentSpec::Family::BoxQp) {
    return std::make_unique<CompositeProblem>(
        gen_box_qp(spec.n, spec.seed, spec.cond, spec.box_width).problem());
  }
  return std::make_unique<CompositeProblem>(
      gen_sparse_ls(spec.m, spec.n, spec.seed, spec.rho, spec.nnz).problem());
}

struct PreparedRun {
  double gamma = 0.0;
  double lambda = 0.0;
  BetaSchedule beta = BetaSchedule::None;
  ReferenceSolution ref;
  IterationTrace trace;
  double dist0 = 0.0;
  std::string bound_rule;
  std::vector<double> bounds;  // one per record
  long bound_violations = 0;
  std::array<int, 9> decades{};  // first k with rel subopt <= 1e-(d+1)
};

PreparedRun execute(const CompositeProblem& prob, const ExperimentSpec& spec, double gamma) {
  PreparedRun run;
  run.gamma = gamma;
  run.lambda =
      spec.lambda_theorem ? theorem_stepsize(gamma, prob.l_f()) : spec.lambda_value;
  run.ref = reference_solve(prob, gamma);
  run.dist0 = run.ref.x_tilde.norm();  // runs start from the origin

  SolverConfig config;
  config.gamma = gamma;
  config.lambda = run.lambda;
  config.max_iter = spec.max_iter;
  config.tol = spec.tol;

  std::vector<double> ydist2;
  const StepObserver observer = [&](int, const Vector&, const Vector& y, const Vector&) {
    ydist2.push_back((y - run.ref.x_star).squaredNorm());
  };

  const Vector x0 = Vector::Zero(prob.dim());
  if (spec.solver == ExperimentSpec::Solver::Fdrs) {
    config.beta =
        prob.mu_f() > 0.0 ? BetaSchedule::StronglyConvex : BetaSchedule::Convex;
    run.trace = run_fast_drs(prob, config, x0, observer);
  } else {
    run.trace = run_drs(prob, config, x0, observer);
  }
  run.beta = config.beta;

  // Applicable theorem bound for the bound column of the trace.
  const EnvelopeConstants c = envelope_constants(prob, gamma);
  const bool linear_rate_valid =
      c.mu_h > 0.0 && run.lambda > 0.0 && run.lambda <= 2.0 / (c.l_h + c.mu_h);
  run.bounds.reserve(run.trace.records.size());
  if (spec.solver == ExperimentSpec::Solver::Drs) {
    if (linear_rate_valid) {
      run.bound_rule = "linear_iterates";
      for (const auto& rec : run.trace.records) {
        run.bounds.push_back(bound_linear_iterates(rec.k, c, run.lambda, run.dist0));
      }
      const double guard = checks::iterate_guard(run.dist0);
      for (std::size_t i = 0; i < run.bounds.size(); ++i) {
        if (ydist2[i] > run.bounds[i] + guard) ++run.bound_violations;
      }
    } else {
      run.bound_rule = "sublinear";
      for (const auto& rec : run.trace.records) {
        run.bounds.push_back(
            bound_sublinear(std::max(rec.k - 1, 1), gamma, run.lambda, run.dist0));
      }
    }
  } else {
    const bool strong = run.beta == BetaSchedule::StronglyConvex;
    run.bound_rule = strong ? "fast_strongly_convex" : "fast";
    for (const auto& rec : run.trace.records) {
      run.bounds.push_back(strong
                               ? bound_fast_strongly_convex(rec.k, c, run.dist0)
                               : bound_fast(rec.k, gamma, run.lambda, run.dist0));
    }
  }
  if (run.bound_rule != "linear_iterates") {
    const double guard = checks::gap_guard(run.ref.f_star);
    for (std::size_t i = 0; i < run.bounds.size(); ++i) {
      if (run.trace.records[i].obj_z - run.ref.f_star > run.bounds[i] + guard) {
        ++run.bound_violations;
      }
    }
  }

  run.decades.fill(-1);
  const double denom = 1.0 + std::abs(run.ref.f_star);
  for (const auto& rec : run.trace.records) {
    const double rel = std::abs(rec.obj_z - run.ref.f_star) / denom;
    for (int d = 0; d < 9; ++d) {
      if (run.decades[d] < 0 && rel <= std::pow(10.0, -(d + 1))) run.decades[d] = rec.k;
    }
  }
  return run;
}

std::string build_csv(const PreparedRun& run) {
  std::ostringstream os;
  os << "k,obj_y,obj_z,dre,znorm,rel_subopt,bound,elapsed_s\n";
  const double denom = 1.0 + std::abs(run.ref.f_star);
  for (std::size_t i = 0; i < run.trace.records.size(); ++i) {
    const auto& rec = run.trace.records[i];
    const double rel = std::abs(rec.obj_z - run.ref.f_star) / denom;
    os << rec.k << ',' << format_double(rec.obj_y) << ',' << format_double(rec.obj_z) << ','
       << format_double(rec.dre) << ',' << format_double(rec.znorm) << ','
       << format_double(rel) << ',' << format_double(run.bounds[i]) << ','
       << format_double(rec.elapsed_s) << '\n';
  }
  return os.str();
}

std::string build_summary(const ExperimentSpec& spec, const PreparedRun& run) {
  std::ostringstream os;
  os << "status: "
     << (run.trace.status == RunStatus::Converged ? "converged" : "max_iter") << '\n';
  os << "family: " << family_name(spec.family) << '\n';
  os << "solver: " << solver_name(spec.solver) << '\n';
  os << "n: " << spec.n << '\n';
  if (spec.family == ExperimentSpec::Family::L1Ls) os << "m: " << spec.m << '\n';
  os << "seed: " << spec.seed << '\n';
  os << "gamma: " << format_double(run.gamma) << '\n';
  os << "lambda: " << format_double(run.lambda) << '\n';
  os << "f_star: " << format_double(run.ref.f_star) << '\n';
  os << "dist0: " << format_double(run.dist0) << '\n';
  os << "iterations: " << run.trace.iterations() << '\n';
  os << "final_residual: "
     << format_double(run.trace.records.back().znorm / (1.0 + run.trace.x_final.norm()))
     << '\n';
  os << "bound_rule: " << run.bound_rule << '\n';
  os << "bound_violations: " << run.bound_violations << '\n';
  for (int d = 0; d < 9; ++d) {
    os << "iters_to_1e-0" << (d + 1) << ": " << run.decades[d] << '\n';
  }
  os << "wall_time_s: " << format_double(run.trace.records.back().elapsed_s) << '\n';
  return os.str();
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path);
  if (!f) {
    err << "cannot open output path: " << path << '\n';
    return false;
  }
  f << content;
  if (!f.good()) {
    err << "write failed: " << path << '\n';
    return false;
  }
  return true;
}

}  // namespace

std::string validate_spec(const ExperimentSpec& spec) {
  if (spec.n < 1) return "n must be >= 1";
  if (spec.family == ExperimentSpec::Family::BoxQp) {
    if (spec.cond < 1.0) return "cond must be >= 1";
    if (!(spec.box_width > 0.0)) return "box width must be positive";
  } else {
    if (spec.nnz < 1 || spec.nnz > spec.m || spec.m >= spec.n) {
      return "l1ls requires 1 <= nnz <= m < n";
    }
    if (!(spec.rho > 0.0)) return "rho must be positive";
  }
  if (!spec.gamma_star && !(spec.gamma_fraction > 0.0 && spec.gamma_fraction < 1.0)) {
    return "gamma fraction must lie in (0, 1)";
  }
  if (!spec.lambda_theorem && !(spec.lambda_value > 0.0 && spec.lambda_value < 2.0)) {
    return "lambda must lie in (0, 2)";
  }
  if (spec.max_iter < 1) return "max-iter must be >= 1";
  if (!(spec.tol > 0.0)) return "tol must be positive";
  return {};
}

int cmd_bench(const ExperimentSpec& spec, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  const std::string msg = validate_spec(spec);
  if (!msg.empty()) {
    err << "bench: invalid spec: " << msg << '\n';
    return 2;
  }
  try {
    const auto prob = build_problem(spec);
    const double gamma = spec.gamma_star ? optimal_gamma(prob->l_f())
                                         : spec.gamma_fraction / prob->l_f();
    const PreparedRun run = execute(*prob, spec, gamma);
    if (!write_file(out_path, build_csv(run), err)) return 2;
    const std::string summary = build_summary(spec, run);
    if (!write_file(out_path + ".summary.txt", summary, err)) return 2;
    out << summary;
    return run.trace.status == RunStatus::Converged ? 0 : 3;
  } catch (const NoConvergence& e) {
    err << "bench: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "bench: invalid spec: " << e.what() << '\n';
    return 2;
  }
}

int cmd_gamma_sweep(const ExperimentSpec& spec, const std::vector<double>& fractions,
                    const std::string& out_prefix, std::ostream& out, std::ostream& err) {
  const std::string msg = validate_spec(spec);
  if (!msg.empty()) {
    err << "sweep: invalid spec: " << msg << '\n';
    return 2;
  }
  for (double f : fractions) {
    if (!(f > 0.0 && f < 1.0)) {
      err << "sweep: gamma fractions must lie in (0, 1)\n";
      return 2;
    }
  }
  try {
    const auto prob = build_problem(spec);
    const double l_f = prob->l_f();

    struct Entry {
      double gamma;
      std::string label;
    };
    std::vector<Entry> entries;
    for (double f : fractions) entries.push_back({f / l_f, format_double_short(f)});
    entries.push_back({optimal_gamma(l_f), "star"});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.gamma < b.gamma; });

    // Per-gamma solves share the immutable problem; assembly stays serial.
    std::vector<std::future<PreparedRun>> futures;
    for (const auto& e : entries) {
      futures.push_back(std::async(std::launch::async, [&prob, &spec, gamma = e.gamma] {
        return execute(*prob, spec, gamma);
      }));
    }

    bool all_converged = true;
    std::ostringstream table;
    table << "gamma label status iterations";
    for (int d = 1; d <= 9; ++d) table << " iters_to_1e-0" << d;
    table << '\n';
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const PreparedRun run = futures[i].get();
      const std::string csv_path = out_prefix + "_gamma_" + entries[i].label + ".csv";
      if (!write_file(csv_path, build_csv(run), err)) return 2;
      all_converged = all_converged && run.trace.status == RunStatus::Converged;
      table << format_double_short(run.gamma) << ' ' << entries[i].label << ' '
            << (run.trace.status == RunStatus::Converged ? "converged" : "max_iter") << ' '
            << run.trace.iterations();
      for (int d = 0; d < 9; ++d) table << ' ' << run.decades[d];
      table << '\n';
    }
    if (!write_file(out_prefix + "_sweep.txt", table.str(), err)) return 2;
    out << table.str();
    return all_converged ? 0 : 3;
  } catch (const NoConvergence& e) {
    err << "sweep: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "sweep: invalid spec: " << e.what() << '\n';
    return 2;
  }
}

int cmd_check(checks::Level level, std::ostream& out, const checks::CheckHooks& hooks) {
  const auto results = checks::run_check_suites(level, out, hooks);
  for (const auto& r : results) {
    if (!r.passed()) {
      out << "FAILED " << r.name << " (" << r.violations << " violations)\n";
      return 1;
    }
  }
  out << "all " << results.size() << " suites passed\n";
  return 0;
}

}  // namespace dre::cli
