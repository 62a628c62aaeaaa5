#include "dre/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace dre {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate_config(const SolverConfig& config) {
  if (config.gamma <= 0.0) throw BadParameters("solver: gamma must be positive");
  if (!(config.lambda > 0.0) || !(config.lambda < 2.0)) {
    throw LambdaOutOfRange("solver: constant lambda must lie in (0, 2)");
  }
  if (config.max_iter < 1) throw BadParameters("solver: max_iter must be >= 1");
  if (!(config.tol > 0.0)) throw BadParameters("solver: tol must be positive");
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Envelope value from an already computed prox pair.
double dre_from_pair(const CompositeProblem& prob, double gamma, const Vector& base,
                     const Vector& y, const Vector& z) {
  const Vector zy = z - y;
  return prob.f_value(y) + prob.g_value(z) + zy.squaredNorm() / (2.0 * gamma) +
         zy.dot(base - y) / gamma;
}

// Shared driver. With accelerate == false the base point is x^k itself.
IterationTrace run_loop(const CompositeProblem& prob, const SolverConfig& config,
                        const Vector& x0, bool accelerate, const BetaFn& beta,
                        const StepObserver& observer) {
  validate_config(config);
  if (x0.size() != prob.dim()) throw DimensionMismatch("solver: x0 dimension mismatch");

  const double gamma = config.gamma;
  const double lambda = config.lambda;
  const auto start = std::chrono::steady_clock::now();

  Vector x = x0;
  Vector u = x0;  // base point when accelerating
  IterationTrace trace;

  for (int k = 0;; ++k) {
    const Vector& base = accelerate ? u : x;
    Vector y = prob.f_prox(gamma, base);
    Vector z = prob.g_prox(gamma, 2.0 * y - base);
    const double znorm = (z - y).norm();

    IterationRecord rec;
    rec.k = k;
    rec.obj_y = config.record_objectives ? prob.objective(y) : kNan;
    rec.obj_z = config.record_objectives ? prob.objective(z) : kNan;
    rec.dre = config.record_dre ? dre_from_pair(prob, gamma, base, y, z) : kNan;
    rec.znorm = znorm;
    rec.elapsed_s = elapsed_seconds(start);
    trace.records.push_back(rec);
    if (observer) observer(k, base, y, z);

    const bool done = znorm <= config.tol * (1.0 + base.norm()) ||
                      (config.record_objectives && rec.obj_z <= config.stop_objective);
    if (done || k == config.max_iter) {
      trace.status = done ? RunStatus::Converged : RunStatus::MaxIter;
      trace.x_final = base;
      trace.y_final = std::move(y);
      trace.z_final = std::move(z);
      return trace;
    }

    if (!accelerate) {
      x += lambda * (z - y);
    } else {
      Vector x_next = u + lambda * (z - y);
      u = x_next + beta(k) * (x_next - x);
      x = std::move(x_next);
    }
  }
}

}  // namespace

DrsStep drs_step(const CompositeProblem& prob, double gamma, double lambda, const Vector& x) {
  if (gamma <= 0.0) throw BadParameters("drs_step: gamma must be positive");
  if (lambda < 0.0 || lambda > 2.0) {
    throw LambdaOutOfRange("drs_step: lambda must lie in [0, 2]");
  }
  if (x.size() != prob.dim()) throw DimensionMismatch("drs_step: x dimension mismatch");
  DrsStep s;
  s.y = prob.f_prox(gamma, x);
  s.z = prob.g_prox(gamma, 2.0 * s.y - x);
  s.x_next = x + lambda * (s.z - s.y);
  return s;
}

IterationTrace run_drs(const CompositeProblem& prob, const SolverConfig& config,
                       const Vector& x0, const StepObserver& observer) {
  return run_loop(prob, config, x0, /*accelerate=*/false, {}, observer);
}

IterationTrace run_fast_drs_with(const CompositeProblem& prob, const SolverConfig& config,
                                 const Vector& x0, const BetaFn& beta,
                                 const StepObserver& observer) {
  if (!beta) throw BadParameters("run_fast_drs_with: beta function required");
  return run_loop(prob, config, x0, /*accelerate=*/true, beta, observer);
}

IterationTrace run_fast_drs(const CompositeProblem& prob, const SolverConfig& config,
                            const Vector& x0, const StepObserver& observer) {
  switch (config.beta) {
    case BetaSchedule::None:
      throw BadParameters("run_fast_drs: a momentum schedule is required");
    case BetaSchedule::Convex:
      return run_fast_drs_with(
          prob, config, x0,
          [](int k) { return k == 0 ? 0.0 : double(k - 1) / double(k + 2); }, observer);
    case BetaSchedule::StronglyConvex: {
      if (prob.mu_f() <= 0.0) {
        throw StronglyConvexRequired("run_fast_drs: strongly convex schedule needs mu_f > 0");
      }
      const EnvelopeConstants c = envelope_constants(prob, config.gamma);
      const double r = std::sqrt(c.mu_h / c.l_h);
      const double beta = (1.0 - r) / (1.0 + r);
      return run_fast_drs_with(prob, config, x0, [beta](int) { return beta; }, observer);
    }
  }
  throw Error("run_fast_drs: unreachable");
}

double theorem_stepsize(double gamma, double l_f) {
  if (gamma <= 0.0 || gamma * l_f >= 1.0) {
    throw GammaTooLarge("theorem_stepsize: requires 0 < gamma < 1/L_f");
  }
  return (1.0 - gamma * l_f) / (1.0 + gamma * l_f);
}

double optimal_gamma(double l_f) {
  if (l_f <= 0.0) throw NonpositiveLipschitz("optimal_gamma: L_f must be positive");
  return (std::sqrt(2.0) - 1.0) / l_f;
}

double bound_sublinear(int k, double gamma, double lambda, double dist0) {
  if (k < 1) throw BadParameters("bound_sublinear: k must be >= 1");
  return dist0 * dist0 / (2.0 * gamma * lambda * k);
}

double bound_fast(int k, double gamma, double lambda, double dist0) {
  if (k < 0) throw BadParameters("bound_fast: k must be >= 0");
  const double kk = double(k) + 2.0;
  return 2.0 * dist0 * dist0 / (gamma * lambda * kk * kk);
}

double bound_linear_iterates(int k, const EnvelopeConstants& c, double lambda, double dist0) {
  if (c.mu_h <= 0.0) {
    throw StronglyConvexRequired("bound_linear_iterates: requires mu_h > 0");
  }
  if (!(lambda > 0.0) || lambda > 2.0 / (c.l_h + c.mu_h)) {
    throw LambdaOutOfRange("bound_linear_iterates: lambda outside (0, 2/(L_h + mu_h)]");
  }
  if (k < 0) throw BadParameters("bound_linear_iterates: k must be >= 0");
  const double factor = 1.0 - 2.0 * lambda * c.mu_h * c.l_h / (c.mu_h + c.l_h);
  return (c.d_max / c.d_min) * std::pow(factor, k) * dist0 * dist0;
}

double bound_fast_strongly_convex(int k, const EnvelopeConstants& c, double dist0) {
  if (c.mu_h <= 0.0) {
    throw StronglyConvexRequired("bound_fast_strongly_convex: requires mu_h > 0");
  }
  if (k < 0) throw BadParameters("bound_fast_strongly_convex: k must be >= 0");
  const double factor = 1.0 - std::sqrt(c.mu_h / c.l_h);
  return (c.l_h / c.d_min) * std::pow(factor, k) * dist0 * dist0;
}

double scaled_gradient_check(const CompositeProblem& prob, double gamma, double lambda,
                             const Vector& x) {
  if (gamma <= 0.0 || gamma * prob.l_f() >= 1.0) {
    throw GammaTooLarge("scaled_gradient_check: requires 0 < gamma < 1/L_f");
  }
  const DrsStep step = drs_step(prob, gamma, lambda, x);
  const Vector grad = dre_gradient(prob, gamma, x);
  const Vector alt = x - lambda * prob.apply_scaling(gamma, grad);
  return (step.x_next - alt).norm();
}

}  // namespace dre
