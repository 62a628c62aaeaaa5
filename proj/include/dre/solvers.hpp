#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "dre/envelope.hpp"

namespace dre {

enum class BetaSchedule { None, Convex, StronglyConvex };

struct SolverConfig {
  double gamma = 0.0;
  double lambda = 1.0;  // constant relaxation step, 0 < lambda < 2
  BetaSchedule beta = BetaSchedule::None;
  int max_iter = 20000;
  double tol = 1e-12;  // stop once ‖z - y‖ <= tol (1 + ‖base point‖)
  bool record_dre = true;
  bool record_objectives = true;
  // Additional stop: F(z^k) <= stop_objective (used by bound sweeps that
  // only need the trace down to a target suboptimality).
  double stop_objective = -std::numeric_limits<double>::infinity();
};

struct IterationRecord {
  int k;
  double obj_y;   // F(y^k), +inf when y^k is outside dom g
  double obj_z;   // F(z^k)
  double dre;     // envelope value at the base point
  double znorm;   // ‖z^k - y^k‖
  double elapsed_s;
};

enum class RunStatus { Converged, MaxIter };

struct IterationTrace {
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::MaxIter;
  // Base point of the last record and the prox pair evaluated there. For
  // plain splitting the base point is x^k; for the accelerated variant it
  // is the extrapolated point the proxes were evaluated at.
  Vector x_final, y_final, z_final;
  int iterations() const { return records.empty() ? 0 : records.back().k; }
};

// Called once per record with (k, base point, y^k, z^k).
using StepObserver = std::function<void(int, const Vector&, const Vector&, const Vector&)>;

// Momentum coefficient as a function of the iteration counter.
using BetaFn = std::function<double(int)>;

struct DrsStep {
  Vector y, z, x_next;
};

// One splitting step: y = prox_{gamma f}(x), z = prox_{gamma g}(2y - x),
// x_next = x + lambda (z - y).
DrsStep drs_step(const CompositeProblem& prob, double gamma, double lambda, const Vector& x);

IterationTrace run_drs(const CompositeProblem& prob, const SolverConfig& config,
                       const Vector& x0, const StepObserver& observer = {});

// Accelerated variant: proxes are evaluated at u^k, then
// x^{k+1} = u^k + lambda (z^k - y^k), u^{k+1} = x^{k+1} + beta_k (x^{k+1} - x^k).
IterationTrace run_fast_drs(const CompositeProblem& prob, const SolverConfig& config,
                            const Vector& x0, const StepObserver& observer = {});

// Same loop with a caller-supplied momentum coefficient.
IterationTrace run_fast_drs_with(const CompositeProblem& prob, const SolverConfig& config,
                                 const Vector& x0, const BetaFn& beta,
                                 const StepObserver& observer = {});

// lambda = (1 - gamma L_f)/(1 + gamma L_f), the step that turns the x-update
// into a gradient step of length 1/L_h on the preconditioned envelope.
double theorem_stepsize(double gamma, double l_f);

// gamma minimizing the sublinear rate constant (1 + gamma L_f)/(gamma (1 - gamma L_f)).
double optimal_gamma(double l_f);

// F(z) gap bound dist0^2 / (2 gamma lambda k), k >= 1.
double bound_sublinear(int k, double gamma, double lambda, double dist0);

// Accelerated gap bound 2 dist0^2 / (gamma lambda (k+2)^2), k >= 0.
double bound_fast(int k, double gamma, double lambda, double dist0);

// ‖y^k - x_star‖^2 bound (d_max/d_min) (1 - 2 lambda mu_h l_h/(mu_h + l_h))^k dist0^2.
double bound_linear_iterates(int k, const EnvelopeConstants& c, double lambda, double dist0);

// Accelerated strongly convex gap bound (l_h/d_min) (1 - sqrt(mu_h/l_h))^k dist0^2.
double bound_fast_strongly_convex(int k, const EnvelopeConstants& c, double dist0);

// ‖drs_step(x).x_next - (x - lambda D grad F_dre(x))‖ with D applied through a
// factored solve; zero up to round-off for quadratic f and gamma < 1/L_f.
double scaled_gradient_check(const CompositeProblem& prob, double gamma, double lambda,
                             const Vector& x);

}  // namespace dre
