#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dre/problems.hpp"
#include "dre/rng.hpp"

namespace dre::checks {

using GradFn = std::function<Vector(const CompositeProblem&, double, const Vector&)>;

// Measurement guards: bounds are only testable down to the precision the
// compared quantity carries.
inline double gap_guard(double f_star) { return 1e-13 * (1.0 + std::abs(f_star)); }
inline double iterate_guard(double dist0) { return 1e-12 * (1.0 + dist0 * dist0); }

// Central differences with per-coordinate step 1e-6 (1 + ‖x‖_inf).
Vector central_difference_gradient(const std::function<double(const Vector&)>& fn,
                                   const Vector& x);

struct SweepStats {
  long checked = 0;
  long violations = 0;
  double worst = 0.0;  // largest violation margin seen (<= 0 means all good)

  void absorb(const SweepStats& o);
};

// Proposition-style residual sweep: both inequalities of the envelope
// sandwich must hold at random points, slack 1e-8 (1 + |envelope|).
SweepStats sweep_prop1(const CompositeProblem& prob, double gamma, int points,
                       SplitMix64& rng, double scale = 3.0);

// Envelope gradient vs central differences, tolerance tol (1 + ‖grad‖).
// `grad` overrides the analytic gradient (test seam for mutation checks).
SweepStats sweep_dre_gradient_fd(const CompositeProblem& prob, double gamma, int points,
                                 SplitMix64& rng, double tol = 1e-5,
                                 const GradFn& grad = {});

SweepStats sweep_z_nonexpansive(const CompositeProblem& prob, double gamma, int pairs,
                                SplitMix64& rng, double slack = 1e-10);

// ‖x_drs_next - (x - lambda D grad)‖ <= tol_factor (1 + ‖x‖) over random
// (x, lambda in [0, 2]).
SweepStats sweep_scaled_gradient(const CompositeProblem& prob, double gamma, int trials,
                                 SplitMix64& rng, double tol_factor = 1e-10);

// Envelope minimum sits at the fixed point: value match against f_star and
// global lower bound at random points.
SweepStats sweep_envelope_minimum(const CompositeProblem& prob, double gamma,
                          const ReferenceSolution& ref, int points, SplitMix64& rng);

SweepStats sweep_dre_gradient_lipschitz(const CompositeProblem& prob, double gamma,
                                        int pairs, SplitMix64& rng, double slack = 1e-9);

SweepStats sweep_dre_strong_convexity(const CompositeProblem& prob, double gamma,
                                      int pairs, SplitMix64& rng, double slack = 1e-8);

// dre(x) == fbe(P(x)) to tol (1 + |dre|).
SweepStats sweep_dre_fbe_identity(const CompositeProblem& prob, double gamma, int points,
                                  SplitMix64& rng, double tol = 1e-9);

// Prox form vs Moreau form of the envelope value.
SweepStats sweep_dre_two_forms(const CompositeProblem& prob, double gamma, int points,
                               SplitMix64& rng, double tol = 1e-9);

struct BoundSweep {
  long checked = 0;
  long violations = 0;
  double worst_margin = 0.0;  // max (observed - bound)
  int k_target = -1;          // first k with relative suboptimality <= target
  IterationTrace trace;
};

// Runs the plain method from x0 = 0 with the theorem stepsize and checks
// F(z^k) - F_star <= dist0^2 / (2 gamma lambda max(k-1, 1)) until the
// relative suboptimality target is crossed.
BoundSweep sublinear_bound_sweep(const CompositeProblem& prob, const ReferenceSolution& ref,
                                double gamma, int max_iter, double target_rel = 1e-9);

// Accelerated run, convex schedule: F(z^k) - F_star <= 2 dist0^2 / (gamma lambda (k+2)^2).
BoundSweep fast_bound_sweep(const CompositeProblem& prob, const ReferenceSolution& ref,
                                double gamma, int max_iter, double target_rel = 1e-9);

// Plain run over a fixed iteration budget: ‖y^k - x_star‖^2 against the
// linear contraction bound.
BoundSweep linear_iterate_bound_sweep(const CompositeProblem& prob, const ReferenceSolution& ref,
                                double gamma, int iters);

// Accelerated run, strongly convex schedule, objective gap against the
// geometric bound.
BoundSweep fast_geometric_bound_sweep(const CompositeProblem& prob, const ReferenceSolution& ref,
                                double gamma, int iters);

long dre_descent_violations(const IterationTrace& trace, double per_step_slack = 1e-10);

// First recorded k with |F(z^k) - f_star| / (1 + |f_star|) <= target, or -1.
int first_crossing(const IterationTrace& trace, double f_star, double target_rel);

// Exact optimum of a small box QP by enumerating all 3^n active-set patterns.
double box_qp_enumeration_optimum(const BoxQpInstance& inst);

enum class Level { Fast, Full };

struct CheckHooks {
  GradFn dre_gradient_override;  // lets tests inject a broken gradient
};

struct CheckResult {
  std::string name;
  long checked = 0;
  long violations = 0;
  double worst = 0.0;
  double seconds = 0.0;
  bool passed() const { return violations == 0; }
};

// Runs every invariant suite at the given size level, printing one line per
// suite. Returns the per-suite results; exit code semantics live in the cli.
std::vector<CheckResult> run_check_suites(Level level, std::ostream& out,
                                          const CheckHooks& hooks = {});

}  // namespace dre::checks
