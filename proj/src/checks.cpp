#include "dre/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>
#include <sstream>

namespace dre::checks {

namespace {

Vector random_point(SplitMix64& rng, Index n, double scale) {
  Vector x(n);
  for (Index i = 0; i < n; ++i) x(i) = scale * rng.next_gaussian();
  return x;
}

}  // namespace

void SweepStats::absorb(const SweepStats& o) {
  checked += o.checked;
  violations += o.violations;
  worst = std::max(worst, o.worst);
}

Vector central_difference_gradient(const std::function<double(const Vector&)>& fn,
                                   const Vector& x) {
  const double h = 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>());
  Vector g(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double up = fn(probe);
    probe(i) = x(i) - h;
    const double down = fn(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

SweepStats sweep_prop1(const CompositeProblem& prob, double gamma, int points,
                       SplitMix64& rng, double scale) {
  SweepStats s;
  for (int i = 0; i < points; ++i) {
    const Vector x = random_point(rng, prob.dim(), scale);
    const auto res = prop1_residuals(prob, gamma, x);
    const double dre = dre_value(prob, gamma, x);
    const double tol = 1e-8 * (1.0 + std::abs(dre));
    const double margin = -std::min(res.r1, res.r2) - tol;
    ++s.checked;
    if (margin > 0.0) ++s.violations;
    s.worst = std::max(s.worst, margin);
  }
  return s;
}

SweepStats sweep_dre_gradient_fd(const CompositeProblem& prob, double gamma, int points,
                                 SplitMix64& rng, double tol, const GradFn& grad) {
  SweepStats s;
  for (int i = 0; i < points; ++i) {
    const Vector x = random_point(rng, prob.dim(), 3.0);
    const Vector g_an = grad ? grad(prob, gamma, x) : dre_gradient(prob, gamma, x);
    const Vector g_fd = central_difference_gradient(
        [&](const Vector& v) { return dre_value(prob, gamma, v); }, x);
    const double err = (g_an - g_fd).norm();
    const double allowed = tol * (1.0 + g_an.norm());
    ++s.checked;
    if (err > allowed) ++s.violations;
    s.worst = std::max(s.worst, err - allowed);
  }
  return s;
}

SweepStats sweep_z_nonexpansive(const CompositeProblem& prob, double gamma, int pairs,
                                SplitMix64& rng, double slack) {
  SweepStats s;
  for (int i = 0; i < pairs; ++i) {
    const Vector x1 = random_point(rng, prob.dim(), 3.0);
    const Vector x2 = random_point(rng, prob.dim(), 3.0);
    const double lhs = (z_map(prob, gamma, x1) - z_map(prob, gamma, x2)).norm();
    const double rhs = (x1 - x2).norm() + slack;
    ++s.checked;
    if (lhs > rhs) ++s.violations;
    s.worst = std::max(s.worst, lhs - rhs);
  }
  return s;
}

SweepStats sweep_scaled_gradient(const CompositeProblem& prob, double gamma, int trials,
                                 SplitMix64& rng, double tol_factor) {
  SweepStats s;
  for (int i = 0; i < trials; ++i) {
    const Vector x = random_point(rng, prob.dim(), 3.0);
    const double lambda = 2.0 * rng.next_uniform();
    const double r = scaled_gradient_check(prob, gamma, lambda, x);
    const double allowed = tol_factor * (1.0 + x.norm());
    ++s.checked;
    if (r > allowed) ++s.violations;
    s.worst = std::max(s.worst, r - allowed);
  }
  return s;
}

SweepStats sweep_envelope_minimum(const CompositeProblem& prob, double gamma,
                          const ReferenceSolution& ref, int points, SplitMix64& rng) {
  SweepStats s;
  const double dre_tilde = dre_value(prob, gamma, ref.x_tilde);
  const double value_err = std::abs(dre_tilde - ref.f_star) - 1e-8 * (1.0 + std::abs(ref.f_star));
  ++s.checked;
  if (value_err > 0.0) ++s.violations;
  s.worst = std::max(s.worst, value_err);
  for (int i = 0; i < points; ++i) {
    const Vector x = random_point(rng, prob.dim(), 3.0);
    const double margin = dre_tilde - 1e-8 - dre_value(prob, gamma, x);
    ++s.checked;
    if (margin > 0.0) ++s.violations;
    s.worst = std::max(s.worst, margin);
  }
  return s;
}

SweepStats sweep_dre_gradient_lipschitz(const CompositeProblem& prob, double gamma,
                                        int pairs, SplitMix64& rng, double slack) {
  SweepStats s;
  const EnvelopeConstants c = envelope_constants(prob, gamma);
  for (int i = 0; i < pairs; ++i) {
    const Vector x1 = random_point(rng, prob.dim(), 3.0);
    const Vector x2 = random_point(rng, prob.dim(), 3.0);
    const double lhs = (dre_gradient(prob, gamma, x1) - dre_gradient(prob, gamma, x2)).norm();
    const double rhs = c.l_dre * (x1 - x2).norm() + slack;
    ++s.checked;
    if (lhs > rhs) ++s.violations;
    s.worst = std::max(s.worst, lhs - rhs);
  }
  return s;
}

SweepStats sweep_dre_strong_convexity(const CompositeProblem& prob, double gamma,
                                      int pairs, SplitMix64& rng, double slack) {
  SweepStats s;
  const EnvelopeConstants c = envelope_constants(prob, gamma);
  for (int i = 0; i < pairs; ++i) {
    const Vector x1 = random_point(rng, prob.dim(), 3.0);
    const Vector x2 = random_point(rng, prob.dim(), 3.0);
    const double lhs = dre_value(prob, gamma, x2);
    const double rhs = dre_value(prob, gamma, x1) +
                       dre_gradient(prob, gamma, x1).dot(x2 - x1) +
                       0.5 * c.mu_dre * (x2 - x1).squaredNorm() - slack;
    ++s.checked;
    if (lhs < rhs) ++s.violations;
    s.worst = std::max(s.worst, rhs - lhs);
  }
  return s;
}

SweepStats sweep_dre_fbe_identity(const CompositeProblem& prob, double gamma, int points,
                                  SplitMix64& rng, double tol) {
  SweepStats s;
  for (int i = 0; i < points; ++i) {
    const Vector x = random_point(rng, prob.dim(), 3.0);
    const double dre = dre_value(prob, gamma, x);
    const double fbe = fbe_value(prob, gamma, p_map(prob, gamma, x));
    const double err = std::abs(dre - fbe) - tol * (1.0 + std::abs(dre));
    ++s.checked;
    if (err > 0.0) ++s.violations;
    s.worst = std::max(s.worst, err);
  }
  return s;
}

SweepStats sweep_dre_two_forms(const CompositeProblem& prob, double gamma, int points,
                               SplitMix64& rng, double tol) {
  SweepStats s;
  for (int i = 0; i < points; ++i) {
    const Vector x = random_point(rng, prob.dim(), 3.0);
    const double primary = dre_value(prob, gamma, x);
    const double alt = dre_value_moreau(prob, gamma, x);
    const double err = std::abs(primary - alt) - tol * (1.0 + std::abs(primary));
    ++s.checked;
    if (err > 0.0) ++s.violations;
    s.worst = std::max(s.worst, err);
  }
  return s;
}

namespace {

BoundSweep gap_bound_sweep(const CompositeProblem& prob, const ReferenceSolution& ref,
                           SolverConfig config, bool accelerated,
                           const std::function<double(int)>& bound_at,
                           double target_rel) {
  if (target_rel > 0.0) {
    // Run a whisker past the crossing so the first-crossing index is in the trace.
    config.stop_objective =
        ref.f_star + 0.25 * target_rel * (1.0 + std::abs(ref.f_star));
  }
  const Vector x0 = Vector::Zero(prob.dim());
  BoundSweep out;
  out.trace = accelerated ? run_fast_drs(prob, config, x0) : run_drs(prob, config, x0);
  out.k_target = first_crossing(out.trace, ref.f_star, target_rel);
  const int last = out.k_target >= 0 ? out.k_target : out.trace.records.back().k;
  const double guard = gap_guard(ref.f_star);
  for (const auto& rec : out.trace.records) {
    if (rec.k > last) break;
    const double gap = rec.obj_z - ref.f_star;
    const double bound = bound_at(rec.k);
    ++out.checked;
    if (gap > bound + guard) ++out.violations;
    out.worst_margin = std::max(out.worst_margin, gap - bound);
  }
  return out;
}

}  // namespace

BoundSweep sublinear_bound_sweep(const CompositeProblem& prob, const ReferenceSolution& ref,
                                double gamma, int max_iter, double target_rel) {
  SolverConfig config;
  config.gamma = gamma;
  config.lambda = theorem_stepsize(gamma, prob.l_f());
  config.max_iter = max_iter;
  config.tol = 1e-300;
  const double dist0 = ref.x_tilde.norm();
  const double lambda = config.lambda;
  return gap_bound_sweep(
      prob, ref, config, /*accelerated=*/false,
      [=](int k) { return bound_sublinear(std::max(k - 1, 1), gamma, lambda, dist0); },
      target_rel);
}

BoundSweep fast_bound_sweep(const CompositeProblem& prob, const ReferenceSolution& ref,
                                double gamma, int max_iter, double target_rel) {
  SolverConfig config;
  config.gamma = gamma;
  config.lambda = theorem_stepsize(gamma, prob.l_f());
  config.beta = BetaSchedule::Convex;
  config.max_iter = max_iter;
  config.tol = 1e-300;
  const double dist0 = ref.x_tilde.norm();
  const double lambda = config.lambda;
  return gap_bound_sweep(
      prob, ref, config, /*accelerated=*/true,
      [=](int k) { return bound_fast(k, gamma, lambda, dist0); }, target_rel);
}

BoundSweep linear_iterate_bound_sweep(const CompositeProblem& prob, const ReferenceSolution& ref,
                                double gamma, int iters) {
  const EnvelopeConstants c = envelope_constants(prob, gamma);
  SolverConfig config;
  config.gamma = gamma;
  config.lambda = theorem_stepsize(gamma, prob.l_f());
  config.max_iter = iters;
  config.tol = 1e-300;
  config.record_objectives = false;
  config.record_dre = false;
  const double dist0 = ref.x_tilde.norm();
  const double guard = iterate_guard(dist0);

  BoundSweep out;
  const Vector x0 = Vector::Zero(prob.dim());
  out.trace = run_drs(prob, config, x0,
                      [&](int k, const Vector&, const Vector& y, const Vector&) {
                        const double dist = (y - ref.x_star).squaredNorm();
                        const double bound =
                            bound_linear_iterates(k, c, config.lambda, dist0);
                        ++out.checked;
                        if (dist > bound + guard) ++out.violations;
                        out.worst_margin = std::max(out.worst_margin, dist - bound);
                      });
  return out;
}

BoundSweep fast_geometric_bound_sweep(const CompositeProblem& prob, const ReferenceSolution& ref,
                                double gamma, int iters) {
  const EnvelopeConstants c = envelope_constants(prob, gamma);
  SolverConfig config;
  config.gamma = gamma;
  config.lambda = theorem_stepsize(gamma, prob.l_f());
  config.beta = BetaSchedule::StronglyConvex;
  config.max_iter = iters;
  config.tol = 1e-300;
  const double dist0 = ref.x_tilde.norm();
  return gap_bound_sweep(
      prob, ref, config, /*accelerated=*/true,
      [=](int k) { return bound_fast_strongly_convex(k, c, dist0); },
      /*target_rel=*/-1.0);  // unreachable target: check the whole budget
}

long dre_descent_violations(const IterationTrace& trace, double per_step_slack) {
  long violations = 0;
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    if (trace.records[i].dre > trace.records[i - 1].dre + per_step_slack) ++violations;
  }
  return violations;
}

int first_crossing(const IterationTrace& trace, double f_star, double target_rel) {
  const double denom = 1.0 + std::abs(f_star);
  for (const auto& rec : trace.records) {
    if (std::abs(rec.obj_z - f_star) / denom <= target_rel) return rec.k;
  }
  return -1;
}

double box_qp_enumeration_optimum(const BoxQpInstance& inst) {
  const Index n = inst.q_vec.size();
  if (n > 12) throw BadParameters("box_qp_enumeration_optimum: n too large to enumerate");
  const Matrix& q_mat = inst.q_mat;
  const Vector& q_vec = inst.q_vec;
  const double feas_tol =
      1e-10 * (1.0 + (inst.upper - inst.lower).lpNorm<Eigen::Infinity>());

  long patterns = 1;
  for (Index i = 0; i < n; ++i) patterns *= 3;

  double best = kInfinity;
  std::vector<int> code(n);
  for (long p = 0; p < patterns; ++p) {
    long rem = p;
    for (Index i = 0; i < n; ++i) {
      code[i] = int(rem % 3);  // 0 lower, 1 free, 2 upper
      rem /= 3;
    }
    std::vector<Index> free;
    Vector x(n);
    for (Index i = 0; i < n; ++i) {
      if (code[i] == 0) {
        x(i) = inst.lower(i);
      } else if (code[i] == 2) {
        x(i) = inst.upper(i);
      } else {
        free.push_back(i);
      }
    }
    if (!free.empty()) {
      const Index nf = Index(free.size());
      Matrix qff(nf, nf);
      Vector rhs(nf);
      for (Index a = 0; a < nf; ++a) {
        rhs(a) = -q_vec(free[a]);
        for (Index b = 0; b < nf; ++b) qff(a, b) = q_mat(free[a], free[b]);
        for (Index i = 0; i < n; ++i) {
          if (code[i] != 1) rhs(a) -= q_mat(free[a], i) * x(i);
        }
      }
      Eigen::LLT<Matrix> llt(qff);
      if (llt.info() != Eigen::Success) continue;
      const Vector xf = llt.solve(rhs);
      bool feasible = true;
      for (Index a = 0; a < nf; ++a) {
        if (xf(a) < inst.lower(free[a]) - feas_tol || xf(a) > inst.upper(free[a]) + feas_tol) {
          feasible = false;
          break;
        }
        x(free[a]) = xf(a);
      }
      if (!feasible) continue;
    }
    best = std::min(best, 0.5 * x.dot(q_mat * x) + q_vec.dot(x));
  }
  return best;
}

namespace {

struct BoxCase {
  BoxQpInstance inst;
  std::shared_ptr<CompositeProblem> prob;
  double gamma_star;
};

struct LsCase {
  SparseLsInstance inst;
  std::shared_ptr<CompositeProblem> prob;
  double gamma_star;
};

BoxCase make_box_case(Index n, std::uint64_t seed, double cond, double width = 1.0) {
  BoxCase c{gen_box_qp(n, seed, cond, width), nullptr, 0.0};
  c.prob = std::make_shared<CompositeProblem>(c.inst.problem());
  c.gamma_star = optimal_gamma(c.prob->l_f());
  return c;
}

LsCase make_ls_case(Index m, Index n, std::uint64_t seed, double rho, Index nnz) {
  LsCase c{gen_sparse_ls(m, n, seed, rho, nnz), nullptr, 0.0};
  c.prob = std::make_shared<CompositeProblem>(c.inst.problem());
  c.gamma_star = optimal_gamma(c.prob->l_f());
  return c;
}

struct SuiteRunner {
  std::ostream& out;
  std::vector<CheckResult> results;

  template <class Fn>
  void run(const std::string& name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    r.name = name;
    fn(r);
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << (r.passed() ? "PASS" : "FAIL") << ' ' << r.name << " checked=" << r.checked
        << " violations=" << r.violations << " worst=" << format_double(r.worst)
        << " time=" << format_double(r.seconds) << "s\n";
    results.push_back(std::move(r));
  }
};

void add_stats(CheckResult& r, const SweepStats& s) {
  r.checked += s.checked;
  r.violations += s.violations;
  r.worst = std::max(r.worst, s.worst);
}

}  // namespace

std::vector<CheckResult> run_check_suites(Level level, std::ostream& out,
                                          const CheckHooks& hooks) {
  const bool full = level == Level::Full;

  // Instance pools. Sizes follow the experiment families; the fast level
  // shrinks everything so the whole table stays under half a minute.
  std::vector<BoxCase> boxes;
  std::vector<LsCase> lss;
  std::vector<BoxCase> sc_boxes;  // strongly convex pool (moderate condition)
  if (full) {
    for (std::uint64_t s = 1; s <= 10; ++s) boxes.push_back(make_box_case(50, s, 100.0));
    for (std::uint64_t s = 1; s <= 10; ++s) lss.push_back(make_ls_case(20, 100, s, 1.0, 5));
    for (std::uint64_t s = 1; s <= 5; ++s) sc_boxes.push_back(make_box_case(50, s, 10.0));
  } else {
    boxes.push_back(make_box_case(16, 1, 50.0));
    boxes.push_back(make_box_case(16, 2, 1.0));
    for (std::uint64_t s = 1; s <= 2; ++s) lss.push_back(make_ls_case(12, 30, s, 0.7, 3));
    sc_boxes.push_back(make_box_case(16, 3, 10.0));
  }
  const int points = full ? 500 : 150;
  const int fd_points = full ? 50 : 8;
  const int pairs = full ? 200 : 100;
  const int z_pairs = full ? 500 : 150;
  const int sg_trials = full ? 100 : 30;

  // References for the suites that need the solved problem.
  std::vector<ReferenceSolution> box_refs, ls_refs, sc_refs;
  for (const auto& c : boxes) box_refs.push_back(reference_solve(*c.prob, c.gamma_star));
  for (const auto& c : lss) ls_refs.push_back(reference_solve(*c.prob, c.gamma_star));
  const double sc_gamma = 0.002;
  for (const auto& c : sc_boxes) sc_refs.push_back(reference_solve(*c.prob, sc_gamma));

  SuiteRunner runner{out, {}};

  runner.run("numerics.factor_residual", [&](CheckResult& r) {
    SplitMix64 rng = substream(90001, 0);
    for (int t = 0; t < 100; ++t) {
      const Index n = 1 + Index(rng.next_u64() % 12);
      Matrix g(n, n);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) g(i, j) = rng.next_gaussian();
      const Matrix m = g.transpose() * g + Matrix::Identity(n, n);
      const auto f = factor_spd(m);
      Vector b(n);
      for (Index i = 0; i < n; ++i) b(i) = rng.next_gaussian();
      const Vector v = solve_with(f, b);
      const double resid = (m * v - b).norm() - 1e-10 * (1.0 + b.norm());
      ++r.checked;
      if (resid > 0.0) ++r.violations;
      r.worst = std::max(r.worst, resid);
      const double recon = (f.reconstruct() - m).norm() / std::max(1.0, m.norm());
      ++r.checked;
      if (recon > 1e-10) ++r.violations;
    }
  });

  runner.run("numerics.rayleigh_sandwich", [&](CheckResult& r) {
    SplitMix64 rng = substream(90002, 0);
    for (const auto& c : boxes) {
      const auto ev = extreme_eigenvalues(c.inst.q_mat);
      for (int t = 0; t < 100; ++t) {
        Vector d = random_point(rng, c.inst.q_vec.size(), 1.0);
        d.normalize();
        const double rq = d.dot(c.inst.q_mat * d);
        ++r.checked;
        if (rq < ev.min - 1e-8 || rq > ev.max + 1e-8) ++r.violations;
        r.worst = std::max({r.worst, ev.min - 1e-8 - rq, rq - ev.max - 1e-8});
      }
    }
  });

  runner.run("functions.three_point", [&](CheckResult& r) {
    SplitMix64 rng = substream(90003, 0);
    const Index n = 7;
    const ProxFunction variants[] = {
        ProxFunction::box(Vector::Constant(n, -1.0), Vector::Constant(n, 2.0)),
        ProxFunction::l1(0.8, n), ProxFunction::zero(n)};
    for (int t = 0; t < (full ? 200 : 100); ++t) {
      const auto& h = variants[t % 3];
      const double gamma = 0.05 + 2.0 * rng.next_uniform();
      const Vector y = random_point(rng, n, 3.0);
      Vector z = random_point(rng, n, 3.0);
      if (h.kind() == ProxKind::BoxIndicator) z = h.prox(1.0, z);  // keep h(z) finite
      const Vector p = h.prox(gamma, y);
      const double lhs = h.value(z) + (z - y).squaredNorm() / (2.0 * gamma);
      const double rhs = h.value(p) + (p - y).squaredNorm() / (2.0 * gamma) +
                         (z - p).squaredNorm() / (2.0 * gamma) - 1e-9;
      ++r.checked;
      if (lhs < rhs) ++r.violations;
      r.worst = std::max(r.worst, rhs - lhs);
    }
  });

  runner.run("functions.prox_nonexpansive", [&](CheckResult& r) {
    SplitMix64 rng = substream(90004, 0);
    const Index n = 7;
    const ProxFunction variants[] = {
        ProxFunction::box(Vector::Constant(n, -0.5), Vector::Constant(n, 1.5)),
        ProxFunction::l1(1.2, n), ProxFunction::zero(n)};
    for (int t = 0; t < (full ? 200 : 100); ++t) {
      const auto& h = variants[t % 3];
      const double gamma = 0.05 + 2.0 * rng.next_uniform();
      const Vector x1 = random_point(rng, n, 3.0);
      const Vector x2 = random_point(rng, n, 3.0);
      const double lhs = (h.prox(gamma, x1) - h.prox(gamma, x2)).norm();
      const double rhs = (x1 - x2).norm() + 1e-10;
      ++r.checked;
      if (lhs > rhs) ++r.violations;
      r.worst = std::max(r.worst, lhs - rhs);
    }
  });

  runner.run("functions.moreau_gradient_fd", [&](CheckResult& r) {
    SplitMix64 rng = substream(90005, 0);
    const Index n = 6;
    const ProxFunction variants[] = {
        ProxFunction::box(Vector::Constant(n, 0.0), Vector::Constant(n, 1.0)),
        ProxFunction::l1(0.6, n)};
    for (int t = 0; t < (full ? 60 : 20); ++t) {
      const auto& h = variants[t % 2];
      const double gamma = 0.1 + rng.next_uniform();
      const Vector x = random_point(rng, n, 2.0);
      const Vector g_an = moreau_gradient(h, gamma, x);
      const Vector g_fd = central_difference_gradient(
          [&](const Vector& v) { return moreau_value(h, gamma, v); }, x);
      const double err = (g_an - g_fd).norm() - 1e-5 * (1.0 + g_an.norm());
      ++r.checked;
      if (err > 0.0) ++r.violations;
      r.worst = std::max(r.worst, err);
    }
  });

  runner.run("functions.moreau_gradient_lipschitz", [&](CheckResult& r) {
    SplitMix64 rng = substream(90006, 0);
    const Index n = 6;
    const ProxFunction variants[] = {
        ProxFunction::box(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)),
        ProxFunction::l1(0.9, n), ProxFunction::zero(n)};
    for (int t = 0; t < (full ? 200 : 100); ++t) {
      const auto& h = variants[t % 3];
      const double gamma = 0.05 + 2.0 * rng.next_uniform();
      const Vector x1 = random_point(rng, n, 3.0);
      const Vector x2 = random_point(rng, n, 3.0);
      const double lhs = (moreau_gradient(h, gamma, x1) - moreau_gradient(h, gamma, x2)).norm();
      const double rhs = (x1 - x2).norm() / gamma + 1e-10;
      ++r.checked;
      if (lhs > rhs) ++r.violations;
      r.worst = std::max(r.worst, lhs - rhs);
    }
  });

  runner.run("functions.moreau_hessian_bounds", [&](CheckResult& r) {
    SplitMix64 rng = substream(90007, 0);
    for (const auto& c : boxes) {
      const double mu = c.prob->mu_f();
      const double l = c.prob->l_f();
      for (double gamma : {0.5 * c.gamma_star, c.gamma_star, 2.0}) {
        for (int t = 0; t < 20; ++t) {
          const Vector d = random_point(rng, c.prob->dim(), 1.0);
          const Vector v = c.prob->f_resolvent_solve(gamma, d);
          const double rq = (d.squaredNorm() - d.dot(v)) / gamma / d.squaredNorm();
          const double lo = mu / (1.0 + gamma * mu) - 1e-9;
          const double hi = l / (1.0 + gamma * l) + 1e-9;
          ++r.checked;
          if (rq < lo || rq > hi) ++r.violations;
          r.worst = std::max({r.worst, lo - rq, rq - hi});
        }
      }
    }
  });

  runner.run("envelope.z_nonexpansive", [&](CheckResult& r) {
    SplitMix64 rng = substream(90008, 0);
    for (const auto& c : boxes) {
      for (double gamma : {c.gamma_star, 2.0 / c.prob->l_f()}) {
        add_stats(r, sweep_z_nonexpansive(*c.prob, gamma, z_pairs / 2, rng));
      }
    }
    for (const auto& c : lss) {
      for (double gamma : {c.gamma_star, 2.0 / c.prob->l_f()}) {
        add_stats(r, sweep_z_nonexpansive(*c.prob, gamma, z_pairs / 2, rng));
      }
    }
  });

  runner.run("envelope.dre_gradient_fd", [&](CheckResult& r) {
    SplitMix64 rng = substream(90009, 0);
    for (const auto& c : boxes) {
      add_stats(r, sweep_dre_gradient_fd(*c.prob, c.gamma_star, fd_points, rng, 1e-5,
                                         hooks.dre_gradient_override));
    }
    for (const auto& c : lss) {
      add_stats(r, sweep_dre_gradient_fd(*c.prob, c.gamma_star, fd_points, rng, 1e-5,
                                         hooks.dre_gradient_override));
    }
  });

  runner.run("envelope.dre_gradient_lipschitz", [&](CheckResult& r) {
    SplitMix64 rng = substream(90010, 0);
    for (const auto& c : boxes) {
      add_stats(r, sweep_dre_gradient_lipschitz(*c.prob, c.gamma_star, pairs, rng));
    }
    for (const auto& c : lss) {
      add_stats(r, sweep_dre_gradient_lipschitz(*c.prob, c.gamma_star, pairs, rng));
    }
  });

  runner.run("envelope.dre_strong_convexity", [&](CheckResult& r) {
    SplitMix64 rng = substream(90011, 0);
    for (const auto& c : sc_boxes) {
      add_stats(r, sweep_dre_strong_convexity(*c.prob, c.gamma_star, pairs, rng));
    }
  });

  runner.run("envelope.minimum_equivalence", [&](CheckResult& r) {
    SplitMix64 rng = substream(90012, 0);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      add_stats(r, sweep_envelope_minimum(*boxes[i].prob, boxes[i].gamma_star, box_refs[i], points, rng));
    }
    for (std::size_t i = 0; i < lss.size(); ++i) {
      add_stats(r, sweep_envelope_minimum(*lss[i].prob, lss[i].gamma_star, ls_refs[i], points, rng));
    }
  });

  runner.run("envelope.prop1_residuals", [&](CheckResult& r) {
    SplitMix64 rng = substream(90013, 0);
    for (const auto& c : boxes) {
      for (double gamma : {c.gamma_star, 2.0 / c.prob->l_f()}) {
        add_stats(r, sweep_prop1(*c.prob, gamma, points / 2, rng));
      }
    }
    for (const auto& c : lss) {
      for (double gamma : {c.gamma_star, 2.0 / c.prob->l_f()}) {
        add_stats(r, sweep_prop1(*c.prob, gamma, points / 2, rng));
      }
    }
  });

  runner.run("envelope.dre_fbe_identity", [&](CheckResult& r) {
    SplitMix64 rng = substream(90014, 0);
    for (const auto& c : boxes) {
      add_stats(r, sweep_dre_fbe_identity(*c.prob, c.gamma_star, points / 10, rng));
    }
    for (const auto& c : lss) {
      add_stats(r, sweep_dre_fbe_identity(*c.prob, c.gamma_star, points / 10, rng));
    }
  });

  runner.run("envelope.dre_two_forms", [&](CheckResult& r) {
    SplitMix64 rng = substream(90015, 0);
    for (const auto& c : boxes) {
      add_stats(r, sweep_dre_two_forms(*c.prob, c.gamma_star, points / 10, rng));
    }
    for (const auto& c : lss) {
      add_stats(r, sweep_dre_two_forms(*c.prob, c.gamma_star, points / 10, rng));
    }
  });

  runner.run("solvers.scaled_gradient_equivalence", [&](CheckResult& r) {
    SplitMix64 rng = substream(90016, 0);
    for (const auto& c : boxes) {
      const double inv_l = 1.0 / c.prob->l_f();
      for (double gamma : {0.3 * inv_l, c.gamma_star, 0.9 * inv_l}) {
        add_stats(r, sweep_scaled_gradient(*c.prob, gamma, sg_trials, rng));
      }
    }
    for (const auto& c : lss) {
      const double inv_l = 1.0 / c.prob->l_f();
      for (double gamma : {0.3 * inv_l, c.gamma_star, 0.9 * inv_l}) {
        add_stats(r, sweep_scaled_gradient(*c.prob, gamma, sg_trials, rng));
      }
    }
  });

  runner.run("solvers.fast_equals_plain_with_zero_momentum", [&](CheckResult& r) {
    const auto& c = boxes.front();
    SolverConfig config;
    config.gamma = c.gamma_star;
    config.lambda = theorem_stepsize(c.gamma_star, c.prob->l_f());
    config.max_iter = 60;
    config.tol = 1e-300;
    const Vector x0 = Vector::Zero(c.prob->dim());
    std::vector<Vector> plain_y, fast_y;
    run_drs(*c.prob, config, x0,
            [&](int, const Vector&, const Vector& y, const Vector&) { plain_y.push_back(y); });
    run_fast_drs_with(*c.prob, config, x0, [](int) { return 0.0; },
                      [&](int, const Vector&, const Vector& y, const Vector&) {
                        fast_y.push_back(y);
                      });
    for (std::size_t i = 0; i < plain_y.size(); ++i) {
      const double err = (plain_y[i] - fast_y[i]).norm() - 1e-12;
      ++r.checked;
      if (err > 0.0) ++r.violations;
      r.worst = std::max(r.worst, err);
    }
  });

  runner.run("solvers.gamma_star_grid_minimality", [&](CheckResult& r) {
    for (double l_f : {1.0, 3.7}) {
      const double g_star = optimal_gamma(l_f);
      const auto rate_c = [l_f](double g) { return (1.0 + g * l_f) / (g * (1.0 - g * l_f)); };
      const double c_star = rate_c(g_star);
      for (int i = 1; i <= 1000; ++i) {
        const double g = (double(i) / 1001.0) / l_f;
        ++r.checked;
        if (c_star > rate_c(g)) ++r.violations;
        r.worst = std::max(r.worst, c_star - rate_c(g));
      }
    }
  });

  runner.run("solvers.dre_descent", [&](CheckResult& r) {
    const auto& c = boxes.front();
    const auto& ref = box_refs.front();
    auto sweep = sublinear_bound_sweep(*c.prob, ref, c.gamma_star, full ? 100000 : 30000);
    r.checked += long(sweep.trace.records.size()) - 1;
    r.violations += dre_descent_violations(sweep.trace);
  });

  runner.run("solvers.sublinear_bound", [&](CheckResult& r) {
    if (full) {
      const auto big = make_box_case(500, 1, 100.0);
      const auto ref = reference_solve(*big.prob, big.gamma_star);
      const auto sweep = sublinear_bound_sweep(*big.prob, ref, big.gamma_star, 60000);
      r.checked += sweep.checked;
      r.violations += sweep.violations + (sweep.k_target < 0 ? 1 : 0);
      r.worst = std::max(r.worst, sweep.worst_margin);
    } else {
      const auto sweep =
          sublinear_bound_sweep(*boxes.front().prob, box_refs.front(), boxes.front().gamma_star,
                               30000);
      r.checked += sweep.checked;
      r.violations += sweep.violations + (sweep.k_target < 0 ? 1 : 0);
      r.worst = std::max(r.worst, sweep.worst_margin);
    }
  });

  runner.run("solvers.fast_bound", [&](CheckResult& r) {
    if (full) {
      const auto big = make_ls_case(100, 1000, 1, 1.0, 10);
      const auto ref = reference_solve(*big.prob, big.gamma_star);
      const auto sweep = fast_bound_sweep(*big.prob, ref, big.gamma_star, 20000);
      r.checked += sweep.checked;
      r.violations += sweep.violations + (sweep.k_target < 0 ? 1 : 0);
      r.worst = std::max(r.worst, sweep.worst_margin);
    } else {
      const auto sweep = fast_bound_sweep(*lss.front().prob, ls_refs.front(),
                                              lss.front().gamma_star, 30000);
      r.checked += sweep.checked;
      r.violations += sweep.violations + (sweep.k_target < 0 ? 1 : 0);
      r.worst = std::max(r.worst, sweep.worst_margin);
    }
  });

  runner.run("solvers.linear_iterate_bound", [&](CheckResult& r) {
    const int iters = full ? 2000 : 800;
    for (std::size_t i = 0; i < sc_boxes.size(); ++i) {
      const auto sweep = linear_iterate_bound_sweep(*sc_boxes[i].prob, sc_refs[i], sc_gamma, iters);
      r.checked += sweep.checked;
      r.violations += sweep.violations;
      r.worst = std::max(r.worst, sweep.worst_margin);
    }
  });

  runner.run("solvers.fast_geometric_bound", [&](CheckResult& r) {
    const int iters = full ? 2000 : 800;
    for (std::size_t i = 0; i < sc_boxes.size(); ++i) {
      const auto sweep = fast_geometric_bound_sweep(*sc_boxes[i].prob, sc_refs[i], sc_gamma, iters);
      r.checked += sweep.checked;
      r.violations += sweep.violations;
      r.worst = std::max(r.worst, sweep.worst_margin);
    }
  });

  runner.run("problems.generator_determinism", [&](CheckResult& r) {
    const auto b1 = gen_box_qp(24, 7, 30.0, 1.0);
    const auto b2 = gen_box_qp(24, 7, 30.0, 1.0);
    ++r.checked;
    if (b1.q_mat != b2.q_mat || b1.q_vec != b2.q_vec) ++r.violations;
    const auto l1 = gen_sparse_ls(12, 40, 7, 0.9, 4);
    const auto l2 = gen_sparse_ls(12, 40, 7, 0.9, 4);
    ++r.checked;
    if (l1.a != l2.a || l1.b != l2.b || l1.x_plant != l2.x_plant) ++r.violations;
  });

  runner.run("problems.certificate_residual", [&](CheckResult& r) {
    for (const auto& c : lss) {
      const double resid = c.inst.certificate_residual();
      ++r.checked;
      if (resid > 1e-10) ++r.violations;
      r.worst = std::max(r.worst, resid - 1e-10);
    }
  });

  runner.run("problems.reference_vs_enumeration", [&](CheckResult& r) {
    const int seeds = full ? 20 : 5;
    for (int s = 1; s <= seeds; ++s) {
      const auto c = make_box_case(4 + Index(s % 5), std::uint64_t(s), 10.0);
      const auto ref = reference_solve(*c.prob, c.gamma_star);
      const double enumerated = box_qp_enumeration_optimum(c.inst);
      const double err = std::abs(ref.f_star - enumerated) - 1e-8 * (1.0 + std::abs(ref.f_star));
      ++r.checked;
      if (err > 0.0) ++r.violations;
      r.worst = std::max(r.worst, err);
    }
  });

  runner.run("problems.planted_optimum", [&](CheckResult& r) {
    for (std::size_t i = 0; i < lss.size(); ++i) {
      const double err = std::abs(ls_refs[i].f_star - lss[i].inst.plant_objective()) -
                         1e-8 * (1.0 + std::abs(ls_refs[i].f_star));
      ++r.checked;
      if (err > 0.0) ++r.violations;
      r.worst = std::max(r.worst, err);
    }
  });

  return runner.results;
}

}  // namespace dre::checks
