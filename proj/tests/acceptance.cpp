// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured margins.
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <memory>
#include <vector>

#include "dre/checks.hpp"
#include "dre/cli.hpp"

using namespace dre;

namespace {

constexpr double kSqrt2m1 = 0.41421356237309515;
constexpr double kScGamma = 0.002;  // strongly convex suite runs deep into the
                                    // linear regime without hitting round-off

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int num, const char* name, bool ok, const std::string& detail) {
  std::printf("[criterion %02d] %s %s (%s)\n", num, ok ? "PASS" : "FAIL", name,
              detail.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(ok, "criterion " << num << " " << std::string(name) << ": " << detail);
}

std::string fmt(double v) { return format_double_short(v); }

struct BoxCase {
  BoxQpInstance inst;
  std::unique_ptr<CompositeProblem> prob;
  double gamma_star;
  ReferenceSolution ref;
};

struct LsCase {
  SparseLsInstance inst;
  std::unique_ptr<CompositeProblem> prob;
  double gamma_star;
  ReferenceSolution ref;
};

BoxCase make_box(Index n, std::uint64_t seed, double cond, double gamma = -1.0) {
  BoxCase c{gen_box_qp(n, seed, cond, 1.0), nullptr, 0.0, {}};
  c.prob = std::make_unique<CompositeProblem>(c.inst.problem());
  c.gamma_star = optimal_gamma(c.prob->l_f());
  c.ref = reference_solve(*c.prob, gamma > 0.0 ? gamma : c.gamma_star);
  return c;
}

LsCase make_ls(Index m, Index n, std::uint64_t seed, double rho, Index nnz) {
  LsCase c{gen_sparse_ls(m, n, seed, rho, nnz), nullptr, 0.0, {}};
  c.prob = std::make_unique<CompositeProblem>(c.inst.problem());
  c.gamma_star = optimal_gamma(c.prob->l_f());
  c.ref = reference_solve(*c.prob, c.gamma_star);
  return c;
}

// Criterion instance pools, built once per process.
const std::vector<BoxCase>& small_boxes() {
  static const auto cases = [] {
    std::vector<BoxCase> v;
    for (std::uint64_t s = 1; s <= 10; ++s) v.push_back(make_box(50, s, 100.0));
    return v;
  }();
  return cases;
}

const std::vector<LsCase>& small_ls() {
  static const auto cases = [] {
    std::vector<LsCase> v;
    for (std::uint64_t s = 1; s <= 10; ++s) v.push_back(make_ls(20, 100, s, 1.0, 5));
    return v;
  }();
  return cases;
}

const std::vector<BoxCase>& sc_boxes() {
  static const auto cases = [] {
    std::vector<BoxCase> v;
    for (std::uint64_t s = 1; s <= 5; ++s) v.push_back(make_box(50, s, 10.0, kScGamma));
    return v;
  }();
  return cases;
}

const std::vector<LsCase>& big_ls() {
  static const auto cases = [] {
    std::vector<LsCase> v;
    for (std::uint64_t s = 1; s <= 10; ++s) v.push_back(make_ls(100, 1000, s, 1.0, 10));
    return v;
  }();
  return cases;
}

// Plain-method bound sweeps on the small box pool, shared between criteria 5 and 12.
const std::vector<checks::BoundSweep>& criterion5_sweeps() {
  static const auto sweeps = [] {
    std::vector<checks::BoundSweep> v;
    for (const auto& c : small_boxes()) {
      v.push_back(checks::sublinear_bound_sweep(*c.prob, c.ref, c.gamma_star, 100000));
    }
    return v;
  }();
  return sweeps;
}

}  // namespace

TEST_CASE("criterion 01: proposition-1 residual sweep") {
  Timer timer;
  SplitMix64 rng = substream(7001, 0);
  checks::SweepStats total;
  for (const auto& c : small_boxes()) {
    total.absorb(checks::sweep_prop1(*c.prob, c.gamma_star, 500, rng));
  }
  for (const auto& c : small_ls()) {
    total.absorb(checks::sweep_prop1(*c.prob, c.gamma_star, 500, rng));
  }
  const double secs = timer.elapsed();
  const bool ok = total.violations == 0 && total.checked == 20 * 500 && secs < 60.0;
  report(1, "proposition-1 residuals", ok,
         "checked=" + std::to_string(total.checked) + " violations=" +
             std::to_string(total.violations) + " worst=" + fmt(total.worst) +
             " time=" + fmt(secs) + "s");
}

TEST_CASE("criterion 02: envelope gradient vs finite differences") {
  SplitMix64 rng = substream(7002, 0);
  checks::SweepStats total;
  for (const auto& c : small_boxes()) {
    total.absorb(checks::sweep_dre_gradient_fd(*c.prob, c.gamma_star, 50, rng));
  }
  for (const auto& c : small_ls()) {
    total.absorb(checks::sweep_dre_gradient_fd(*c.prob, c.gamma_star, 50, rng));
  }
  const bool ok = total.violations == 0 && total.checked == 20 * 50;
  report(2, "gradient finite-difference oracle", ok,
         "checked=" + std::to_string(total.checked) + " violations=" +
             std::to_string(total.violations));
}

TEST_CASE("criterion 03: splitting equals the scaled gradient step") {
  SplitMix64 rng = substream(7003, 0);
  checks::SweepStats total;
  const double fracs[] = {0.3, kSqrt2m1, 0.9};
  for (const auto& c : small_boxes()) {
    for (double f : fracs) {
      total.absorb(checks::sweep_scaled_gradient(*c.prob, f / c.prob->l_f(), 100, rng));
    }
  }
  for (const auto& c : small_ls()) {
    for (double f : fracs) {
      total.absorb(checks::sweep_scaled_gradient(*c.prob, f / c.prob->l_f(), 100, rng));
    }
  }
  const bool ok = total.violations == 0 && total.checked == 20 * 3 * 100;
  report(3, "scaled-gradient equivalence", ok,
         "checked=" + std::to_string(total.checked) + " violations=" +
             std::to_string(total.violations));
}

TEST_CASE("criterion 04: envelope minimum matches the optimum") {
  SplitMix64 rng = substream(7004, 0);
  checks::SweepStats total;
  for (const auto& c : small_boxes()) {
    total.absorb(checks::sweep_envelope_minimum(*c.prob, c.gamma_star, c.ref, 500, rng));
  }
  for (const auto& c : small_ls()) {
    total.absorb(checks::sweep_envelope_minimum(*c.prob, c.gamma_star, c.ref, 500, rng));
  }
  const bool ok = total.violations == 0 && total.checked == 20 * 501;
  report(4, "envelope minimum equivalence", ok,
         "checked=" + std::to_string(total.checked) + " violations=" +
             std::to_string(total.violations));
}

TEST_CASE("criterion 05: sublinear objective bound for the plain method") {
  Timer timer;
  long violations = 0, checked = 0;
  int reached = 0;
  for (const auto& sweep : criterion5_sweeps()) {
    violations += sweep.violations;
    checked += sweep.checked;
    if (sweep.k_target >= 0) ++reached;
  }
  const double secs = timer.elapsed();
  const bool ok = violations == 0 && reached == 10 && secs < 120.0;
  report(5, "sublinear bound sweep", ok,
         "checked=" + std::to_string(checked) + " violations=" +
             std::to_string(violations) + " reached=" + std::to_string(reached) +
             "/10 time=" + fmt(secs) + "s");
}

TEST_CASE("criterion 06: accelerated objective bound") {
  long violations = 0, checked = 0;
  int reached = 0;
  for (const auto& c : small_boxes()) {
    const auto sweep = checks::fast_bound_sweep(*c.prob, c.ref, c.gamma_star, 100000);
    violations += sweep.violations;
    checked += sweep.checked;
    if (sweep.k_target >= 0) ++reached;
  }
  const bool ok = violations == 0 && reached == 10;
  report(6, "accelerated bound sweep", ok,
         "checked=" + std::to_string(checked) + " violations=" +
             std::to_string(violations) + " reached=" + std::to_string(reached) + "/10");
}

TEST_CASE("criterion 07: linear iterate bound under strong convexity") {
  long violations = 0, checked = 0;
  for (const auto& c : sc_boxes()) {
    const auto sweep = checks::linear_iterate_bound_sweep(*c.prob, c.ref, kScGamma, 2000);
    violations += sweep.violations;
    checked += sweep.checked;
  }
  const bool ok = violations == 0 && checked == 5 * 2001;
  report(7, "linear iterate bound", ok,
         "checked=" + std::to_string(checked) + " violations=" +
             std::to_string(violations));
}

TEST_CASE("criterion 08: accelerated geometric bound under strong convexity") {
  long violations = 0, checked = 0;
  for (const auto& c : sc_boxes()) {
    const auto sweep = checks::fast_geometric_bound_sweep(*c.prob, c.ref, kScGamma, 2000);
    violations += sweep.violations;
    checked += sweep.checked;
  }
  const bool ok = violations == 0 && checked == 5 * 2001;
  report(8, "accelerated geometric bound", ok,
         "checked=" + std::to_string(checked) + " violations=" +
             std::to_string(violations));
}

TEST_CASE("criterion 09: fixed-point residual map is nonexpansive") {
  SplitMix64 rng = substream(7009, 0);
  checks::SweepStats total;
  for (const auto& c : small_boxes()) {
    total.absorb(checks::sweep_z_nonexpansive(*c.prob, c.gamma_star, 250, rng));
    total.absorb(checks::sweep_z_nonexpansive(*c.prob, 2.0 / c.prob->l_f(), 250, rng));
  }
  for (const auto& c : small_ls()) {
    total.absorb(checks::sweep_z_nonexpansive(*c.prob, c.gamma_star, 250, rng));
    total.absorb(checks::sweep_z_nonexpansive(*c.prob, 2.0 / c.prob->l_f(), 250, rng));
  }
  const bool ok = total.violations == 0 && total.checked == 20 * 500;
  report(9, "residual nonexpansiveness", ok,
         "checked=" + std::to_string(total.checked) + " violations=" +
             std::to_string(total.violations));
}

TEST_CASE("criterion 10: gamma_star minimizes the rate constant on a grid") {
  long violations = 0;
  for (double l_f : {1.0, 2.5}) {
    const double g_star = optimal_gamma(l_f);
    const auto rate_c = [l_f](double g) { return (1.0 + g * l_f) / (g * (1.0 - g * l_f)); };
    const double c_star = rate_c(g_star);
    for (int i = 1; i <= 1000; ++i) {
      if (c_star > rate_c((double(i) / 1001.0) / l_f)) ++violations;
    }
  }
  report(10, "gamma_star grid minimality", violations == 0,
         "grid=2x1000 violations=" + std::to_string(violations));
}

TEST_CASE("criterion 11: acceleration wins at desk scale") {
  Timer timer;
  int box_wins = 0, ls_wins = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto c = make_box(500, s, 100.0);
    const auto drs = checks::sublinear_bound_sweep(*c.prob, c.ref, c.gamma_star, 60000);
    const auto fast = checks::fast_bound_sweep(*c.prob, c.ref, c.gamma_star, 60000);
    if (fast.k_target >= 0 && (drs.k_target < 0 || fast.k_target < drs.k_target)) {
      ++box_wins;
    }
  }
  for (const auto& c : big_ls()) {
    const auto drs = checks::sublinear_bound_sweep(*c.prob, c.ref, c.gamma_star, 30000);
    const auto fast = checks::fast_bound_sweep(*c.prob, c.ref, c.gamma_star, 30000);
    if (fast.k_target >= 0 && (drs.k_target < 0 || fast.k_target < drs.k_target)) {
      ++ls_wins;
    }
  }
  const double secs = timer.elapsed();
  const bool ok = box_wins >= 9 && ls_wins >= 9 && secs < 600.0;
  report(11, "accelerated vs plain iteration counts", ok,
         "box wins=" + std::to_string(box_wins) + "/10 ls wins=" +
             std::to_string(ls_wins) + "/10 time=" + fmt(secs) + "s");
}

TEST_CASE("criterion 12: envelope descent along the theorem stepsize runs") {
  long violations = 0, steps = 0;
  for (const auto& sweep : criterion5_sweeps()) {
    violations += checks::dre_descent_violations(sweep.trace);
    steps += long(sweep.trace.records.size()) - 1;
  }
  report(12, "envelope descent", violations == 0,
         "steps=" + std::to_string(steps) + " violations=" + std::to_string(violations));
}

TEST_CASE("criterion 13: reference solutions match independent optima") {
  long failures = 0, checked = 0;
  double worst = 0.0;
  for (const auto& c : small_ls()) {
    const double err = std::abs(c.ref.f_star - c.inst.plant_objective()) /
                       (1.0 + std::abs(c.ref.f_star));
    worst = std::max(worst, err);
    ++checked;
    if (err > 1e-8) ++failures;
  }
  for (const auto& c : big_ls()) {
    const double err = std::abs(c.ref.f_star - c.inst.plant_objective()) /
                       (1.0 + std::abs(c.ref.f_star));
    worst = std::max(worst, err);
    ++checked;
    if (err > 1e-8) ++failures;
  }
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto c = make_box(4 + Index(s % 5), s, 10.0);
    const double enumerated = checks::box_qp_enumeration_optimum(c.inst);
    const double err =
        std::abs(c.ref.f_star - enumerated) / (1.0 + std::abs(c.ref.f_star));
    worst = std::max(worst, err);
    ++checked;
    if (err > 1e-8) ++failures;
  }
  report(13, "planted and enumerated optima", failures == 0 && checked == 40,
         "checked=" + std::to_string(checked) + " failures=" + std::to_string(failures) +
             " worst_rel=" + fmt(worst));
}
