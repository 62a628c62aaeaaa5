#include "dre/envelope.hpp"

#include <algorithm>
#include <cmath>

namespace dre {

namespace {

double clamp_nonnegative(double v) { return v < 0.0 ? 0.0 : v; }

void check_gamma(double gamma, const char* where) {
  if (gamma <= 0.0) throw BadParameters(where);
}

}  // namespace

CompositeProblem::CompositeProblem(ConvexQuadratic f, ProxFunction g)
    : f_(std::move(f)), g_(std::move(g)) {
  const auto& quad = std::get<ConvexQuadratic>(f_);
  if (quad.dim() != g_.dim()) {
    throw DimensionMismatch("CompositeProblem: f and g dimensions disagree");
  }
  const auto ev = extreme_eigenvalues(quad.hessian());
  mu_f_ = clamp_nonnegative(ev.min);
  l_f_ = ev.max;
}

CompositeProblem::CompositeProblem(LeastSquaresQuadratic f, ProxFunction g)
    : f_(std::move(f)), g_(std::move(g)) {
  const auto& ls = std::get<LeastSquaresQuadratic>(f_);
  if (ls.dim() != g_.dim()) {
    throw DimensionMismatch("CompositeProblem: f and g dimensions disagree");
  }
  const auto ev = extreme_eigenvalues(ls.hessian());
  mu_f_ = clamp_nonnegative(ev.min);
  l_f_ = ev.max;
}

double CompositeProblem::f_value(const Vector& x) const {
  return std::visit([&](const auto& f) { return f.value(x); }, f_);
}

Vector CompositeProblem::f_gradient(const Vector& x) const {
  return std::visit([&](const auto& f) { return f.gradient(x); }, f_);
}

Vector CompositeProblem::f_prox(double gamma, const Vector& x) const {
  return std::visit([&](const auto& f) { return f.prox(gamma, x); }, f_);
}

Vector CompositeProblem::f_resolvent_solve(double gamma, const Vector& v) const {
  return std::visit([&](const auto& f) { return f.resolvent_solve(gamma, v); }, f_);
}

const Matrix& CompositeProblem::f_hessian() const {
  return std::visit([](const auto& f) -> const Matrix& { return f.hessian(); }, f_);
}

Vector CompositeProblem::apply_scaling(double gamma, const Vector& v) const {
  check_gamma(gamma, "apply_scaling: gamma must be positive");
  if (gamma >= 1.0 / l_f_) {
    throw GammaTooLarge("apply_scaling: requires gamma < 1/L_f");
  }
  auto factor = shifted_cache_.get(gamma, [this](double g) -> Matrix {
    return Matrix::Identity(dim(), dim()) - g * f_hessian();
  });
  // (2 (I+gQ)^{-1} - I)^{-1} = (I - gQ)^{-1} (I + gQ)
  const Vector w = v + gamma * (f_hessian() * v);
  return gamma * factor->solve(w);
}

Vector p_map(const CompositeProblem& prob, double gamma, const Vector& x) {
  check_gamma(gamma, "p_map: gamma must be positive");
  return prob.f_prox(gamma, x);
}

Vector g_map(const CompositeProblem& prob, double gamma, const Vector& x) {
  check_gamma(gamma, "g_map: gamma must be positive");
  const Vector p = prob.f_prox(gamma, x);
  return prob.g_prox(gamma, 2.0 * p - x);
}

Vector z_map(const CompositeProblem& prob, double gamma, const Vector& x) {
  check_gamma(gamma, "z_map: gamma must be positive");
  const Vector p = prob.f_prox(gamma, x);
  const Vector g = prob.g_prox(gamma, 2.0 * p - x);
  return p - g;
}

double dre_value(const CompositeProblem& prob, double gamma, const Vector& x) {
  check_gamma(gamma, "dre_value: gamma must be positive");
  const Vector p = prob.f_prox(gamma, x);
  const Vector g = prob.g_prox(gamma, 2.0 * p - x);
  const Vector gp = g - p;
  return prob.f_value(p) + prob.g_value(g) + gp.squaredNorm() / (2.0 * gamma) +
         gp.dot(x - p) / gamma;
}

double dre_value_moreau(const CompositeProblem& prob, double gamma, const Vector& x) {
  check_gamma(gamma, "dre_value_moreau: gamma must be positive");
  const Vector p = prob.f_prox(gamma, x);
  const Vector grad_p = prob.f_gradient(p);
  return prob.f_value(p) - 0.5 * gamma * grad_p.squaredNorm() +
         moreau_value(prob.g(), gamma, 2.0 * p - x);
}

Vector dre_gradient(const CompositeProblem& prob, double gamma, const Vector& x) {
  check_gamma(gamma, "dre_gradient: gamma must be positive");
  const Vector z = z_map(prob, gamma, x);
  return (2.0 * prob.f_resolvent_solve(gamma, z) - z) / gamma;
}

double fbe_value(const CompositeProblem& prob, double gamma, const Vector& x) {
  check_gamma(gamma, "fbe_value: gamma must be positive");
  const Vector grad = prob.f_gradient(x);
  const Vector z = prob.g_prox(gamma, x - gamma * grad);
  const Vector d = z - x;
  return prob.f_value(x) + grad.dot(d) + prob.g_value(z) + d.squaredNorm() / (2.0 * gamma);
}

Prop1Residuals prop1_residuals(const CompositeProblem& prob, double gamma, const Vector& x) {
  check_gamma(gamma, "prop1_residuals: gamma must be positive");
  const Vector p = prob.f_prox(gamma, x);
  const Vector g = prob.g_prox(gamma, 2.0 * p - x);
  const Vector gp = g - p;
  const double znorm2 = gp.squaredNorm();
  const double dre = prob.f_value(p) + prob.g_value(g) + znorm2 / (2.0 * gamma) +
                     gp.dot(x - p) / gamma;
  const double f_at_p = prob.objective(p);
  const double r1 = std::isfinite(f_at_p)
                        ? f_at_p - znorm2 / (2.0 * gamma) - dre
                        : kInfinity;
  const double r2 =
      dre - prob.objective(g) - (1.0 - gamma * prob.l_f()) * znorm2 / (2.0 * gamma);
  return {r1, r2};
}

EnvelopeConstants envelope_constants(const CompositeProblem& prob, double gamma) {
  check_gamma(gamma, "envelope_constants: gamma must be positive");
  const double mu = prob.mu_f();
  const double l = prob.l_f();
  if (gamma >= 1.0 / l) {
    throw GammaTooLarge("envelope_constants: requires gamma < 1/L_f");
  }
  // psi(t) = (1 - gamma t) t / (1 + gamma t)^2 is concave on [mu, L] for
  // gamma < 1/L, so its minimum sits at one of the endpoints.
  const auto psi = [gamma](double t) {
    const double d = 1.0 + gamma * t;
    return (1.0 - gamma * t) * t / (d * d);
  };
  EnvelopeConstants c;
  c.gamma = gamma;
  c.l_dre = (1.0 - gamma * mu) / (1.0 + gamma * mu) / gamma;
  c.mu_dre = clamp_nonnegative(std::min(psi(mu), psi(l)));
  c.d_min = gamma * (1.0 + gamma * mu) / (1.0 - gamma * mu);
  c.d_max = gamma * (1.0 + gamma * l) / (1.0 - gamma * l);
  c.l_h = (1.0 + gamma * l) / (1.0 - gamma * l);
  c.mu_h = c.d_min * c.mu_dre;
  return c;
}

}  // namespace dre
