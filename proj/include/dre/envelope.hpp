#pragma once

#include <variant>

#include "dre/functions.hpp"

namespace dre {

// Composite objective F = f + g with f convex quadratic (either explicit
// Q, q or a least-squares form) and g prox-friendly. The extreme curvature
// of f is computed once at construction.
class CompositeProblem {
 public:
  CompositeProblem(ConvexQuadratic f, ProxFunction g);
  CompositeProblem(LeastSquaresQuadratic f, ProxFunction g);

  Index dim() const { return g_.dim(); }
  double mu_f() const { return mu_f_; }
  double l_f() const { return l_f_; }
  const ProxFunction& g() const { return g_; }

  double f_value(const Vector& x) const;
  Vector f_gradient(const Vector& x) const;
  Vector f_prox(double gamma, const Vector& x) const;
  Vector f_resolvent_solve(double gamma, const Vector& v) const;
  const Matrix& f_hessian() const;

  double g_value(const Vector& x) const { return g_.value(x); }
  Vector g_prox(double gamma, const Vector& x) const { return g_.prox(gamma, x); }

  // F(x) = f(x) + g(x); +infinity outside dom g.
  double objective(const Vector& x) const { return f_value(x) + g_value(x); }

  // Applies D = gamma (2 (I + gamma Q)^{-1} - I)^{-1} = gamma (I - gamma Q)^{-1}(I + gamma Q)
  // through one cached factored solve of (I - gamma Q). Requires gamma < 1/L_f.
  Vector apply_scaling(double gamma, const Vector& v) const;

 private:
  std::variant<ConvexQuadratic, LeastSquaresQuadratic> f_;
  ProxFunction g_;
  double mu_f_ = 0.0;
  double l_f_ = 0.0;
  FactorCache shifted_cache_;  // factors of (I - gamma Q)
};

// Smoothness and convexity constants of the envelope and of the
// preconditioned function h(w) = F_dre(D^{1/2} w), valid for gamma < 1/L_f.
struct EnvelopeConstants {
  double gamma;
  double l_dre;   // Lipschitz modulus of the envelope gradient
  double mu_dre;  // convexity modulus of the envelope
  double d_min;   // smallest eigenvalue of the scaling matrix D
  double d_max;   // largest eigenvalue of D
  double l_h;     // Lipschitz modulus of grad h
  double mu_h;    // convexity modulus of h
};

// P(x) = prox_{gamma f}(x), G(x) = prox_{gamma g}(2 P(x) - x), Z = P - G.
Vector p_map(const CompositeProblem& prob, double gamma, const Vector& x);
Vector g_map(const CompositeProblem& prob, double gamma, const Vector& x);
Vector z_map(const CompositeProblem& prob, double gamma, const Vector& x);

// Envelope value, evaluated through the all-finite prox form
//   f(P) + g(G) + ‖G - P‖²/(2 gamma) + (G - P)'(x - P)/gamma.
double dre_value(const CompositeProblem& prob, double gamma, const Vector& x);

// Same quantity through the Moreau-envelope form
//   f(P) - (gamma/2) ‖grad f(P)‖² + g^gamma(2P - x);
// an independent algebraic route used for cross-checking.
double dre_value_moreau(const CompositeProblem& prob, double gamma, const Vector& x);

// grad F_dre(x) = gamma^{-1} (2 (I + gamma Q)^{-1} - I) Z(x), one factored solve.
Vector dre_gradient(const CompositeProblem& prob, double gamma, const Vector& x);

// Forward-backward envelope value at x; satisfies dre_value(x) = fbe_value(P(x)).
double fbe_value(const CompositeProblem& prob, double gamma, const Vector& x);

struct Prop1Residuals {
  double r1;  // F(P(x)) - ‖Z‖²/(2 gamma) - F_dre(x), +inf when P(x) is infeasible
  double r2;  // F_dre(x) - F(G(x)) - (1 - gamma L_f) ‖Z‖²/(2 gamma)
};

// Both residuals are nonnegative for every gamma > 0 (up to round-off).
Prop1Residuals prop1_residuals(const CompositeProblem& prob, double gamma, const Vector& x);

// Throws GammaTooLarge unless 0 < gamma < 1/L_f.
EnvelopeConstants envelope_constants(const CompositeProblem& prob, double gamma);

}  // namespace dre
