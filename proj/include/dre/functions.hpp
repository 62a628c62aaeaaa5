#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "dre/numerics.hpp"

namespace dre {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Thread-safe memo of SPD factorizations keyed by the exact bit pattern of
// gamma. Lookups may race; a duplicate build is discarded, never observed.
// Copies share the already-built factorizations (they are immutable).
class FactorCache {
 public:
  FactorCache() = default;
  FactorCache(const FactorCache& other) : cache_(other.snapshot()) {}
  FactorCache& operator=(const FactorCache& other);

  std::shared_ptr<const SpdFactorization> get(
      double gamma, const std::function<Matrix(double)>& build) const;

 private:
  using Map = std::unordered_map<std::uint64_t, std::shared_ptr<const SpdFactorization>>;

  Map snapshot() const;

  mutable std::mutex mutex_;
  mutable Map cache_;
};

// f(x) = 1/2 x'Qx + q'x with Q symmetric positive semidefinite.
class ConvexQuadratic {
 public:
  ConvexQuadratic(Matrix q_mat, Vector q_vec);

  Index dim() const { return q_vec_.size(); }
  const Matrix& hessian() const { return q_mat_; }
  const Vector& linear() const { return q_vec_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  // argmin_p f(p) + ‖p - x‖²/(2 gamma) = (I + gamma Q)^{-1}(x - gamma q).
  Vector prox(double gamma, const Vector& x) const;

  // (I + gamma Q)^{-1} v, reusing the cached factorization.
  Vector resolvent_solve(double gamma, const Vector& v) const;

 private:
  std::shared_ptr<const SpdFactorization> factor(double gamma) const;

  Matrix q_mat_;
  Vector q_vec_;
  FactorCache cache_;
};

// f(x) = 1/2 ‖Ax - b‖². Prox evaluations go through the normal equations
// (A'A + gamma^{-1} I) p = A'b + gamma^{-1} x, a distinct algebraic route
// from the equivalent ConvexQuadratic with Q = A'A, q = -A'b.
class LeastSquaresQuadratic {
 public:
  LeastSquaresQuadratic(Matrix a, Vector b);

  Index dim() const { return a_.cols(); }
  const Matrix& design() const { return a_; }
  const Vector& rhs() const { return b_; }
  const Matrix& hessian() const { return gram_; }  // A'A
  Vector linear() const { return -atb_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Vector prox(double gamma, const Vector& x) const;
  Vector resolvent_solve(double gamma, const Vector& v) const;

 private:
  std::shared_ptr<const SpdFactorization> factor(double gamma) const;

  Matrix a_;
  Vector b_;
  Matrix gram_;
  Vector atb_;
  FactorCache cache_;  // factors of (A'A + gamma^{-1} I)
};

enum class ProxKind { BoxIndicator, L1Norm, Zero };

// Nonsmooth summand g with a closed-form proximal mapping.
class ProxFunction {
 public:
  static ProxFunction box(Vector lower, Vector upper);
  static ProxFunction l1(double rho, Index dim);
  static ProxFunction zero(Index dim);

  ProxKind kind() const { return kind_; }
  Index dim() const { return dim_; }
  double rho() const { return rho_; }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  Vector prox(double gamma, const Vector& x) const;
  double value(const Vector& x) const;  // may be +infinity

 private:
  ProxFunction(ProxKind kind, Index dim) : kind_(kind), dim_(dim) {}

  ProxKind kind_;
  Index dim_;
  double rho_ = 0.0;
  Vector lower_, upper_;
};

// Moreau envelope h^gamma(x) = min_z h(z) + ‖z - x‖²/(2 gamma), finite for
// every x, and its gradient (x - prox_{gamma h}(x)) / gamma.
template <class H>
double moreau_value(const H& h, double gamma, const Vector& x) {
  if (gamma <= 0.0) throw BadParameters("moreau_value: gamma must be positive");
  const Vector p = h.prox(gamma, x);
  return h.value(p) + (p - x).squaredNorm() / (2.0 * gamma);
}

template <class H>
Vector moreau_gradient(const H& h, double gamma, const Vector& x) {
  if (gamma <= 0.0) throw BadParameters("moreau_gradient: gamma must be positive");
  return (x - h.prox(gamma, x)) / gamma;
}

}  // namespace dre
