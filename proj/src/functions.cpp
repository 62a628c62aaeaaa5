#include "dre/functions.hpp"

#include <algorithm>
#include <cmath>

namespace dre {

namespace {

void check_dim(Index expected, Index got, const char* where) {
  if (expected != got) throw DimensionMismatch(where);
}

}  // namespace

FactorCache::Map FactorCache::snapshot() const {
  std::lock_guard lock(mutex_);
  return cache_;
}

FactorCache& FactorCache::operator=(const FactorCache& other) {
  if (this != &other) {
    Map copy = other.snapshot();
    std::lock_guard lock(mutex_);
    cache_ = std::move(copy);
  }
  return *this;
}

std::shared_ptr<const SpdFactorization> FactorCache::get(
    double gamma, const std::function<Matrix(double)>& build) const {
  const std::uint64_t key = std::bit_cast<std::uint64_t>(gamma);
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto fresh = std::make_shared<const SpdFactorization>(build(gamma));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.emplace(key, std::move(fresh));
  return it->second;
}

ConvexQuadratic::ConvexQuadratic(Matrix q_mat, Vector q_vec)
    : q_mat_(std::move(q_mat)), q_vec_(std::move(q_vec)) {
  if (q_mat_.rows() != q_mat_.cols() || q_mat_.rows() != q_vec_.size()) {
    throw DimensionMismatch("ConvexQuadratic: Q and q dimensions disagree");
  }
  if (symmetry_error(q_mat_) > 1e-12) {
    throw NotSymmetric("ConvexQuadratic: Q is not symmetric");
  }
}

double ConvexQuadratic::value(const Vector& x) const {
  check_dim(dim(), x.size(), "quad_value: dimension mismatch");
  return 0.5 * x.dot(q_mat_ * x) + q_vec_.dot(x);
}

Vector ConvexQuadratic::gradient(const Vector& x) const {
  check_dim(dim(), x.size(), "quad gradient: dimension mismatch");
  return q_mat_ * x + q_vec_;
}

std::shared_ptr<const SpdFactorization> ConvexQuadratic::factor(double gamma) const {
  return cache_.get(gamma, [this](double g) -> Matrix {
    return Matrix::Identity(dim(), dim()) + g * q_mat_;
  });
}

Vector ConvexQuadratic::prox(double gamma, const Vector& x) const {
  if (gamma <= 0.0) throw BadParameters("quad_prox: gamma must be positive");
  check_dim(dim(), x.size(), "quad_prox: dimension mismatch");
  return factor(gamma)->solve(x - gamma * q_vec_);
}

Vector ConvexQuadratic::resolvent_solve(double gamma, const Vector& v) const {
  if (gamma <= 0.0) throw BadParameters("resolvent_solve: gamma must be positive");
  check_dim(dim(), v.size(), "resolvent_solve: dimension mismatch");
  return factor(gamma)->solve(v);
}

LeastSquaresQuadratic::LeastSquaresQuadratic(Matrix a, Vector b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != b_.size()) {
    throw DimensionMismatch("LeastSquaresQuadratic: A rows and b length disagree");
  }
  gram_ = a_.transpose() * a_;
  gram_ = 0.5 * (gram_ + gram_.transpose());
  atb_ = a_.transpose() * b_;
}

double LeastSquaresQuadratic::value(const Vector& x) const {
  check_dim(dim(), x.size(), "ls value: dimension mismatch");
  return 0.5 * (a_ * x - b_).squaredNorm();
}

Vector LeastSquaresQuadratic::gradient(const Vector& x) const {
  check_dim(dim(), x.size(), "ls gradient: dimension mismatch");
  return a_.transpose() * (a_ * x - b_);
}

std::shared_ptr<const SpdFactorization> LeastSquaresQuadratic::factor(double gamma) const {
  return cache_.get(gamma, [this](double g) -> Matrix {
    return gram_ + (1.0 / g) * Matrix::Identity(dim(), dim());
  });
}

Vector LeastSquaresQuadratic::prox(double gamma, const Vector& x) const {
  if (gamma <= 0.0) throw BadParameters("ls_prox: gamma must be positive");
  check_dim(dim(), x.size(), "ls_prox: dimension mismatch");
  return factor(gamma)->solve(atb_ + x / gamma);
}

Vector LeastSquaresQuadratic::resolvent_solve(double gamma, const Vector& v) const {
  if (gamma <= 0.0) throw BadParameters("resolvent_solve: gamma must be positive");
  check_dim(dim(), v.size(), "resolvent_solve: dimension mismatch");
  // (I + gamma A'A)^{-1} v = (A'A + gamma^{-1} I)^{-1} v / gamma
  return factor(gamma)->solve(v) / gamma;
}

ProxFunction ProxFunction::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) {
    throw DimensionMismatch("ProxFunction::box: bound lengths disagree");
  }
  if ((lower.array() > upper.array()).any()) {
    throw BadParameters("ProxFunction::box: requires lower <= upper componentwise");
  }
  ProxFunction g(ProxKind::BoxIndicator, lower.size());
  g.lower_ = std::move(lower);
  g.upper_ = std::move(upper);
  return g;
}

ProxFunction ProxFunction::l1(double rho, Index dim) {
  if (rho <= 0.0) throw BadParameters("ProxFunction::l1: rho must be positive");
  ProxFunction g(ProxKind::L1Norm, dim);
  g.rho_ = rho;
  return g;
}

ProxFunction ProxFunction::zero(Index dim) { return ProxFunction(ProxKind::Zero, dim); }

Vector ProxFunction::prox(double gamma, const Vector& x) const {
  if (gamma <= 0.0) throw BadParameters("prox_g: gamma must be positive");
  check_dim(dim_, x.size(), "prox_g: dimension mismatch");
  switch (kind_) {
    case ProxKind::BoxIndicator:
      return x.cwiseMax(lower_).cwiseMin(upper_);
    case ProxKind::L1Norm: {
      const double t = gamma * rho_;
      return x.unaryExpr([t](double v) {
        const double m = std::abs(v) - t;
        return m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
      });
    }
    case ProxKind::Zero:
      return x;
  }
  throw Error("prox_g: unreachable");
}

double ProxFunction::value(const Vector& x) const {
  check_dim(dim_, x.size(), "g_value: dimension mismatch");
  switch (kind_) {
    case ProxKind::BoxIndicator: {
      const double width = dim_ > 0 ? (upper_ - lower_).lpNorm<Eigen::Infinity>() : 0.0;
      const double tol = 1e-9 * (1.0 + width);
      const bool inside = (x.array() >= lower_.array() - tol).all() &&
                          (x.array() <= upper_.array() + tol).all();
      return inside ? 0.0 : kInfinity;
    }
    case ProxKind::L1Norm:
      return rho_ * x.lpNorm<1>();
    case ProxKind::Zero:
      return 0.0;
  }
  throw Error("g_value: unreachable");
}

}  // namespace dre
