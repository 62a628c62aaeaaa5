#pragma once

#include <Eigen/Dense>

#include "dre/errors.hpp"

namespace dre {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Relative deviation from symmetry, ‖M - M'‖_F / max(1, ‖M‖_F).
double symmetry_error(const Matrix& m);

// Cholesky factorization of a symmetric positive-definite matrix.
// The input is symmetrized as (M + M')/2 before factoring; inputs whose
// symmetry error exceeds 1e-12 are rejected.
class SpdFactorization {
 public:
  explicit SpdFactorization(const Matrix& m);

  Index dim() const { return n_; }
  Vector solve(const Vector& b) const;
  Matrix reconstruct() const { return llt_.reconstructedMatrix(); }

 private:
  Eigen::LLT<Matrix> llt_;
  Index n_;
};

SpdFactorization factor_spd(const Matrix& m);
Vector solve_with(const SpdFactorization& f, const Vector& b);

struct ExtremeEigenvalues {
  double min;  // mu
  double max;  // l
};

// Smallest and largest eigenvalue of a symmetric matrix.
ExtremeEigenvalues extreme_eigenvalues(const Matrix& q);

}  // namespace dre
