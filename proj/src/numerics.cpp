#include "dre/numerics.hpp"

namespace dre {

namespace {
constexpr double kSymmetryTol = 1e-12;
}

double symmetry_error(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, m.norm());
  return (m - m.transpose()).norm() / scale;
}

SpdFactorization::SpdFactorization(const Matrix& m) : n_(m.rows()) {
  if (m.rows() != m.cols()) {
    throw NotSymmetric("factor_spd: matrix is not square");
  }
  if (symmetry_error(m) > kSymmetryTol) {
    throw NotSymmetric("factor_spd: matrix is not symmetric to 1e-12");
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  llt_.compute(sym);
  if (llt_.info() != Eigen::Success) {
    throw NotPositiveDefinite("factor_spd: nonpositive pivot during factorization");
  }
}

Vector SpdFactorization::solve(const Vector& b) const {
  if (b.size() != n_) {
    throw DimensionMismatch("solve_with: rhs length does not match factor dimension");
  }
  return llt_.solve(b);
}

SpdFactorization factor_spd(const Matrix& m) { return SpdFactorization(m); }

Vector solve_with(const SpdFactorization& f, const Vector& b) { return f.solve(b); }

ExtremeEigenvalues extreme_eigenvalues(const Matrix& q) {
  if (q.rows() != q.cols()) {
    throw NotSymmetric("extreme_eigenvalues: matrix is not square");
  }
  if (symmetry_error(q) > kSymmetryTol) {
    throw NotSymmetric("extreme_eigenvalues: matrix is not symmetric to 1e-12");
  }
  const Matrix sym = 0.5 * (q + q.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("extreme_eigenvalues: eigenvalue iteration did not converge");
  }
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

}  // namespace dre
