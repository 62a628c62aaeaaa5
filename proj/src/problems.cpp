#include "dre/problems.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <vector>

#include "dre/rng.hpp"

namespace dre {

namespace {

// Substream ids per instance component.
enum Stream : std::uint64_t {
  kEigenvalues = 0,
  kBasis = 1,
  kLinear = 2,
  kDesign = 3,
  kSupport = 4,
  kPlantValues = 5,
};

Matrix gaussian_matrix(SplitMix64& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
  }
  return m;
}

// Orthogonal factor of a Gaussian matrix, columns sign-fixed so the result
// is a deterministic function of the input.
Matrix random_orthogonal(SplitMix64& rng, Index n) {
  const Matrix g = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix v = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) v.col(j) = -v.col(j);
  }
  return v;
}

}  // namespace

CompositeProblem BoxQpInstance::problem() const {
  return CompositeProblem(ConvexQuadratic(q_mat, q_vec), ProxFunction::box(lower, upper));
}

CompositeProblem SparseLsInstance::problem() const {
  return CompositeProblem(LeastSquaresQuadratic(a, b), ProxFunction::l1(rho, a.cols()));
}

double SparseLsInstance::plant_objective() const {
  return 0.5 * (a * x_plant - b).squaredNorm() + rho * x_plant.lpNorm<1>();
}

double SparseLsInstance::certificate_residual() const {
  const Vector s = -(a.transpose() * (a * x_plant - b)) / rho;
  double worst = 0.0;
  for (Index i = 0; i < x_plant.size(); ++i) {
    if (x_plant(i) != 0.0) {
      worst = std::max(worst, std::abs(s(i) - (x_plant(i) > 0.0 ? 1.0 : -1.0)));
    } else {
      worst = std::max(worst, std::abs(s(i)) - 1.0);
    }
  }
  return worst;
}

BoxQpInstance gen_box_qp(Index n, std::uint64_t seed, double cond, double box_width) {
  if (n < 1) throw BadParameters("gen_box_qp: n must be >= 1");
  if (cond < 1.0) throw BadParameters("gen_box_qp: cond must be >= 1");
  if (!(box_width > 0.0)) throw BadParameters("gen_box_qp: box_width must be positive");

  // Eigenvalues log-uniform in [1/cond, 1], endpoints pinned so the extreme
  // eigenvalues (and hence L_f = 1) are exact.
  SplitMix64 eig_rng = substream(seed, kEigenvalues);
  Vector lam(n);
  for (Index i = 0; i < n; ++i) {
    lam(i) = std::exp((eig_rng.next_uniform() - 1.0) * std::log(cond));
  }
  lam(n - 1) = 1.0;
  if (n > 1) lam(0) = 1.0 / cond;

  SplitMix64 basis_rng = substream(seed, kBasis);
  const Matrix v = random_orthogonal(basis_rng, n);
  Matrix q_mat = v * lam.asDiagonal() * v.transpose();
  q_mat = 0.5 * (q_mat + q_mat.transpose());

  SplitMix64 lin_rng = substream(seed, kLinear);
  Vector q_vec(n);
  for (Index i = 0; i < n; ++i) q_vec(i) = lin_rng.next_gaussian();

  BoxQpInstance inst;
  inst.q_mat = std::move(q_mat);
  inst.q_vec = std::move(q_vec);
  inst.lower = Vector::Constant(n, -box_width);
  inst.upper = Vector::Constant(n, box_width);
  inst.seed = seed;
  inst.cond = cond;
  return inst;
}

SparseLsInstance gen_sparse_ls(Index m, Index n, std::uint64_t seed, double rho, Index nnz) {
  if (nnz < 1 || nnz > m || m >= n) {
    throw BadParameters("gen_sparse_ls: requires 1 <= nnz <= m < n");
  }
  if (!(rho > 0.0)) throw BadParameters("gen_sparse_ls: rho must be positive");

  SplitMix64 design_rng = substream(seed, kDesign);
  Matrix a = gaussian_matrix(design_rng, m, n);
  for (Index j = 0; j < n; ++j) a.col(j).normalize();

  // Support, signs and magnitudes are redrawn on the rare attempts where the
  // least-norm dual certificate is not strictly inside the unit ball.
  for (int attempt = 0; attempt < 20; ++attempt) {
    SplitMix64 supp_rng = substream(seed, kSupport + 16 * attempt);
    std::vector<Index> idx(n);
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index i = 0; i < nnz; ++i) {
      const Index j = i + Index(supp_rng.next_u64() % std::uint64_t(n - i));
      std::swap(idx[i], idx[j]);
    }
    std::vector<Index> support(idx.begin(), idx.begin() + nnz);
    std::sort(support.begin(), support.end());

    SplitMix64 val_rng = substream(seed, kPlantValues + 16 * attempt);
    Vector x_plant = Vector::Zero(n);
    Vector sign_s(nnz);
    Matrix a_s(m, nnz);
    for (Index i = 0; i < nnz; ++i) {
      const double sgn = (val_rng.next_u64() & 1u) ? 1.0 : -1.0;
      sign_s(i) = sgn;
      x_plant(support[i]) = sgn * (1.0 + val_rng.next_uniform());
      a_s.col(i) = a.col(support[i]);
    }

    // Least-norm interpolator of the support signs, then alternating
    // projections between the off-support correlation slab |a_j'w| <= 0.95
    // and the affine set A_S'w = sign_S. The final projection is the affine
    // one, so the support equalities hold exactly.
    Vector w;
    try {
      const SpdFactorization gram_s = factor_spd(a_s.transpose() * a_s);
      w = a_s * gram_s.solve(sign_s);
      for (int round = 0; round < 500; ++round) {
        Vector corr = a.transpose() * w;
        double off_max = 0.0;
        for (Index j = 0; j < n; ++j) {
          if (x_plant(j) == 0.0) off_max = std::max(off_max, std::abs(corr(j)));
        }
        if (off_max <= 0.99) break;
        for (Index j = 0; j < n; ++j) {
          if (x_plant(j) != 0.0) continue;
          const double c = a.col(j).dot(w);  // columns have unit norm
          if (std::abs(c) > 0.95) {
            w -= (c - 0.95 * (c > 0.0 ? 1.0 : -1.0)) * a.col(j);
          }
        }
        w += a_s * gram_s.solve(sign_s - a_s.transpose() * w);
      }
    } catch (const NotPositiveDefinite&) {
      continue;  // support columns nearly dependent; redraw
    }

    const Vector corr = a.transpose() * w;
    double off_max = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (x_plant(j) == 0.0) off_max = std::max(off_max, std::abs(corr(j)));
    }
    if (off_max > 0.999) continue;

    SparseLsInstance inst;
    inst.a = std::move(a);
    inst.b = inst.a * x_plant + rho * w;
    inst.rho = rho;
    inst.x_plant = std::move(x_plant);
    inst.seed = seed;
    if (inst.certificate_residual() > 1e-10) {
      throw CertificateFailed("gen_sparse_ls: certificate verification failed");
    }
    return inst;
  }
  throw CertificateFailed("gen_sparse_ls: no valid dual certificate after 20 attempts");
}

ReferenceSolution reference_solve(const CompositeProblem& prob, double gamma) {
  if (gamma <= 0.0 || gamma * prob.l_f() >= 1.0) {
    throw GammaTooLarge("reference_solve: requires 0 < gamma < 1/L_f");
  }
  SolverConfig config;
  config.gamma = gamma;
  config.lambda = theorem_stepsize(gamma, prob.l_f());
  config.beta = prob.mu_f() > 0.0 ? BetaSchedule::StronglyConvex : BetaSchedule::Convex;
  config.max_iter = 1000000;
  config.tol = 1e-13;
  config.record_dre = false;
  config.record_objectives = false;

  const Vector x0 = Vector::Zero(prob.dim());
  const IterationTrace trace = run_fast_drs(prob, config, x0);
  if (trace.status != RunStatus::Converged) {
    throw NoConvergence("reference_solve: residual target not reached");
  }

  ReferenceSolution ref;
  ref.x_tilde = trace.x_final;
  ref.x_star = trace.y_final;   // P(x_tilde)
  ref.f_star = prob.objective(trace.z_final);
  ref.residual = trace.records.back().znorm / (1.0 + trace.x_final.norm());
  return ref;
}

namespace {

void write_block(std::ostream& os, const char* name, const Matrix& m) {
  os << name << '\n';
  write_matrix(os, m);
}

void write_block(std::ostream& os, const char* name, const Vector& v) {
  os << name << '\n';
  write_vector(os, v);
}

std::string expect_label(std::istream& is) {
  std::string label;
  if (!(is >> label)) throw BadParameters("instance file: truncated");
  return label;
}

void require_label(std::istream& is, const char* want) {
  if (expect_label(is) != want) throw BadParameters("instance file: unexpected block label");
}

}  // namespace

void save_box_qp(const BoxQpInstance& inst, std::ostream& os) {
  os << "boxqp\nseed " << inst.seed << "\ncond " << format_double(inst.cond) << '\n';
  write_block(os, "Q", inst.q_mat);
  write_block(os, "q", inst.q_vec);
  write_block(os, "l", inst.lower);
  write_block(os, "u", inst.upper);
}

BoxQpInstance load_box_qp(std::istream& is) {
  require_label(is, "boxqp");
  BoxQpInstance inst;
  require_label(is, "seed");
  is >> inst.seed;
  require_label(is, "cond");
  std::string num;
  is >> num;
  inst.cond = parse_double(num);
  require_label(is, "Q");
  inst.q_mat = read_matrix(is);
  require_label(is, "q");
  inst.q_vec = read_vector(is);
  require_label(is, "l");
  inst.lower = read_vector(is);
  require_label(is, "u");
  inst.upper = read_vector(is);
  return inst;
}

void save_sparse_ls(const SparseLsInstance& inst, std::ostream& os) {
  os << "l1ls\nseed " << inst.seed << "\nrho " << format_double(inst.rho) << '\n';
  write_block(os, "A", inst.a);
  write_block(os, "b", inst.b);
  write_block(os, "x_plant", inst.x_plant);
}

SparseLsInstance load_sparse_ls(std::istream& is) {
  require_label(is, "l1ls");
  SparseLsInstance inst;
  require_label(is, "seed");
  is >> inst.seed;
  require_label(is, "rho");
  std::string num;
  is >> num;
  inst.rho = parse_double(num);
  require_label(is, "A");
  inst.a = read_matrix(is);
  require_label(is, "b");
  inst.b = read_vector(is);
  require_label(is, "x_plant");
  inst.x_plant = read_vector(is);
  return inst;
}

}  // namespace dre
