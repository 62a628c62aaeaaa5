#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "dre/solvers.hpp"
#include "dre/textio.hpp"

namespace dre {

// Box-constrained quadratic program: minimize 1/2 x'Qx + q'x over [l, u].
// Q has eigenvalues log-uniform in [1/cond, 1], so L_f is normalized to 1.
struct BoxQpInstance {
  Matrix q_mat;
  Vector q_vec;
  Vector lower, upper;
  std::uint64_t seed = 0;
  double cond = 1.0;

  CompositeProblem problem() const;
};

// l1-regularized least squares, minimize 1/2 ‖Ax - b‖² + rho ‖x‖_1, built
// around a planted solution certified through the subgradient optimality
// condition A'(A x - b) + rho s = 0, s in the l1 subdifferential at x_plant.
struct SparseLsInstance {
  Matrix a;
  Vector b;
  double rho = 1.0;
  Vector x_plant;
  std::uint64_t seed = 0;

  CompositeProblem problem() const;
  double plant_objective() const;
  // Worst violation of the optimality condition at x_plant (sign match on
  // the support, unit bound off it).
  double certificate_residual() const;
};

BoxQpInstance gen_box_qp(Index n, std::uint64_t seed, double cond, double box_width);
SparseLsInstance gen_sparse_ls(Index m, Index n, std::uint64_t seed, double rho, Index nnz);

struct ReferenceSolution {
  Vector x_star;   // solution of the composite problem, P(x_tilde)
  Vector x_tilde;  // fixed point of the splitting iteration
  double f_star;   // F(G(x_tilde))
  double residual; // achieved ‖Z(x_tilde)‖ / (1 + ‖x_tilde‖)
};

// High-accuracy solve with the accelerated method (strongly convex momentum
// when mu_f > 0), stopping at relative residual 1e-13.
ReferenceSolution reference_solve(const CompositeProblem& prob, double gamma);

// Plain-text fixtures, written as labeled matrix blocks.
void save_box_qp(const BoxQpInstance& inst, std::ostream& os);
BoxQpInstance load_box_qp(std::istream& is);
void save_sparse_ls(const SparseLsInstance& inst, std::ostream& os);
SparseLsInstance load_sparse_ls(std::istream& is);

}  // namespace dre
