#include <doctest.h>

#include <thread>

#include "dre/functions.hpp"
#include "dre/rng.hpp"
#include "oracles.hpp"

using namespace dre;

namespace {

Vector random_vec(SplitMix64& rng, Index n, double scale = 3.0) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = scale * rng.next_gaussian();
  return v;
}

Matrix random_psd(SplitMix64& rng, Index n, double ridge = 0.0) {
  Matrix r(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) r(i, j) = rng.next_gaussian();
  Matrix q = r.transpose() * r + ridge * Matrix::Identity(n, n);
  return 0.5 * (q + q.transpose());
}

Vector fd_gradient(const std::function<double(const Vector&)>& fn, const Vector& x) {
  const double h = 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>());
  Vector g(x.size());
  Vector p = x;
  for (Index i = 0; i < x.size(); ++i) {
    p(i) = x(i) + h;
    const double up = fn(p);
    p(i) = x(i) - h;
    const double dn = fn(p);
    p(i) = x(i);
    g(i) = (up - dn) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("quad_value matches hand and oracle computations") {
  Vector x(2);
  x << 3, 4;
  CHECK(ConvexQuadratic(Matrix::Identity(2, 2), Vector::Zero(2)).value(x) ==
        doctest::Approx(12.5));

  Vector ones(2);
  ones << 1, 1;
  Vector x2(2);
  x2 << 2, 3;
  CHECK(ConvexQuadratic(Matrix::Zero(2, 2), ones).value(x2) == doctest::Approx(5.0));

  SplitMix64 rng = substream(50, 0);
  const Matrix q = random_psd(rng, 6);
  const Vector lin = random_vec(rng, 6, 1.0);
  const Vector xr = random_vec(rng, 6);
  const ConvexQuadratic f(q, lin);
  CHECK(std::abs(f.value(xr) - oracles::naive_quadratic_value(q, lin, xr)) <=
        1e-12 * (1.0 + std::abs(f.value(xr))));

  CHECK_THROWS_AS(f.value(Vector::Zero(5)), DimensionMismatch);
}

TEST_CASE("quad_prox closed forms and stationarity residual") {
  Vector x(2);
  x << 2, 4;
  const Vector p = ConvexQuadratic(Matrix::Identity(2, 2), Vector::Zero(2)).prox(1.0, x);
  CHECK(p(0) == doctest::Approx(1.0));
  CHECK(p(1) == doctest::Approx(2.0));

  SplitMix64 rng = substream(51, 0);
  const Vector q_lin = random_vec(rng, 3, 1.0);
  const Vector x3 = random_vec(rng, 3);
  const ConvexQuadratic lin_f(Matrix::Zero(3, 3), q_lin);
  CHECK((lin_f.prox(0.3, x3) - (x3 - 0.3 * q_lin)).norm() <= 1e-14);

  const Matrix q = random_psd(rng, 6, 1.0);
  const ConvexQuadratic f(q, random_vec(rng, 6, 1.0));
  const double gamma = 0.7;
  const Vector xr = random_vec(rng, 6);
  const Vector pr = f.prox(gamma, xr);
  const double resid = (f.gradient(pr) + (pr - xr) / gamma).norm();
  CHECK(resid <= 1e-9 * (1.0 + xr.norm() / gamma));
}

TEST_CASE("ls_prox agrees with the equivalent explicit quadratic") {
  LeastSquaresQuadratic tiny(Matrix::Identity(1, 1), Vector::Zero(1));
  Vector two(1);
  two << 2.0;
  CHECK(tiny.prox(1.0, two)(0) == doctest::Approx(1.0));

  LeastSquaresQuadratic zero_a(Matrix::Zero(3, 2), Vector::Zero(3));
  SplitMix64 rng = substream(52, 0);
  const Vector x2 = random_vec(rng, 2);
  CHECK((zero_a.prox(0.9, x2) - x2).norm() <= 1e-14);

  Matrix a(4, 7);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 7; ++j) a(i, j) = rng.next_gaussian();
  const Vector b = random_vec(rng, 4, 1.0);
  const LeastSquaresQuadratic ls(a, b);
  const ConvexQuadratic equiv(a.transpose() * a, -a.transpose() * b);
  for (double gamma : {0.2, 1.0, 3.5}) {
    const Vector xr = random_vec(rng, 7);
    CHECK((ls.prox(gamma, xr) - equiv.prox(gamma, xr)).norm() <= 1e-10);
  }
  CHECK(std::abs(ls.value(Vector::Zero(7)) - 0.5 * b.squaredNorm()) <= 1e-12);
}

TEST_CASE("prox_g closed forms") {
  Vector l(2), u(2), x(2);
  l << 0, 0;
  u << 1, 1;
  x << 3, -2;
  const Vector clamped = ProxFunction::box(l, u).prox(1.0, x);
  CHECK(clamped(0) == doctest::Approx(1.0));
  CHECK(clamped(1) == doctest::Approx(0.0));

  Vector x3(3);
  x3 << 2, -0.3, 0;
  const Vector st = ProxFunction::l1(1.0, 3).prox(0.5, x3);
  CHECK(st(0) == doctest::Approx(1.5));
  CHECK(st(1) == doctest::Approx(0.0));
  CHECK(st(2) == doctest::Approx(0.0));

  SplitMix64 rng = substream(53, 0);
  const Vector xr = random_vec(rng, 5);
  CHECK((ProxFunction::zero(5).prox(2.0, xr) - xr).norm() == 0.0);

  CHECK_THROWS_AS(ProxFunction::box(u, l), BadParameters);
  CHECK_THROWS_AS(ProxFunction::l1(0.0, 3), BadParameters);
  CHECK_THROWS_AS(ProxFunction::zero(3).prox(1.0, Vector::Zero(2)), DimensionMismatch);
}

TEST_CASE("g_value indicator, l1 and zero") {
  Vector l(2), u(2);
  l << 0, 0;
  u << 1, 1;
  const auto box = ProxFunction::box(l, u);
  Vector inside(2), outside(2);
  inside << 0.5, 1.0;
  outside << 2.0, 0.0;
  CHECK(box.value(inside) == 0.0);
  CHECK(box.value(outside) == kInfinity);

  Vector x(2);
  x << 1, -3;
  CHECK(ProxFunction::l1(2.0, 2).value(x) == doctest::Approx(8.0));
  CHECK(ProxFunction::zero(2).value(x) == 0.0);
}

TEST_CASE("moreau_value closed cases") {
  const ConvexQuadratic half_sq(Matrix::Identity(1, 1), Vector::Zero(1));
  Vector two(1);
  two << 2.0;
  CHECK(moreau_value(half_sq, 1.0, two) == doctest::Approx(1.0));

  SplitMix64 rng = substream(54, 0);
  const Vector xr = random_vec(rng, 4);
  CHECK(moreau_value(ProxFunction::zero(4), 0.8, xr) == 0.0);

  const auto box01 = ProxFunction::box(Vector::Zero(1), Vector::Ones(1));
  CHECK(moreau_value(box01, 1.0, two) == doctest::Approx(0.5));
}

TEST_CASE("moreau_gradient formula and finite differences") {
  SplitMix64 rng = substream(55, 0);
  const Vector xr = random_vec(rng, 4);
  CHECK(moreau_gradient(ProxFunction::zero(4), 1.3, xr).norm() == 0.0);

  const ConvexQuadratic half_sq(Matrix::Identity(4, 4), Vector::Zero(4));
  CHECK((moreau_gradient(half_sq, 1.0, xr) - 0.5 * xr).norm() <= 1e-12);

  const auto box = ProxFunction::box(Vector::Constant(4, -0.5), Vector::Constant(4, 1.0));
  const auto l1 = ProxFunction::l1(0.7, 4);
  for (int t = 0; t < 20; ++t) {
    const double gamma = 0.2 + rng.next_uniform();
    const Vector x = random_vec(rng, 4, 2.0);
    for (int which = 0; which < 2; ++which) {
      const ProxFunction& h = which ? box : l1;
      const Vector g_an = moreau_gradient(h, gamma, x);
      const Vector g_fd =
          fd_gradient([&](const Vector& v) { return moreau_value(h, gamma, v); }, x);
      CHECK((g_an - g_fd).norm() <= 1e-5 * (1.0 + g_an.norm()));
    }
  }
}

TEST_CASE("prox three-point inequality across variants") {
  SplitMix64 rng = substream(56, 0);
  const Index n = 6;
  const ProxFunction variants[] = {
      ProxFunction::box(Vector::Constant(n, -1.0), Vector::Constant(n, 2.0)),
      ProxFunction::l1(0.8, n), ProxFunction::zero(n)};
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const auto& h = variants[t % 3];
    const double gamma = 0.05 + 2.0 * rng.next_uniform();
    const Vector y = random_vec(rng, n);
    Vector z = random_vec(rng, n);
    if (h.kind() == ProxKind::BoxIndicator) z = h.prox(1.0, z);
    if (!std::isfinite(h.value(z))) continue;
    const Vector p = h.prox(gamma, y);
    const double lhs = h.value(z) + (z - y).squaredNorm() / (2.0 * gamma);
    const double rhs = h.value(p) + (p - y).squaredNorm() / (2.0 * gamma) +
                       (z - p).squaredNorm() / (2.0 * gamma);
    CHECK(lhs >= rhs - 1e-9);
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("prox nonexpansiveness, 200 pairs per variant") {
  SplitMix64 rng = substream(57, 0);
  const Index n = 6;
  const ConvexQuadratic quad(random_psd(rng, n, 0.5), Vector::Zero(n));
  const ProxFunction box =
      ProxFunction::box(Vector::Constant(n, -0.7), Vector::Constant(n, 0.7));
  const ProxFunction l1 = ProxFunction::l1(1.1, n);
  const ProxFunction zero = ProxFunction::zero(n);
  for (int t = 0; t < 200; ++t) {
    const double gamma = 0.05 + 2.0 * rng.next_uniform();
    const Vector x1 = random_vec(rng, n);
    const Vector x2 = random_vec(rng, n);
    const double d = (x1 - x2).norm() + 1e-10;
    CHECK((box.prox(gamma, x1) - box.prox(gamma, x2)).norm() <= d);
    CHECK((l1.prox(gamma, x1) - l1.prox(gamma, x2)).norm() <= d);
    CHECK((zero.prox(gamma, x1) - zero.prox(gamma, x2)).norm() <= d);
    CHECK((quad.prox(gamma, x1) - quad.prox(gamma, x2)).norm() <= d);
  }
}

TEST_CASE("moreau gradient is 1/gamma Lipschitz") {
  SplitMix64 rng = substream(58, 0);
  const Index n = 5;
  const ProxFunction variants[] = {
      ProxFunction::box(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)),
      ProxFunction::l1(0.9, n), ProxFunction::zero(n)};
  for (int t = 0; t < 200; ++t) {
    const auto& h = variants[t % 3];
    const double gamma = 0.05 + 2.0 * rng.next_uniform();
    const Vector x1 = random_vec(rng, n);
    const Vector x2 = random_vec(rng, n);
    const double lhs = (moreau_gradient(h, gamma, x1) - moreau_gradient(h, gamma, x2)).norm();
    CHECK(lhs <= (x1 - x2).norm() / gamma + 1e-10);
  }
}

TEST_CASE("Moreau envelope Hessian eigenvalues stay inside the resolvent band") {
  SplitMix64 rng = substream(59, 0);
  const Index n = 8;
  const Matrix q = random_psd(rng, n, 0.1);
  const ConvexQuadratic f(q, random_vec(rng, n, 1.0));
  const auto ev = extreme_eigenvalues(q);
  const double mu = std::max(ev.min, 0.0);
  const double l = ev.max;
  for (double gamma : {0.1, 0.5, 2.0}) {
    for (int t = 0; t < 30; ++t) {
      const Vector d = random_vec(rng, n, 1.0);
      const Vector v = f.resolvent_solve(gamma, d);
      const double rq = (d.squaredNorm() - d.dot(v)) / gamma / d.squaredNorm();
      CHECK(rq >= mu / (1.0 + gamma * mu) - 1e-9);
      CHECK(rq <= l / (1.0 + gamma * l) + 1e-9);
    }
  }
}

TEST_CASE("factorization cache is consistent under concurrent use") {
  SplitMix64 rng = substream(60, 0);
  const Index n = 12;
  const ConvexQuadratic f(random_psd(rng, n, 0.5), random_vec(rng, n, 1.0));
  const Vector x = random_vec(rng, n);
  const double gammas[] = {0.1, 0.2, 0.4, 0.8};
  std::vector<Vector> expected;
  for (double g : gammas) expected.push_back(f.prox(g, x));

  std::vector<std::thread> workers;
  std::vector<double> errs(8, 0.0);
  for (int w = 0; w < 8; ++w) {
    workers.emplace_back([&, w] {
      double worst = 0.0;
      for (int rep = 0; rep < 50; ++rep) {
        const int gi = (w + rep) % 4;
        worst = std::max(worst, (f.prox(gammas[gi], x) - expected[gi]).norm());
      }
      errs[w] = worst;
    });
  }
  for (auto& t : workers) t.join();
  for (double e : errs) CHECK(e == 0.0);
}
