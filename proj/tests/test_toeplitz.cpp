#include <cmath>
#include <numbers>
#include <random>

#include "bergman/toeplitz.hpp"
#include "doctest.h"

using namespace bergman;
using std::numbers::pi;

namespace {

Eigen::VectorXcd sample(const QuadratureGrid& g, const std::function<cplx(const Point&)>& f) {
  Eigen::VectorXcd v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.nodes[i]);
  return v;
}

const SymbolFn one = [](const Point&) { return cplx(1.0); };

}  // namespace

TEST_CASE("discretize and apply") {
  const Domain disc = Domain::disc();
  const auto g = build_grid(disc, 10, 64);
  const DiscreteOperator zero = discretize(disc, g, g, [](const Point&) { return cplx(0.0); });
  CHECK(zero.apply(Eigen::VectorXcd::Ones(g.size())).norm() == 0.0);

  const auto pts = point_grid(disc, {{0.0, 0.0}});
  const DiscreteOperator row = discretize(disc, g, pts, one);
  const Eigen::MatrixXcd M = row.dense();
  for (std::size_t j = 0; j < g.size(); ++j)
    CHECK(std::abs(M(0, j) - g.weights[j] / pi) < 1e-15);

  const DiscreteOperator P = discretize(disc, g, g, one);
  CHECK(P.apply(Eigen::VectorXcd::Zero(g.size())).norm() == 0.0);
  CHECK_THROWS_AS(bergman::apply(P, Eigen::VectorXcd(Eigen::VectorXcd::Ones(3))), std::invalid_argument);
}

TEST_CASE("projection fixes holomorphic samples and kills antiholomorphic ones") {
  const Domain disc = Domain::disc();
  GridSpec s;
  s.levels = 12;
  s.angular = 64;
  s.order = 2;
  const auto g = build_grid(disc, s);
  const DiscreteOperator P = discretize(disc, g, g, one);
  const Eigen::VectorXcd z = sample(g, [](const Point& w) { return w[0]; });
  const Eigen::VectorXcd zb = sample(g, [](const Point& w) { return std::conj(w[0]); });
  const Eigen::VectorXcd Pz = P.apply(z), Pzb = P.apply(zb);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.r_abs[i] < 0.3) continue;
    e1 = std::max(e1, std::abs(Pz[i] - z[i]));
    e2 = std::max(e2, std::abs(Pzb[i]));
  }
  CHECK(e1 < 1e-3);
  CHECK(e2 < 1e-3);
}

TEST_CASE("ring and dense paths agree") {
  const Domain disc = Domain::disc();
  GridSpec s;
  s.levels = 6;
  s.angular = 8;
  s.whitney = true;
  const auto g = build_grid(disc, s);
  const SymbolFn psi = kernel_power_symbol(disc, 0.25);
  const DiscreteOperator fast = discretize(disc, g, g, psi, "a", true);
  const DiscreteOperator slow = discretize(disc, g, g, psi, "a", false);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> G;
  Eigen::VectorXcd u(g.size()), v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    u[i] = cplx(G(rng), G(rng));
    v[i] = cplx(G(rng), G(rng));
  }
  CHECK((fast.apply(u) - slow.apply(u)).norm() <= 1e-11 * slow.apply(u).norm());
  CHECK((fast.apply_adjoint(u) - slow.apply_adjoint(u)).norm() <= 1e-11 * slow.apply_adjoint(u).norm());
  CHECK((fast.dense() - slow.dense()).norm() <= 1e-11 * slow.dense().norm());
  const cplx lhs = v.dot(slow.apply(u)), rhs = slow.apply_adjoint(v).dot(u);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
}

TEST_CASE("power method on small operators") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(4, 4);
  D.diagonal() << 1.0, cplx(0.0, -3.0), 2.0, 0.5;
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(4, 0.25);
  const DiscreteOperator diag(std::make_shared<DenseKernel>(D), Eigen::VectorXcd::Constant(4, 4.0), w, w,
                              "diag");
  for (double p : {1.5, 2.0, 4.0}) CHECK(estimate_norm_pq(diag, p, p).estimate == doctest::Approx(3.0).epsilon(1e-5));

  std::mt19937_64 rng(8);
  std::normal_distribution<double> G;
  const int n = 30;
  Eigen::VectorXcd a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = cplx(G(rng), G(rng));
    b[i] = cplx(G(rng), G(rng));
  }
  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) mu[i] = 0.5 + std::abs(G(rng));
  const DiscreteOperator rank1(std::make_shared<DenseKernel>(a * b.adjoint()), Eigen::VectorXcd::Ones(n), mu, mu,
                               "rank1");
  for (auto [p, q] : {std::pair{2.0, 2.0}, {2.0, 4.0}, {1.5, 3.0}}) {
    const double pc = p / (p - 1);
    double na = 0.0, nb = 0.0;
    for (int i = 0; i < n; ++i) {
      na += mu[i] * std::pow(std::abs(a[i]), q);
      nb += mu[i] * std::pow(std::abs(b[i]), pc);
    }
    const double exact = std::pow(na, 1 / q) * std::pow(nb, 1 / pc);
    CHECK(estimate_norm_pq(rank1, p, q).estimate == doctest::Approx(exact).epsilon(1e-5));
  }
}

TEST_CASE("power method against the dense singular value") {
  for (const Domain& d : {Domain::disc(), Domain::egg(2)}) {
    GridSpec s;
    s.levels = d.n() == 1 ? 8 : 4;
    s.angular = d.n() == 1 ? 32 : 6;
    s.tangential = 2;
    const auto g = build_grid(d, s);
    REQUIRE(g.size() <= 400);
    for (double alpha : {0.0, 0.25}) {
      const DiscreteOperator op = discretize(d, g, g, kernel_power_symbol(d, alpha), "", false);
      const double exact = dense_norm_22(op);
      const double est = estimate_norm_pq(op, 2, 2).estimate;
      CHECK(est <= exact * (1 + 1e-9));
      CHECK(est >= exact * 0.99);
    }
  }
}

TEST_CASE("property: norm is monotone under entrywise modulus") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> G;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 12;
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = cplx(G(rng), G(rng));
    const Eigen::MatrixXcd B = A.cwiseAbs().cast<cplx>();
    const Eigen::VectorXd mu = Eigen::VectorXd::Ones(n);
    const double p = 1.2 + 3 * U(rng), q = p + 2 * U(rng);
    const DiscreteOperator oa(std::make_shared<DenseKernel>(A), Eigen::VectorXcd::Ones(n), mu, mu, "");
    const DiscreteOperator ob(std::make_shared<DenseKernel>(B), Eigen::VectorXcd::Ones(n), mu, mu, "");
    PowerOptions po;
    po.restarts = 20;
    CHECK(estimate_norm_pq(oa, p, q, po).estimate <= estimate_norm_pq(ob, p, q, po).estimate * (1 + 1e-6));
  }
}

TEST_CASE("discrete projection norm") {
  GridSpec s;
  s.levels = 10;
  s.angular = 16;
  s.whitney = true;
  const Domain disc = Domain::disc();
  const auto g = build_grid(disc, s);
  const DiscreteOperator P = discretize(disc, g, g, one);
  PowerOptions po;
  po.restarts = 3;
  const double e = estimate_norm_pq(P, 2, 2, po).estimate;
  CHECK(e >= 0.95);
  CHECK(e <= 1.02);
}

TEST_CASE("projection check") {
  const Domain disc = Domain::disc();
  GridSpec s;
  s.levels = 10;
  s.angular = 64;
  const auto r = projection_check(disc, s, {{{0.0, 0.0}, {0.0, 0.0}}, {{0.5, 0.0}, {0.0, 0.0}}});
  CHECK(r.residuals[0] < 1e-12);
  CHECK(r.residuals[1] < 1e-3);
  CHECK(r.nodes_refined > r.nodes);
  GridSpec b;
  b.levels = 8;
  b.angular = 8;
  b.tangential = 2;
  const auto rb = projection_check(Domain::ball2(), b, {{{0.0, 0.0}, {0.0, 0.0}}});
  CHECK(rb.residuals[0] < 1e-9);
}

TEST_CASE("sharpness sweep") {
  const Domain disc = Domain::disc();
  const auto deltas = log_spaced(1e-4, 1e-1, 7);
  const SweepReport rep = sharpness_sweep(disc, 2, 4, {0.15, 0.25, 1.0}, axis_ray(disc, deltas));
  for (const char* c : {"delta", "alpha", "Q", "Q_err", "K", "K_power", "ratio"}) CHECK_NOTHROW(rep.column(c));
  CHECK(rep.rows.size() == 21);
  std::vector<double> x, y15, y25, y1;
  for (const auto& row : rep.rows) {
    const double a = row[rep.column("alpha")], ratio = row[rep.column("ratio")];
    CHECK(row[rep.column("Q_err")] <= 1e-5 * row[rep.column("Q")]);
    if (a == 0.15) {
      x.push_back(row[rep.column("delta")]);
      y15.push_back(ratio);
    } else if (a == 0.25) {
      y25.push_back(ratio);
    } else {
      y1.push_back(ratio);
    }
  }
  CHECK(loglog_slope(x, y15) == doctest::Approx(-0.2).epsilon(0.2));
  CHECK(*std::max_element(y25.begin(), y25.end()) / *std::min_element(y25.begin(), y25.end()) <= 8.0);
  CHECK(*std::max_element(y1.begin(), y1.end()) < 1.0);
}

TEST_CASE("norm sweep threshold alpha") {
  NormSweepOptions o;
  o.coarse.levels = 5;
  o.coarse.angular = 8;
  o.coarse.whitney = true;
  o.fine = o.coarse.refined();
  o.power.restarts = 2;
  const SweepReport r = norm_sweep(Domain::disc(), {{2.0, 4.0}, {2.0, 2.0}}, {}, o);
  CHECK(r.rows.size() == 4);
  for (const auto& row : r.rows) {
    const double p = row[r.column("p")], q = row[r.column("q")];
    CHECK(row[r.column("alpha")] == doctest::Approx(1 / p - 1 / q));
  }
  const SweepReport f = norm_sweep(Domain::disc(), {{2.0, 4.0}}, {0.5, NAN}, o);
  CHECK(f.values("alpha") == std::vector<double>{0.5, 0.25, 0.5, 0.25});
}

TEST_CASE("L1 to Linf kernel bound") {
  const Domain disc = Domain::disc();
  const auto pts = point_grid(disc, {{0.5, 0.0}});
  CHECK(linf_check(disc, pts).sup == doctest::Approx(1.0).epsilon(1e-14));
  GridSpec a, b;
  a.depth = 1e-4;
  a.angular = 64;
  b = a;
  b.depth = 1e-5;
  const double s1 = linf_check(disc, build_grid(disc, a)).sup;
  const double s2 = linf_check(disc, build_grid(disc, b)).sup;
  CHECK(s1 <= 4.0 + 1e-9);
  CHECK(s2 <= 4.0 + 1e-9);
  CHECK(std::abs(s2 / s1 - 1.0) <= 0.1);
}
