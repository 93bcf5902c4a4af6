#include <cmath>
#include <numbers>
#include <random>

#include "bergman/quadrature.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bergman;
using std::numbers::pi;

TEST_CASE("grid sizes and volumes") {
  const auto disc = build_grid(Domain::disc(), 10, 64);
  CHECK(disc.size() == 640);
  CHECK(disc.weight_sum() == doctest::Approx(pi).epsilon(1e-6));
  const auto one = build_grid(Domain::disc(), 1, 1);
  CHECK(one.size() == 1);
  CHECK(one.weights[0] == doctest::Approx(pi).epsilon(1e-14));
  const auto ball = build_grid(Domain::ball2(), 8, 32);
  CHECK(ball.weight_sum() == doctest::Approx(pi * pi / 2).epsilon(1e-5));
  const auto egg = build_grid(Domain::egg(2), 8, 16);
  CHECK(egg.weight_sum() == doctest::Approx(2 * pi * pi / 3).epsilon(1e-6));
}

TEST_CASE("grid invariants") {
  for (const Domain& d : {Domain::disc(), Domain::ball2(), Domain::egg(3)}) {
    GridSpec s;
    s.levels = 12;
    s.angular = d.n() == 1 ? 32 : 8;
    s.order = 2;
    const auto g = build_grid(d, s);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(g.weights[i] > 0.0);
      CHECK(-d.r(g.nodes[i]) >= s.rfloor);
      CHECK(g.r_abs[i] == doctest::Approx(-d.r(g.nodes[i])).epsilon(1e-9));
    }
    const auto again = build_grid(d, s);
    CHECK(again.nodes == g.nodes);
    CHECK(again.weights == g.weights);
  }
}

TEST_CASE("depth and Whitney modes") {
  GridSpec s;
  s.depth = 1e-3;
  s.angular = 16;
  s.whitney = true;
  const auto edges = s.edges();
  CHECK(edges.front() == 1.0);
  CHECK(edges.back() == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(s.effective_levels() == 11);
  const auto g = build_grid(Domain::disc(), s);
  CHECK(g.rings.size() == 11);
  CHECK(g.rings.back().count == 16u << 10);
  CHECK(g.weight_sum() == doctest::Approx(pi).epsilon(1e-12));
  CHECK(s.refined().depth == doctest::Approx(5e-4));
  CHECK(s.refined().angular == 32);
  GridSpec w = s;
  CHECK_THROWS(build_grid(Domain::ball2(), w));
  GridSpec cap;
  cap.levels = 20;
  cap.angular = 1 << 16;
  cap.node_cap = 1000;
  CHECK_THROWS_AS(build_grid(Domain::disc(), cap), std::length_error);
}

TEST_CASE("one-dimensional rules") {
  const Rule1D gl = gauss_legendre(6);
  double s = 0.0, s10 = 0.0;
  for (std::size_t i = 0; i < gl.x.size(); ++i) {
    s += gl.w[i];
    s10 += gl.w[i] * std::pow(gl.x[i], 10);
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s10 == doctest::Approx(2.0 / 11).epsilon(1e-13));
  const Rule1D one = graded_one_sided(0.0, 1.0, 1e-6, 4);
  double lg = 0.0;
  for (std::size_t i = 0; i < one.x.size(); ++i) lg += one.w[i] * std::log(one.x[i]);
  CHECK(lg == doctest::Approx(-1.0).epsilon(1e-5));
  const Rule1D two = graded_two_sided(0.3, 0.0, 1.0, 1e-5, 6);
  double ab = 0.0;
  for (std::size_t i = 0; i < two.x.size(); ++i) ab += two.w[i] * std::sqrt(std::abs(two.x[i] - 0.3));
  CHECK(ab == doctest::Approx((2.0 / 3) * (std::pow(0.3, 1.5) + std::pow(0.7, 1.5))).epsilon(1e-8));
  const Rule1D per = uniform_periodic(8);
  double c2 = 0.0;
  for (std::size_t i = 0; i < per.x.size(); ++i) c2 += per.w[i] * std::cos(2 * per.x[i]);
  CHECK(std::abs(c2) < 1e-14);
}

TEST_CASE("integrals against oracles") {
  const Domain disc = Domain::disc();
  const Point z{0.5, 0.0};
  const double v = focused_rule(disc, z, FocusSpec{}).integrate(
      [&](const Point& w, double) { return std::abs(disc.kernel(z, w)); });
  CHECK(v == doctest::Approx(oracle::disc_I10_half).epsilon(1e-6));
  const auto g = build_grid(disc, 20, 128);
  const double v2 = integrate_grid(g, [&](const Point& w, double) { return std::abs(disc.kernel(z, w)); });
  CHECK(v2 == doctest::Approx(oracle::disc_I10_half).epsilon(1e-3));
}

TEST_CASE("kappa") {
  CHECK(kappa(2, 0) == 0.5);
  CHECK(kappa(1, -0.5) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(kappa(1.5, 0.5) == doctest::Approx(oracle::kappa_15_05).epsilon(1e-13));
  CHECK(kappa(3, 1) == doctest::Approx(oracle::kappa_3_1).epsilon(1e-13));
  CHECK(kappa_bound(2, 0) == 1.5);
  CHECK(kappa_bound(1, -0.5) == 4.0);
  CHECK_THROWS_AS(kappa(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(kappa(0.5, -0.2), std::invalid_argument);
}

TEST_CASE("property: kappa below its elementary bound") {
  for (int i = 0; i < 20; ++i) {
    const double a = 1.0 + 0.25 * i;
    for (int j = 1; j <= 20; ++j) {
      const double b = -1.0 + (2 * a - 1.0) * j / 21.0;
      CHECK(kappa(a, b) <= kappa_bound(a, b) * (1 + 1e-14));
    }
  }
}

TEST_CASE("reproducing integral") {
  const Domain disc = Domain::disc();
  const IntegralResult r0 = integral_Iab(disc, FocusSpec{}, {0.0, 0.0}, 2, 0);
  CHECK(r0.value == doctest::Approx(1.0 / pi).epsilon(1e-9));
  CHECK(r0.error < 1e-9);
  CHECK_THROWS_AS(integral_Iab(disc, FocusSpec{}, {0.0, 0.0}, 1, 0), std::invalid_argument);
  for (const Domain& d : {Domain::ball2(), Domain::egg(2)}) {
    const Point z = d.ray_point({1.0, 0.0}, 1e-2);
    const IntegralResult r = integral_Iab(d, FocusSpec{}, z, 2, 0);
    CHECK(r.value == doctest::Approx(d.kernel_diag(z)).epsilon(1e-6));
  }
  const Point zb{0.99, 0.0};
  const IntegralResult a = integral_Iab(disc, FocusSpec{}, zb, 2, 0.5);
  const double ref = disc.kernel_diag(zb) * std::pow(-disc.r(zb), 0.5);
  CHECK(std::isfinite(a.value));
  CHECK(a.error / a.value < 1e-4);
  CHECK(a.value / ref > 0.0);
}

TEST_CASE("grid-based integral converges") {
  const Domain disc = Domain::disc();
  const Point z{0.0, 0.0};
  GridSpec s;
  s.levels = 12;
  s.angular = 16;
  s.order = 2;
  const IntegralResult r = integral_Iab(disc, s, z, 2, 0.5);
  const IntegralResult f = integral_Iab(disc, FocusSpec{}, z, 2, 0.5);
  CHECK(r.value == doctest::Approx(f.value).epsilon(1e-3));
}

TEST_CASE("iab ratios along rays") {
  const Domain disc = Domain::disc();
  const auto deltas = log_spaced(1e-3, 1e-1, 5);
  const IabReport id = iab_bound_check(disc, axis_ray(disc, deltas), 2, 0);
  for (double r : id.ratios) CHECK(r == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  const IabReport a = iab_bound_check(disc, axis_ray(disc, deltas), 1, -0.5);
  CHECK(a.ratio_max / a.ratio_min <= 32.0);
  const Domain egg = Domain::egg(2);
  const IabReport e = iab_bound_check(egg, axis_ray(egg, {1e-1, 1e-2}), 1.5, 0.5);
  CHECK(e.ratio_max / e.ratio_min <= 32.0);
}

TEST_CASE("M_j sequence") {
  const Domain ball = Domain::ball2();
  const BSystem bs = build_bsystem(ball, ball.ray_point({1.0, 0.0}, 0.01));
  const auto m0 = mj_sequence(bs, {0.0, 0.0}, 0.01);
  CHECK(m0[0] == 0.01);
  CHECK(m0[1] == 0.01);
  const auto m1 = mj_sequence(bs, {0.0, 0.3}, 0.01);
  CHECK(m1[0] == doctest::Approx(0.01));
  CHECK(m1[1] == doctest::Approx(0.1));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const auto m = mj_sequence(bs, {U(rng), U(rng)}, U(rng));
    CHECK(m[1] >= m[0]);
  }
  CHECK_THROWS(mj_sequence(bs, {-1.0, 0.0}, 0.01));
}

TEST_CASE("claim integral") {
  CHECK(claim_value({0, 0, 0}, 1.0) == 0.0);
  CHECK(claim_value({0, 0, 1}, 1.0) == doctest::Approx(pi / 2).epsilon(1e-10));
  CHECK(claim_value({0, 0, 0, 0, 4}, 1.0) == doctest::Approx(oracle::quartic_integral).epsilon(1e-10));
  CHECK(claim_value({0, 0, 1, 0, 1}, 1.0) == doctest::Approx(oracle::claim_mixed).epsilon(1e-10));
  CHECK(claim_value({0, 0, 3}, 7.0) == doctest::Approx(pi / 2).epsilon(1e-10));
  const Domain egg = Domain::egg(2);
  for (double d0 : {1e-1, 1e-3}) {
    const BSystem bs = build_bsystem(egg, egg.ray_point({1.0, 0.0}, d0));
    for (double rho : {0.0, 1e-3, 0.1})
      CHECK(claim_check(bs, 2, {rho}) <= oracle::quartic_integral * (1 + 1e-9));
  }
}
