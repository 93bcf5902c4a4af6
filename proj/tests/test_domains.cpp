#include <cmath>
#include <numbers>
#include <random>

#include "bergman/domains.hpp"
#include "bergman/quadrature.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bergman;
using std::numbers::pi;

namespace {

Point random_interior(const Domain& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (;;) {
    Point z{cplx(U(rng), U(rng)), d.n() == 2 ? cplx(U(rng), U(rng)) : cplx(0.0)};
    if (d.r(z) < -1e-3) return z;
  }
}

}  // namespace

TEST_CASE("defining functions") {
  CHECK(Domain::disc().r({0.0, 0.0}) == -1.0);
  CHECK(Domain::egg(2).r({0.0, 1.0}) == 0.0);
  CHECK(Domain::ball2().r({0.6, 0.8 * 0.999}) == doctest::Approx(-0.00127936).epsilon(1e-12));
  CHECK(Domain::egg(3).r({0.5, 0.5}) == doctest::Approx(0.25 + std::pow(0.25, 3) - 1.0));
}

TEST_CASE("domain ids round trip") {
  for (const char* id : {"disc", "ball2", "egg:m=2", "egg:m=5"})
    CHECK(Domain::parse(id).id() == id);
  CHECK_THROWS(Domain::parse("egg:m=1"));
  CHECK_THROWS(Domain::parse("annulus"));
}

TEST_CASE("monomial norms") {
  const auto disc = monomial_norms(Domain::disc(), 8);
  CHECK(disc.norm(0) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(disc.norm(3) == doctest::Approx(pi / 4).epsilon(1e-14));
  const auto egg = monomial_norms(Domain::egg(2), 8);
  CHECK(egg.norm(0, 0) == doctest::Approx(2 * pi * pi / 3).epsilon(1e-13));
  CHECK(egg.norm(3, 5) == doctest::Approx(oracle::egg2_norm_3_5).epsilon(1e-13));
  const auto ball = monomial_norms(Domain::ball2(), 4);
  CHECK(ball.norm(0, 0) == doctest::Approx(pi * pi / 2).epsilon(1e-14));
  CHECK_THROWS(monomial_norms(Domain::egg(2), 5000, 1000));
}

TEST_CASE("monomial norms agree with grid quadrature") {
  const Domain egg = Domain::egg(2);
  const auto table = monomial_norms(egg, 4);
  GridSpec spec;
  spec.levels = 16;
  spec.angular = 8;
  spec.order = 8;
  spec.tangential = 16;
  GridSpec fine = spec;
  fine.subdivisions = 4;
  const auto grid = build_grid(egg, spec);
  const auto grid_fine = build_grid(egg, fine);
  for (auto [a, b] : {std::pair{0, 0}, {1, 0}, {0, 2}, {2, 3}}) {
    auto f = [a = a, b = b](const Point& w, double) {
      return std::pow(std::norm(w[0]), a) * std::pow(std::norm(w[1]), b);
    };
    const double e0 = std::abs(integrate_grid(grid, f) / table.norm(a, b) - 1.0);
    const double e1 = std::abs(integrate_grid(grid_fine, f) / table.norm(a, b) - 1.0);
    CHECK(e0 < 1e-4);
    CHECK(e1 <= std::max(e0 / 4, 1e-12));
  }
}

TEST_CASE("kernel closed forms") {
  const Domain disc = Domain::disc(), ball = Domain::ball2();
  CHECK(std::abs(disc.kernel({0.0, 0.0}, {0.0, 0.0}) - 1.0 / pi) < 1e-15);
  CHECK(std::abs(ball.kernel({0.0, 0.0}, {0.0, 0.0}) - 2.0 / (pi * pi)) < 1e-15);
  CHECK(disc.kernel({0.9, 0.0}, {-0.9, 0.0}).real() ==
        doctest::Approx(1.0 / (pi * 1.81 * 1.81)).epsilon(1e-14));
  const Point z{cplx(0.3, 0.2), cplx(0.4, -0.1)}, w{cplx(0.5, -0.1), cplx(0.2, 0.3)};
  const cplx kb = ball.kernel(z, w);
  CHECK(kb.real() == doctest::Approx(oracle::ball_off_re).epsilon(1e-13));
  CHECK(kb.imag() == doctest::Approx(oracle::ball_off_im).epsilon(1e-12));
}

TEST_CASE("egg kernel against the independent series oracle") {
  const Point z{cplx(0.3, 0.2), cplx(0.4, -0.1)}, w{cplx(0.5, -0.1), cplx(0.2, 0.3)};
  const cplx k2 = Domain::egg(2).kernel(z, w);
  CHECK(k2.real() == doctest::Approx(oracle::egg2_off_re).epsilon(1e-12));
  CHECK(k2.imag() == doctest::Approx(oracle::egg2_off_im).epsilon(1e-11));
  const cplx k3 = Domain::egg(3).kernel(z, w);
  CHECK(k3.real() == doctest::Approx(oracle::egg3_off_re).epsilon(1e-12));
  CHECK(k3.imag() == doctest::Approx(oracle::egg3_off_im).epsilon(1e-11));
  const Point d{0.6, cplx(0.0, 0.5)};
  CHECK(Domain::egg(2).kernel_diag(d) == doctest::Approx(oracle::egg2_diag).epsilon(1e-12));
}

TEST_CASE("series and closed form agree within the tail bound") {
  std::mt19937_64 rng(3);
  for (const Domain& d : {Domain::disc(), Domain::ball2(), Domain::egg(2)}) {
    const Domain s = d.with_strategy(KernelStrategy::MonomialSeries);
    for (int i = 0; i < 40; ++i) {
      Point z = random_interior(d, rng), w = random_interior(d, rng);
      for (auto& c : z) c *= 0.8;
      for (auto& c : w) c *= 0.8;
      const SeriesValue sv = s.kernel_series(z, w);
      const cplx closed = d.kernel(z, w);
      CHECK(std::abs(sv.value - closed) <= sv.tail + 1e-12 * std::abs(closed));
      CHECK(sv.tail <= s.series_options().tail_tol * std::abs(sv.value));
    }
  }
}

TEST_CASE("series truncation error is reported") {
  SeriesOptions o;
  o.max_degree = 20;
  const Domain s = Domain::egg(2).with_strategy(KernelStrategy::MonomialSeries, o);
  CHECK_THROWS_AS(s.kernel({0.99, 0.0}, {0.99, 0.0}), NumericalError);
}

TEST_CASE("kernel evaluation guards the boundary") {
  const Domain d = Domain::disc();
  CHECK_THROWS_AS(d.kernel({1.0, 0.0}, {0.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(d.kernel({0.0, 0.0}, {1.5, 0.0}), std::domain_error);
  CHECK_NOTHROW(d.kernel({std::sqrt(1.0 - 2e-8), 0.0}, {0.0, 0.0}));
}

TEST_CASE("property: hermitian symmetry on random pairs") {
  std::mt19937_64 rng(11);
  for (const Domain& d : {Domain::disc(), Domain::ball2(), Domain::egg(2), Domain::egg(4)}) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Point z = random_interior(d, rng), w = random_interior(d, rng);
      const cplx a = d.kernel(z, w), b = std::conj(d.kernel(w, z));
      worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("property: positive diagonal and Cauchy-Schwarz") {
  std::mt19937_64 rng(5);
  for (const Domain& d : {Domain::disc(), Domain::ball2(), Domain::egg(3)}) {
    for (int i = 0; i < 500; ++i) {
      const Point z = random_interior(d, rng), w = random_interior(d, rng);
      const double kz = d.kernel_diag(z), kw = d.kernel_diag(w);
      CHECK(kz > 0.0);
      CHECK(std::abs(d.kernel(z, w)) <= std::sqrt(kz * kw) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("ray points have the requested depth") {
  for (const Domain& d : {Domain::disc(), Domain::ball2(), Domain::egg(2)}) {
    const Point p = d.project_to_boundary({0.3, d.n() == 2 ? cplx(0.2, 0.1) : cplx(0.0)});
    CHECK(std::abs(d.r(p)) < 1e-13);
    for (double delta : {1e-1, 1e-4, 1e-7}) {
      const Point z = d.ray_point(p, delta);
      CHECK(-d.r(z) == doctest::Approx(delta).epsilon(1e-8));
    }
  }
}

TEST_CASE("off-diagonal sup") {
  CHECK(offdiagonal_sup(Domain::disc(), 2.0, 2000) == doctest::Approx(1.0 / (4 * pi)).epsilon(1e-6));
  const double s1 = offdiagonal_sup(Domain::disc(), 1.0, 2000, 1);
  const double s2 = offdiagonal_sup(Domain::disc(), 1.0, 4000, 2);
  CHECK(std::isfinite(s1));
  CHECK(std::abs(s2 / s1 - 1.0) < 0.1);
  CHECK(offdiagonal_sup(Domain::egg(2), 3.0, 100) == 0.0);
  for (const Domain& d : {Domain::ball2(), Domain::egg(2)}) {
    const double a = offdiagonal_sup(d, 1.0, 1000, 1), b = offdiagonal_sup(d, 1.0, 4000, 2);
    CHECK(std::isfinite(a));
    CHECK(std::abs(b / a - 1.0) < 0.1);
  }
}

TEST_CASE("boundary comparability constants") {
  const auto disc = boundary_constants(Domain::disc());
  CHECK(disc.c1 >= 1.0 - 1e-9);
  CHECK(disc.c2 <= 2.0 + 1e-9);
  const auto egg = boundary_constants(Domain::egg(2));
  CHECK(egg.c1 > 0.0);
  CHECK(std::isfinite(egg.c2));
  CHECK(distance_to_boundary(Domain::egg(2), {0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(distance_to_boundary(Domain::disc(), {0.5, 0.0}) == doctest::Approx(0.5).epsilon(1e-12));
}
