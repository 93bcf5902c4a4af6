#include <cmath>
#include <random>
#include <vector>

#include "bergman/parallel.hpp"
#include "doctest.h"

using namespace bergman;

TEST_CASE("compensated and pairwise sums") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-9));
  std::vector<double> v(10001, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(1000.1).epsilon(1e-14));
  CHECK(pairwise_sum({}) == 0.0);
}

TEST_CASE("property: deterministic sums do not depend on the worker count") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (std::size_t n : {0ul, 1ul, 255ul, 4096ul, 100003ul}) {
    std::vector<double> x(n);
    for (double& v : x) v = U(rng) * std::pow(10.0, 8 * U(rng));
    set_workers(1);
    const double a = deterministic_sum(n, [&](std::size_t i) { return x[i]; });
    const auto ca = deterministic_sum_complex(n, [&](std::size_t i) { return std::complex<double>(x[i], -x[i]); });
    set_workers(4);
    const double b = deterministic_sum(n, [&](std::size_t i) { return x[i]; });
    const auto cb = deterministic_sum_complex(n, [&](std::size_t i) { return std::complex<double>(x[i], -x[i]); });
    set_workers(1);
    CHECK(a == b);
    CHECK(ca == cb);
  }
}

TEST_CASE("parallel_for visits every index once") {
  set_workers(3);
  std::vector<int> hits(10000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, 97);
  set_workers(1);
  for (int h : hits) CHECK(h == 1);
  CHECK(workers() == 1);
}
