#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace bergman {

// Process-wide worker count used by the parallel helpers (default 1).
void set_workers(int n);
int workers();

// Runs body(begin, end) over fixed-size chunks of [0, n) on the worker pool.
// Chunk boundaries depend only on n and chunk, never on the worker count.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body);

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f,
                         std::size_t chunk = 256) {
  parallel_chunks(n, chunk, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) f(i);
  });
}

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double pairwise_sum(const std::vector<double>& v);

// Sum of term(i) over [0, n), reproducible for any worker count: compensated
// sums over fixed blocks, then a pairwise reduction of the block sums.
double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& term);
std::complex<double> deterministic_sum_complex(
    std::size_t n, const std::function<std::complex<double>(std::size_t)>& term);

}  // namespace bergman
