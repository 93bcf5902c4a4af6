#include "bergman/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace bergman {

namespace {
std::atomic<int> g_workers{1};
constexpr std::size_t kBlock = 4096;
}  // namespace

void set_workers(int n) { g_workers = std::max(1, n); }
int workers() { return g_workers; }

void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(1, chunk);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const std::size_t nw = std::min<std::size_t>(workers(), chunks);
  if (nw <= 1) {
    for (std::size_t c = 0; c < chunks; ++c)
      body(c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = chunks;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t + 1 < nw; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

namespace {
double pairwise(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise(v, h) + pairwise(v + h, n - h);
}
}  // namespace

double pairwise_sum(const std::vector<double>& v) {
  return pairwise(v.data(), v.size());
}

double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_chunks(n, kBlock, [&](std::size_t b, std::size_t e) {
    CompensatedSum s;
    for (std::size_t i = b; i < e; ++i) s.add(term(i));
    partial[b / kBlock] = s.value();
  });
  return pairwise_sum(partial);
}

std::complex<double> deterministic_sum_complex(
    std::size_t n, const std::function<std::complex<double>(std::size_t)>& term) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> re(blocks, 0.0), im(blocks, 0.0);
  parallel_chunks(n, kBlock, [&](std::size_t b, std::size_t e) {
    CompensatedSum sr, si;
    for (std::size_t i = b; i < e; ++i) {
      const std::complex<double> t = term(i);
      sr.add(t.real());
      si.add(t.imag());
    }
    re[b / kBlock] = sr.value();
    im[b / kBlock] = si.value();
  });
  return {pairwise_sum(re), pairwise_sum(im)};
}

}  // namespace bergman
