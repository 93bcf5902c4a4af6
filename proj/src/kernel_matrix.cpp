#include "bergman/kernel_matrix.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

#include "bergman/parallel.hpp"

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::FFT<double>& local_fft() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace

std::shared_ptr<DenseKernel> DenseKernel::assemble(const KernelFn& f,
                                                   const std::vector<Point>& targets,
                                                   const std::vector<Point>& sources) {
  Eigen::MatrixXcd K(targets.size(), sources.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < sources.size(); ++j) {
      try {
        K(i, j) = f(targets[i], sources[j]);
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "kernel evaluation failed at target node " << i << ", source node "
           << j << ": " << e.what();
        throw NumericalError(os.str());
      }
    }
  }, 16);
  return std::make_shared<DenseKernel>(std::move(K));
}

Eigen::VectorXcd DenseKernel::multiply(const Eigen::VectorXcd& v) const {
  if (static_cast<std::size_t>(v.size()) != cols())
    throw std::invalid_argument("dimension mismatch in kernel multiply");
  return K_ * v;
}

Eigen::VectorXcd DenseKernel::multiply_adjoint(const Eigen::VectorXcd& v) const {
  if (static_cast<std::size_t>(v.size()) != rows())
    throw std::invalid_argument("dimension mismatch in kernel adjoint multiply");
  return K_.adjoint() * v;
}

Eigen::VectorXd DenseKernel::abs_power_rows(double gamma, const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(K_.rows());
  parallel_for(K_.rows(), [&](std::size_t i) {
    CompensatedSum s;
    for (Eigen::Index j = 0; j < K_.cols(); ++j)
      s.add(std::pow(std::abs(K_(i, j)), gamma) * v[j]);
    out[i] = s.value();
  }, 16);
  return out;
}

Eigen::VectorXd DenseKernel::abs_power_cols(double gamma, const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(K_.cols());
  parallel_for(K_.cols(), [&](std::size_t j) {
    CompensatedSum s;
    for (Eigen::Index i = 0; i < K_.rows(); ++i)
      s.add(std::pow(std::abs(K_(i, j)), gamma) * v[i]);
    out[j] = s.value();
  }, 16);
  return out;
}

bool RingKernel::supports(const Domain& domain, const QuadratureGrid& grid) {
  if (domain.n() != 1 || grid.rings.empty()) return false;
  std::size_t total = 0;
  for (const Ring& a : grid.rings) {
    total += a.count;
    for (const Ring& b : grid.rings) {
      const std::size_t hi = std::max(a.count, b.count), lo = std::min(a.count, b.count);
      if (hi % lo != 0) return false;
    }
  }
  return total == grid.size();
}

RingKernel::RingKernel(const KernelFn& f, const QuadratureGrid& grid)
    : f_(f), rings_(grid.rings), size_(grid.size()) {
  spectra_ = spectra(f_);
}

RingKernel::Spectra RingKernel::spectra(
    const std::function<cplx(const Point&, const Point&)>& f) const {
  const std::size_t R = rings_.size();
  Spectra S(R, std::vector<std::vector<cplx>>(R));
  parallel_for(R * R, [&](std::size_t idx) {
    const std::size_t a = idx / R, b = idx % R;
    const std::size_t N = std::max(rings_[a].count, rings_[b].count);
    std::vector<cplx> samples(N);
    const Point src{rings_[b].radius, 0.0};
    for (std::size_t l = 0; l < N; ++l)
      samples[l] = f(Point{std::polar(rings_[a].radius, 2 * kPi * l / N), 0.0}, src);
    local_fft().fwd(S[a][b], samples);
  }, 1);
  return S;
}

Eigen::VectorXcd RingKernel::convolve(const Spectra& S, const Eigen::VectorXcd& v) const {
  if (static_cast<std::size_t>(v.size()) != size_)
    throw std::invalid_argument("dimension mismatch in ring kernel multiply");
  const std::size_t R = rings_.size();
  std::vector<std::vector<cplx>> X(R);
  parallel_for(R, [&](std::size_t b) {
    std::vector<cplx> in(v.data() + rings_[b].begin,
                         v.data() + rings_[b].begin + rings_[b].count);
    local_fft().fwd(X[b], in);
  }, 1);
  Eigen::VectorXcd out(size_);
  parallel_for(R, [&](std::size_t a) {
    const std::size_t Na = rings_[a].count;
    std::vector<cplx> Y(Na, 0.0);
    for (std::size_t b = 0; b < R; ++b) {
      const std::size_t Nb = rings_[b].count;
      const std::vector<cplx>& K = S[a][b];
      const std::vector<cplx>& Xb = X[b];
      if (Nb <= Na) {
        for (std::size_t k = 0; k < Na; ++k) Y[k] += K[k] * Xb[k % Nb];
      } else {
        const std::size_t ratio = Nb / Na;
        const double inv = 1.0 / ratio;
        for (std::size_t k = 0; k < Na; ++k) {
          cplx acc = 0.0;
          for (std::size_t j = 0; j < ratio; ++j) acc += K[k + j * Na] * Xb[k + j * Na];
          Y[k] += inv * acc;
        }
      }
    }
    std::vector<cplx> y;
    local_fft().inv(y, Y);
    for (std::size_t l = 0; l < Na; ++l) out[rings_[a].begin + l] = y[l];
  }, 1);
  return out;
}

Eigen::VectorXcd RingKernel::multiply(const Eigen::VectorXcd& v) const {
  return convolve(spectra_, v);
}

Eigen::VectorXd RingKernel::abs_power_rows(double gamma, const Eigen::VectorXd& v) const {
  const Spectra S = spectra([&](const Point& z, const Point& w) {
    return cplx(std::pow(std::abs(f_(z, w)), gamma), 0.0);
  });
  return convolve(S, v.cast<cplx>()).real();
}

Eigen::MatrixXcd RingKernel::dense() const {
  Eigen::MatrixXcd M(size_, size_);
  std::vector<Point> pts(size_);
  for (const Ring& r : rings_)
    for (std::size_t l = 0; l < r.count; ++l)
      pts[r.begin + l] = {std::polar(r.radius, 2 * kPi * l / r.count), 0.0};
  parallel_for(size_, [&](std::size_t i) {
    for (std::size_t j = 0; j < size_; ++j) M(i, j) = f_(pts[i], pts[j]);
  }, 16);
  return M;
}

}  // namespace bergman
