#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "bergman/domains.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

using KernelFn = std::function<cplx(const Point&, const Point&)>;

// Samples K(x_i, y_j) of a kernel on target nodes x and source nodes y.
class KernelMatrix {
 public:
  virtual ~KernelMatrix() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual Eigen::VectorXcd multiply(const Eigen::VectorXcd& v) const = 0;
  virtual Eigen::VectorXcd multiply_adjoint(const Eigen::VectorXcd& v) const = 0;
  // sum_j |K_ij|^gamma v_j and sum_i |K_ij|^gamma v_i.
  virtual Eigen::VectorXd abs_power_rows(double gamma, const Eigen::VectorXd& v) const = 0;
  virtual Eigen::VectorXd abs_power_cols(double gamma, const Eigen::VectorXd& v) const = 0;
  virtual Eigen::MatrixXcd dense() const = 0;
};

class DenseKernel : public KernelMatrix {
 public:
  explicit DenseKernel(Eigen::MatrixXcd K) : K_(std::move(K)) {}
  // Assembles K(x_i, y_j); evaluation failures are rethrown with indices.
  static std::shared_ptr<DenseKernel> assemble(const KernelFn& f,
                                               const std::vector<Point>& targets,
                                               const std::vector<Point>& sources);

  std::size_t rows() const override { return K_.rows(); }
  std::size_t cols() const override { return K_.cols(); }
  Eigen::VectorXcd multiply(const Eigen::VectorXcd& v) const override;
  Eigen::VectorXcd multiply_adjoint(const Eigen::VectorXcd& v) const override;
  Eigen::VectorXd abs_power_rows(double gamma, const Eigen::VectorXd& v) const override;
  Eigen::VectorXd abs_power_cols(double gamma, const Eigen::VectorXd& v) const override;
  Eigen::MatrixXcd dense() const override { return K_; }
  const Eigen::MatrixXcd& matrix() const { return K_; }

 private:
  Eigen::MatrixXcd K_;
};

// Rotation-invariant Hermitian kernel on a ring grid (source = target).
// Each ring pair block is a circulant on the finer of the two angular
// lattices, applied through FFTs.
class RingKernel : public KernelMatrix {
 public:
  RingKernel(const KernelFn& f, const QuadratureGrid& grid);

  std::size_t rows() const override { return size_; }
  std::size_t cols() const override { return size_; }
  Eigen::VectorXcd multiply(const Eigen::VectorXcd& v) const override;
  Eigen::VectorXcd multiply_adjoint(const Eigen::VectorXcd& v) const override {
    return multiply(v);
  }
  Eigen::VectorXd abs_power_rows(double gamma, const Eigen::VectorXd& v) const override;
  Eigen::VectorXd abs_power_cols(double gamma, const Eigen::VectorXd& v) const override {
    return abs_power_rows(gamma, v);
  }
  Eigen::MatrixXcd dense() const override;

  static bool supports(const Domain& domain, const QuadratureGrid& grid);

 private:
  using Spectra = std::vector<std::vector<std::vector<cplx>>>;
  Spectra spectra(const std::function<cplx(const Point&, const Point&)>& f) const;
  Eigen::VectorXcd convolve(const Spectra& S, const Eigen::VectorXcd& v) const;

  KernelFn f_;
  std::vector<Ring> rings_;
  std::size_t size_;
  Spectra spectra_;
};

}  // namespace bergman
