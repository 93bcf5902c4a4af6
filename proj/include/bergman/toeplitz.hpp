#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bergman/bsystem.hpp"
#include "bergman/domains.hpp"
#include "bergman/kernel_matrix.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/report.hpp"

namespace bergman {

using SymbolFn = std::function<cplx(const Point&)>;

// psi(w) = K(w,w)^{-alpha}.
SymbolFn kernel_power_symbol(const Domain& domain, double alpha);

// Entries K(z_i, w_j) psi(w_j) mu_j, stored as kernel samples plus the
// source-side diagonal psi * mu.
class DiscreteOperator {
 public:
  DiscreteOperator(std::shared_ptr<const KernelMatrix> kernel, Eigen::VectorXcd psi,
                   Eigen::VectorXd source_weights, Eigen::VectorXd target_weights,
                   std::string symbol_tag);

  std::size_t rows() const { return kernel_->rows(); }
  std::size_t cols() const { return kernel_->cols(); }
  const KernelMatrix& kernel() const { return *kernel_; }
  const Eigen::VectorXcd& psi() const { return psi_; }
  const Eigen::VectorXd& source_weights() const { return source_w_; }
  const Eigen::VectorXd& target_weights() const { return target_w_; }
  const std::string& symbol_tag() const { return tag_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const;
  Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd dense() const;

 private:
  std::shared_ptr<const KernelMatrix> kernel_;
  Eigen::VectorXcd psi_;
  Eigen::VectorXd source_w_;
  Eigen::VectorXd target_w_;
  std::string tag_;
};

// Grid of explicit points with the given weights (unit weights if empty).
QuadratureGrid point_grid(const Domain& domain, std::vector<Point> points,
                          std::vector<double> weights = {});

// Uses the FFT ring path when source and target are the same disc ring grid
// and fast is true; dense assembly otherwise.
DiscreteOperator discretize(const Domain& domain, const QuadratureGrid& source,
                            const QuadratureGrid& target, const SymbolFn& psi,
                            const std::string& tag = "", bool fast = true);

Eigen::VectorXcd apply(const DiscreteOperator& op, const Eigen::VectorXcd& u);

struct PowerOptions {
  int restarts = 10;
  int max_iter = 300;
  double tol = 1e-6;
  std::uint64_t seed = 20240607;
};

struct NormEstimate {
  double estimate = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Ascent on ||op u||_{q,mu_t} / ||u||_{p,mu_s}; the result is a lower bound
// on the weighted operator norm of the matrix.
NormEstimate estimate_norm_pq(const DiscreteOperator& op, double p, double q,
                              const PowerOptions& opts = {});

// Weighted L2 -> L2 norm from a singular value decomposition.
double dense_norm_22(const DiscreteOperator& op);

struct ProjectionReport {
  std::vector<double> residuals;
  std::vector<double> residuals_refined;
  double max_residual = 0.0;
  double max_residual_refined = 0.0;
  std::size_t nodes = 0;
  std::size_t nodes_refined = 0;
};

// Relative residual of K(w,z) = sum_xi K(w,xi) K(xi,z) mu_xi on the grid and
// on its refinement, for each pair (z, w).
ProjectionReport projection_check(const Domain& domain, const GridSpec& spec,
                                  const std::vector<std::pair<Point, Point>>& pairs);

// Columns: delta, alpha, Q, Q_err, K, K_power, ratio.
SweepReport sharpness_sweep(const Domain& domain, double p, double q,
                            const std::vector<double>& alphas, const Ray& ray,
                            const FocusSpec& spec = {});

struct NormSweepOptions {
  GridSpec coarse;
  GridSpec fine;
  PowerOptions power;
};

// Columns: p, q, alpha, level, depth, nodes, estimate, iterations, converged,
// envelope.  NaN entries select the threshold alpha = 1/p - 1/q; an empty
// list means a single NaN.
SweepReport norm_sweep(const Domain& domain,
                       const std::vector<std::pair<double, double>>& pq_list,
                       const std::vector<double>& alphas,
                       const NormSweepOptions& opts);

struct LinfResult {
  double sup = 0.0;
  std::size_t i = 0, j = 0;
  std::size_t nodes = 0;
};

// sup over grid pairs of |K(z,w)| K(w,w)^{-1}.
LinfResult linf_check(const Domain& domain, const QuadratureGrid& grid);

}  // namespace bergman
