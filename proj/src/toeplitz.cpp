#include "bergman/toeplitz.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bergman/parallel.hpp"

namespace bergman {

SymbolFn kernel_power_symbol(const Domain& domain, double alpha) {
  return [domain, alpha](const Point& w) -> cplx {
    if (alpha == 0.0) return 1.0;
    return std::pow(domain.kernel_diag(w), -alpha);
  };
}

DiscreteOperator::DiscreteOperator(std::shared_ptr<const KernelMatrix> kernel,
                                   Eigen::VectorXcd psi, Eigen::VectorXd source_weights,
                                   Eigen::VectorXd target_weights, std::string symbol_tag)
    : kernel_(std::move(kernel)),
      psi_(std::move(psi)),
      source_w_(std::move(source_weights)),
      target_w_(std::move(target_weights)),
      tag_(std::move(symbol_tag)) {
  if (static_cast<std::size_t>(psi_.size()) != kernel_->cols() ||
      static_cast<std::size_t>(source_w_.size()) != kernel_->cols() ||
      static_cast<std::size_t>(target_w_.size()) != kernel_->rows())
    throw std::invalid_argument("operator components have mismatched sizes");
}

Eigen::VectorXcd DiscreteOperator::apply(const Eigen::VectorXcd& u) const {
  if (static_cast<std::size_t>(u.size()) != cols())
    throw std::invalid_argument("dimension mismatch: vector length " +
                                std::to_string(u.size()) + ", source grid " +
                                std::to_string(cols()));
  const Eigen::VectorXcd v = (psi_.array() * source_w_.array().cast<cplx>() * u.array()).matrix();
  return kernel_->multiply(v);
}

Eigen::VectorXcd DiscreteOperator::apply_adjoint(const Eigen::VectorXcd& v) const {
  if (static_cast<std::size_t>(v.size()) != rows())
    throw std::invalid_argument("dimension mismatch in adjoint apply");
  const Eigen::VectorXcd t = kernel_->multiply_adjoint(v);
  return (psi_.conjugate().array() * source_w_.array().cast<cplx>() * t.array()).matrix();
}

Eigen::MatrixXcd DiscreteOperator::dense() const {
  Eigen::MatrixXcd M = kernel_->dense();
  for (Eigen::Index j = 0; j < M.cols(); ++j) M.col(j) *= psi_[j] * source_w_[j];
  return M;
}

QuadratureGrid point_grid(const Domain& domain, std::vector<Point> points,
                          std::vector<double> weights) {
  QuadratureGrid g;
  g.n = domain.n();
  g.domain_id = domain.id();
  if (weights.empty()) weights.assign(points.size(), 1.0);
  if (weights.size() != points.size())
    throw std::invalid_argument("point and weight counts differ");
  for (const Point& p : points) g.r_abs.push_back(std::abs(domain.r(p)));
  g.nodes = std::move(points);
  g.weights = std::move(weights);
  return g;
}

namespace {

std::shared_ptr<const KernelMatrix> make_kernel(const Domain& domain,
                                                const QuadratureGrid& source,
                                                const QuadratureGrid& target,
                                                bool fast) {
  const KernelFn f = [domain](const Point& z, const Point& w) { return domain.kernel(z, w); };
  if (fast && &source == &target && RingKernel::supports(domain, source))
    return std::make_shared<RingKernel>(f, source);
  return DenseKernel::assemble(f, target.nodes, source.nodes);
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

DiscreteOperator with_symbol(std::shared_ptr<const KernelMatrix> K,
                             const QuadratureGrid& source, const QuadratureGrid& target,
                             const SymbolFn& psi, const std::string& tag) {
  Eigen::VectorXcd ps(source.size());
  parallel_for(source.size(), [&](std::size_t j) { ps[j] = psi(source.nodes[j]); });
  return DiscreteOperator(std::move(K), std::move(ps), as_vector(source.weights),
                          as_vector(target.weights), tag);
}

}  // namespace

DiscreteOperator discretize(const Domain& domain, const QuadratureGrid& source,
                            const QuadratureGrid& target, const SymbolFn& psi,
                            const std::string& tag, bool fast) {
  if (source.domain_id != domain.id() || target.domain_id != domain.id())
    throw std::invalid_argument("grids must belong to domain " + domain.id());
  return with_symbol(make_kernel(domain, source, target, fast), source, target, psi, tag);
}

Eigen::VectorXcd apply(const DiscreteOperator& op, const Eigen::VectorXcd& u) {
  return op.apply(u);
}

namespace {

Eigen::VectorXcd dual_map(const Eigen::VectorXcd& v, double s) {
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    out[i] = a == 0.0 ? cplx(0.0) : v[i] * std::pow(a, s - 2.0);
  }
  return out;
}

double lp_norm(const Eigen::VectorXcd& v, double s) {
  double mx = v.cwiseAbs().maxCoeff();
  if (mx == 0.0) return 0.0;
  CompensatedSum acc;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc.add(std::pow(std::abs(v[i]) / mx, s));
  return mx * std::pow(acc.value(), 1.0 / s);
}

}  // namespace

NormEstimate estimate_norm_pq(const DiscreteOperator& op, double p, double q,
                              const PowerOptions& opts) {
  if (!(p > 1.0) || !(q > 1.0) || !std::isfinite(p) || !std::isfinite(q))
    throw std::invalid_argument("estimate_norm_pq needs 1 < p, q < inf");
  const Eigen::Index ns = op.cols();
  const double pc = p / (p - 1.0);
  const Eigen::ArrayXd src_scale = op.source_weights().array().pow(-1.0 / p);
  const Eigen::ArrayXd tgt_scale = op.target_weights().array().pow(1.0 / q);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  NormEstimate best;
  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    Eigen::VectorXcd x(ns);
    if (restart == 0) {
      x = (1.0 / src_scale).cast<cplx>().matrix();
    } else {
      for (Eigen::Index i = 0; i < ns; ++i) {
        const double re = gauss(rng);
        x[i] = cplx(re, gauss(rng));
      }
    }
    x /= lp_norm(x, p);
    std::deque<double> history;
    double run_best = 0.0;
    int it = 0;
    bool converged = false;
    for (; it < opts.max_iter; ++it) {
      const Eigen::VectorXcd u = (x.array() * src_scale.cast<cplx>()).matrix();
      const Eigen::VectorXcd y = (op.apply(u).array() * tgt_scale.cast<cplx>()).matrix();
      const double val = lp_norm(y, q);
      run_best = std::max(run_best, val);
      history.push_back(run_best);
      if (history.size() > 6) history.pop_front();
      if (history.size() == 6 && history.back() - history.front() <= opts.tol * history.back()) {
        converged = true;
        ++it;
        break;
      }
      if (val == 0.0) {
        converged = true;
        ++it;
        break;
      }
      const Eigen::VectorXcd g = (dual_map(y, q).array() * tgt_scale.cast<cplx>()).matrix();
      const Eigen::VectorXcd v = (op.apply_adjoint(g).array() * src_scale.cast<cplx>()).matrix();
      if (v.cwiseAbs().maxCoeff() == 0.0) break;
      x = dual_map(v, pc);
      x /= lp_norm(x, p);
    }
    if (run_best > best.estimate || restart == 0) {
      best.estimate = std::max(best.estimate, run_best);
      best.iterations = it;
      best.converged = converged;
    }
  }
  return best;
}

double dense_norm_22(const DiscreteOperator& op) {
  Eigen::MatrixXcd B = op.dense();
  const Eigen::ArrayXd sl = op.source_weights().array().pow(-0.5);
  const Eigen::ArrayXd tl = op.target_weights().array().sqrt();
  for (Eigen::Index j = 0; j < B.cols(); ++j) B.col(j) *= sl[j];
  for (Eigen::Index i = 0; i < B.rows(); ++i) B.row(i) *= tl[i];
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(B);
  return svd.singularValues()[0];
}

ProjectionReport projection_check(const Domain& domain, const GridSpec& spec,
                                  const std::vector<std::pair<Point, Point>>& pairs) {
  ProjectionReport rep;
  auto residuals = [&](const QuadratureGrid& g, std::vector<double>& out) {
    for (const auto& [z, w] : pairs) {
      const cplx I = deterministic_sum_complex(g.size(), [&](std::size_t i) {
        const Point& xi = g.nodes[i];
        return g.weights[i] * domain.kernel(w, xi) * domain.kernel(xi, z);
      });
      const cplx K = domain.kernel(w, z);
      out.push_back(std::abs(I - K) / std::abs(K));
    }
  };
  const QuadratureGrid coarse = build_grid(domain, spec);
  const QuadratureGrid fine = build_grid(domain, spec.refined());
  rep.nodes = coarse.size();
  rep.nodes_refined = fine.size();
  residuals(coarse, rep.residuals);
  residuals(fine, rep.residuals_refined);
  for (double r : rep.residuals) rep.max_residual = std::max(rep.max_residual, r);
  for (double r : rep.residuals_refined)
    rep.max_residual_refined = std::max(rep.max_residual_refined, r);
  return rep;
}

SweepReport sharpness_sweep(const Domain& domain, double p, double q,
                            const std::vector<double>& alphas, const Ray& ray,
                            const FocusSpec& spec) {
  if (!(p > 1.0) || !(q >= p)) throw std::invalid_argument("need 1 < p <= q");
  if (alphas.empty()) throw std::invalid_argument("alpha list is empty");
  SweepReport rep;
  rep.columns = {"delta", "alpha", "Q", "Q_err", "K", "K_power", "ratio"};
  const double expo = 1.0 - 1.0 / p + 1.0 / q;
  for (double delta : ray.deltas) {
    const Point z = domain.ray_point(ray.boundary_point, delta);
    const double K = domain.kernel_diag(z);
    const ProductRule coarse = focused_rule(domain, z, spec);
    const ProductRule fine = focused_rule(domain, z, spec.refined());
    for (double alpha : alphas) {
      auto f = [&](const Point& w, double) {
        return std::norm(domain.kernel(w, z)) * std::pow(domain.kernel_diag(w), -alpha);
      };
      const double Qc = coarse.integrate(f);
      const double Qf = fine.integrate(f);
      const double Kp = std::pow(K, expo);
      rep.add_row({-domain.r(z), alpha, Qf, std::abs(Qf - Qc), K, Kp, Qf / Kp});
    }
  }
  return rep;
}

SweepReport norm_sweep(const Domain& domain,
                       const std::vector<std::pair<double, double>>& pq_list,
                       const std::vector<double>& alphas, const NormSweepOptions& opts) {
  if (pq_list.empty()) throw std::invalid_argument("(p, q) list is empty");
  for (const auto& [p, q] : pq_list)
    if (!(p > 1.0) || !(q >= p) || !std::isfinite(q))
      throw std::invalid_argument("exponent range violation in (p, q) list");
  SweepReport rep;
  rep.columns = {"p", "q", "alpha", "level", "depth", "nodes", "estimate",
                 "iterations", "converged", "envelope"};
  const GridSpec specs[2] = {opts.coarse, opts.fine};
  for (int level = 0; level < 2; ++level) {
    const QuadratureGrid grid = build_grid(domain, specs[level]);
    const auto K = make_kernel(domain, grid, grid, true);
    const auto edges = specs[level].edges();
    for (const auto& [p, q] : pq_list) {
      std::vector<double> as = alphas;
      if (as.empty()) as.push_back(std::numeric_limits<double>::quiet_NaN());
      for (double alpha : as) {
        if (std::isnan(alpha)) alpha = 1.0 / p - 1.0 / q;
        const DiscreteOperator op =
            with_symbol(K, grid, grid, kernel_power_symbol(domain, alpha), "K^-alpha");
        const NormEstimate est = estimate_norm_pq(op, p, q, opts.power);
        const double env = std::pow(p / (p - 1.0) + q, 1.0 - 1.0 / p + 1.0 / q);
        rep.add_row({p, q, alpha, static_cast<double>(level), edges.back(),
                     static_cast<double>(grid.size()), est.estimate,
                     static_cast<double>(est.iterations), est.converged ? 1.0 : 0.0, env});
      }
    }
  }
  return rep;
}

LinfResult linf_check(const Domain& domain, const QuadratureGrid& grid) {
  const std::size_t N = grid.size();
  std::vector<double> diag(N);
  parallel_for(N, [&](std::size_t j) { diag[j] = domain.kernel_diag(grid.nodes[j]); });
  std::vector<double> row_max(N, 0.0);
  std::vector<std::size_t> row_arg(N, 0);
  parallel_for(N, [&](std::size_t i) {
    for (std::size_t j = 0; j < N; ++j) {
      const double v = std::abs(domain.kernel(grid.nodes[i], grid.nodes[j])) / diag[j];
      if (v > row_max[i]) {
        row_max[i] = v;
        row_arg[i] = j;
      }
    }
  }, 8);
  LinfResult res;
  res.nodes = N;
  for (std::size_t i = 0; i < N; ++i)
    if (row_max[i] > res.sup) {
      res.sup = row_max[i];
      res.i = i;
      res.j = row_arg[i];
    }
  return res;
}

}  // namespace bergman
