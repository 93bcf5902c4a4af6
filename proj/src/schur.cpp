#include "bergman/schur.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bergman {

void check_exponents(double p, double q) {
  if (!(p > 1.0) || !(q >= p) || !std::isfinite(q)) {
    std::ostringstream os;
    os << "exponent range violation: need 1 < p <= q < inf, got p = " << p
       << ", q = " << q;
    throw std::invalid_argument(os.str());
  }
}

double SchurCertificate::assemble(double p, double q, double C1, double C2, double M) {
  return std::pow(C1, (p - 1.0) / p) * std::pow(C2, 1.0 / q) * M;
}

std::string SchurCertificate::to_json() const {
  std::ostringstream os;
  os << std::setprecision(17) << "{\"p\": " << p << ", \"q\": " << q
     << ", \"alpha\": " << alpha << ", \"beta\": " << beta << ", \"C1\": " << C1
     << ", \"C2\": " << C2 << ", \"M\": " << M << ", \"bound\": " << bound
     << ", \"grid_id\": \"" << grid_id << "\"}";
  return os.str();
}

SchurWeights power_weights(const Domain& domain, const QuadratureGrid& grid,
                           double p, double q, double beta) {
  check_exponents(p, q);
  const double pc = p / (p - 1.0);
  const double bmax = std::min(1.0 / pc, 1.0 / q);
  if (!(beta > 0.0 && beta < bmax))
    throw std::invalid_argument("beta range violation: need 0 < beta < min(1/p', 1/q)");
  SchurWeights w;
  w.alpha = 1.0 - 1.0 / p;
  w.beta = beta;
  const std::size_t N = grid.size();
  w.h1.resize(N);
  w.h2.resize(N);
  w.g.resize(N);
  w.psi.resize(N);
  const double e2 = ((1.0 - w.alpha) * q - 1.0) / q;
  const double epsi = 1.0 / q - 1.0 / p;
  for (std::size_t i = 0; i < N; ++i) {
    const double s = grid.r_abs[i];
    const double K = domain.kernel_diag(grid.nodes[i]);
    const double rb = std::pow(s, -beta);
    w.h1[i] = rb;
    w.g[i] = rb;
    w.h2[i] = (e2 == 0.0 ? 1.0 : std::pow(K, e2)) * rb;
    w.psi[i] = epsi == 0.0 ? 1.0 : std::pow(K, epsi);
  }
  return w;
}

SchurWeights default_weights(const Domain& domain, const QuadratureGrid& grid,
                             double p, double q) {
  check_exponents(p, q);
  const double pc = p / (p - 1.0);
  return power_weights(domain, grid, p, q, 1.0 / (pc + q));
}

SchurCertificate certify(const KernelMatrix& K, const SchurWeights& w,
                         const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                         double p, double q, const std::string& grid_id) {
  check_exponents(p, q);
  const std::size_t nx = K.rows(), ny = K.cols();
  if (static_cast<std::size_t>(mu.size()) != nx || static_cast<std::size_t>(nu.size()) != ny ||
      static_cast<std::size_t>(w.h1.size()) != ny || static_cast<std::size_t>(w.h2.size()) != ny ||
      static_cast<std::size_t>(w.psi.size()) != ny || static_cast<std::size_t>(w.g.size()) != nx)
    throw std::invalid_argument("weight vectors do not match the grids");
  if ((w.h1.array() <= 0).any() || (w.h2.array() <= 0).any() || (w.g.array() <= 0).any())
    throw std::invalid_argument("Schur weights must be strictly positive");
  const double pc = p / (p - 1.0);
  SchurCertificate c;
  c.p = p;
  c.q = q;
  c.alpha = w.alpha;
  c.beta = w.beta;
  c.grid_id = grid_id;

  const Eigen::VectorXd v1 = w.h1.array().pow(pc) * nu.array();
  const Eigen::VectorXd s1 = K.abs_power_rows(w.alpha * pc, v1);
  c.C1 = (s1.array() / w.g.array().pow(pc)).maxCoeff();

  const Eigen::VectorXd v2 = w.g.array().pow(q) * mu.array();
  const Eigen::VectorXd s2 = K.abs_power_cols((1.0 - w.alpha) * q, v2);
  c.C2 = (s2.array() / w.h2.array().pow(q)).maxCoeff();

  c.M = (w.h2.array() / w.h1.array() * w.psi.array().abs()).maxCoeff();
  if (!std::isfinite(c.C1) || !std::isfinite(c.C2) || !std::isfinite(c.M))
    throw NumericalError("non-finite Schur test integral");
  c.bound = c.recompute();
  return c;
}

SchurCertificate optimize_beta(const Domain& domain, const QuadratureGrid& grid,
                               const KernelMatrix& K, double p, double q,
                               int iterations) {
  check_exponents(p, q);
  const double pc = p / (p - 1.0);
  const double bmax = std::min(1.0 / pc, 1.0 / q);
  const Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(grid.weights.data(),
                                                               grid.weights.size());
  auto eval = [&](double beta) {
    return certify(K, power_weights(domain, grid, p, q, beta), mu, mu, p, q, grid.id());
  };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-3 * bmax, hi = (1.0 - 1e-3) * bmax;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  SchurCertificate c1 = eval(x1), c2 = eval(x2);
  for (int it = 0; it < iterations; ++it) {
    if (c1.bound < c2.bound) {
      hi = x2;
      x2 = x1;
      c2 = c1;
      x1 = hi - gr * (hi - lo);
      c1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      c1 = c2;
      x2 = lo + gr * (hi - lo);
      c2 = eval(x2);
    }
  }
  SchurCertificate best = c1.bound < c2.bound ? c1 : c2;
  const SchurCertificate def = eval(1.0 / (pc + q));
  return def.bound < best.bound ? def : best;
}

double tau(double p, double q, double beta) {
  check_exponents(p, q);
  const double pc = p / (p - 1.0);
  if (!(beta > 0.0 && beta < std::min(1.0 / pc, 1.0 / q)))
    throw std::invalid_argument("beta range violation: need 0 < beta < min(1/p', 1/q)");
  const double bp = beta * pc, bq = beta * q;
  const double x = 2.0 * q / p - 2.0;
  const double first = std::pow(1.0 / (bp * (1.0 - bp)), 1.0 / pc);
  const double second = std::pow((x + 1.0) / ((x + bq) * (1.0 - bq)), 1.0 / q);
  return first * second;
}

TauCheck tau_bound_check(double p, double q) {
  check_exponents(p, q);
  const double pc = p / (p - 1.0);
  TauCheck t;
  t.lhs = tau(p, q, 1.0 / (pc + q));
  t.rhs = 4.0 * std::pow(pc + q, 1.0 - 1.0 / p + 1.0 / q);
  t.ok = t.lhs <= t.rhs;
  return t;
}

double norm_bound(double p, double q, double C_fit) {
  check_exponents(p, q);
  if (!(C_fit > 0.0)) throw std::invalid_argument("C_fit must be positive");
  return C_fit * std::pow(p / (p - 1.0) + q, 1.0 - 1.0 / p + 1.0 / q);
}

}  // namespace bergman
