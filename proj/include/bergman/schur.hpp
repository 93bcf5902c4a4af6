#pragma once

#include <Eigen/Dense>
#include <string>

#include "bergman/domains.hpp"
#include "bergman/kernel_matrix.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

struct SchurWeights {
  double alpha = 0.0;
  double beta = 0.0;
  Eigen::VectorXd h1;    // source nodes
  Eigen::VectorXd h2;    // source nodes
  Eigen::VectorXd g;     // target nodes
  Eigen::VectorXcd psi;  // source nodes
};

struct SchurCertificate {
  double p = 0.0, q = 0.0;
  double alpha = 0.0, beta = 0.0;
  double C1 = 0.0, C2 = 0.0, M = 0.0;
  double bound = 0.0;
  std::string grid_id;

  double p_conj() const { return p / (p - 1.0); }
  double q_conj() const { return q / (q - 1.0); }
  // C1^{(p-1)/p} C2^{1/q} M.
  static double assemble(double p, double q, double C1, double C2, double M);
  double recompute() const { return assemble(p, q, C1, C2, M); }
  std::string to_json() const;
};

void check_exponents(double p, double q);

// alpha = 1 - 1/p, beta = 1/(p' + q), h1 = g = |r|^{-beta},
// h2 = K^{((1-alpha)q-1)/q} |r|^{-beta}, psi = K^{1/q - 1/p}.
SchurWeights default_weights(const Domain& domain, const QuadratureGrid& grid,
                             double p, double q);
// Same family with an explicit beta.
SchurWeights power_weights(const Domain& domain, const QuadratureGrid& grid,
                           double p, double q, double beta);

SchurCertificate certify(const KernelMatrix& K, const SchurWeights& w,
                         const Eigen::VectorXd& mu_target,
                         const Eigen::VectorXd& nu_source, double p, double q,
                         const std::string& grid_id = "");

// Golden-section search of beta over (0, min(1/p', 1/q)) minimizing the
// certified bound within the power_weights family.
SchurCertificate optimize_beta(const Domain& domain, const QuadratureGrid& grid,
                               const KernelMatrix& K, double p, double q,
                               int iterations = 40);

double tau(double p, double q, double beta);

struct TauCheck {
  double lhs;
  double rhs;
  bool ok;
};
TauCheck tau_bound_check(double p, double q);

// C_fit (p/(p-1) + q)^{1 - 1/p + 1/q}.
double norm_bound(double p, double q, double C_fit);

}  // namespace bergman
