#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bergman/quadrature.hpp"

namespace bergman {

namespace {

void check_ab(double a, double b) {
  if (!(a >= 1.0) || !(b > -1.0) || !(b < 2.0 * a - 2.0)) {
    std::ostringstream os;
    os << "parameter range violation: need a >= 1 and -1 < b < 2a - 2, got a = "
       << a << ", b = " << b;
    throw std::invalid_argument(os.str());
  }
}

IntegralResult two_level(double coarse, double fine, std::size_t nodes,
                         double rel_tol) {
  IntegralResult res{fine, std::abs(fine - coarse), coarse, nodes};
  if (!(res.error <= rel_tol * std::abs(fine))) {
    std::ostringstream os;
    os << "quadrature error estimate " << res.error << " above tolerance "
       << rel_tol << " * |I| = " << rel_tol * std::abs(fine);
    throw NumericalError(os.str());
  }
  return res;
}

}  // namespace

double kappa(double a, double b) {
  check_ab(a, b);
  return boost::math::beta(b + 1.0, 2.0 * a - 2.0 - b);
}

double kappa_bound(double a, double b) {
  check_ab(a, b);
  return (2.0 * a - 1.0) / ((2.0 * a - 2.0 - b) * (b + 1.0));
}

IntegralResult integral_Iab(const Domain& domain, const FocusSpec& spec,
                            const Point& z, double a, double b, double rel_tol) {
  check_ab(a, b);
  if (!(domain.r(z) < 0.0)) throw std::invalid_argument("z must be interior");
  auto f = [&](const Point& w, double s) {
    return std::pow(std::abs(domain.kernel(z, w)), a) * std::pow(s, b);
  };
  const ProductRule coarse = focused_rule(domain, z, spec);
  const ProductRule fine = focused_rule(domain, z, spec.refined());
  return two_level(coarse.integrate(f), fine.integrate(f), fine.size(), rel_tol);
}

IntegralResult integral_Iab(const Domain& domain, const GridSpec& spec,
                            const Point& z, double a, double b, double rel_tol) {
  check_ab(a, b);
  if (!(domain.r(z) < 0.0)) throw std::invalid_argument("z must be interior");
  auto f = [&](const Point& w, double s) {
    return std::pow(std::abs(domain.kernel(z, w)), a) * std::pow(s, b);
  };
  const QuadratureGrid coarse = build_grid(domain, spec);
  const QuadratureGrid fine = build_grid(domain, spec.refined());
  return two_level(integrate_grid(coarse, f), integrate_grid(fine, f), fine.size(),
                   rel_tol);
}

IabReport iab_bound_check(const Domain& domain, const Ray& ray, double a, double b,
                          const FocusSpec& spec, double rel_tol) {
  IabReport rep;
  rep.a = a;
  rep.b = b;
  const double kb = kappa_bound(a, b);
  rep.ratio_min = std::numeric_limits<double>::infinity();
  for (double delta : ray.deltas) {
    const Point z = domain.ray_point(ray.boundary_point, delta);
    const IntegralResult I = integral_Iab(domain, spec, z, a, b, rel_tol);
    const double K = domain.kernel_diag(z);
    const double s = -domain.r(z);
    const double ref = kb * std::pow(K, a - 1.0) * std::pow(s, b);
    rep.deltas.push_back(s);
    rep.values.push_back(I.value);
    rep.errors.push_back(I.error);
    rep.kernel.push_back(K);
    rep.reference.push_back(ref);
    rep.ratios.push_back(I.value / ref);
    rep.ratio_min = std::min(rep.ratio_min, I.value / ref);
    rep.ratio_max = std::max(rep.ratio_max, I.value / ref);
  }
  return rep;
}

std::vector<double> mj_sequence(const BSystem& bs, const std::array<double, 2>& rho,
                                double r_abs) {
  const int n = bs.domain().n();
  for (int j = 0; j < n; ++j)
    if (!(rho[j] >= 0.0)) throw std::invalid_argument("rho must be nonnegative");
  std::vector<double> M(n);
  M[0] = r_abs + rho[0];
  for (int j = 1; j < n; ++j) {
    double inc = 0.0;
    for (int k = 2; k <= bs.m(); ++k) inc += bs.A(j + 1, k) * std::pow(rho[j], k);
    M[j] = M[j - 1] + inc;
  }
  return M;
}

double claim_value(const std::vector<double>& A, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("claim needs M_{j-1} > 0");
  int kmax = 0;
  double prefactor = 0.0, scale = std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k < A.size(); ++k) {
    if (A[k] < 0.0) throw std::invalid_argument("A_jk must be nonnegative");
    if (A[k] == 0.0) continue;
    kmax = static_cast<int>(k);
    prefactor += std::pow(A[k] / M, 1.0 / k);
    scale = std::min(scale, std::pow(M / A[k], 1.0 / k));
  }
  if (kmax == 0) return 0.0;
  auto g = [&](double rho) {
    double d = M;
    for (std::size_t k = 2; k < A.size(); ++k) d += A[k] * std::pow(rho, k);
    return 1.0 / d;
  };
  auto tail = [&](double R) {
    return std::pow(R, 1.0 - kmax) / ((kmax - 1.0) * A[kmax]);
  };
  const Rule1D gl = gauss_legendre(20);
  double acc = 0.0, lo = 0.0, hi = scale / 16.0;
  for (int cell = 0; cell < 400; ++cell) {
    const double h = 0.5 * (hi - lo), m = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < gl.x.size(); ++i) acc += h * gl.w[i] * g(m + h * gl.x[i]);
    lo = hi;
    hi *= 2.0;
    if (lo > 4.0 * scale && tail(lo) < 1e-8 * acc) break;
  }
  return prefactor * (acc + tail(lo)) * M;
}

double claim_check(const BSystem& bs, int j, const std::vector<double>& rho_partial) {
  const int n = bs.domain().n();
  if (j < 2 || j > n) throw std::invalid_argument("claim index j must lie in 2..n");
  if (static_cast<int>(rho_partial.size()) < j - 1)
    throw std::invalid_argument("rho_partial needs j - 1 entries");
  std::array<double, 2> rho{0.0, 0.0};
  for (int i = 0; i < j - 1; ++i) rho[i] = rho_partial[i];
  const double M = mj_sequence(bs, rho, bs.r_abs())[j - 2];
  std::vector<double> A(bs.m() + 1, 0.0);
  for (int k = 2; k <= bs.m(); ++k) A[k] = bs.A(j, k);
  return claim_value(A, M);
}

}  // namespace bergman
