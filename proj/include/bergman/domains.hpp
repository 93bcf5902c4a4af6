#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

using cplx = std::complex<double>;

// Points always carry two coordinates; for the disc the second one is zero.
using Point = std::array<cplx, 2>;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DomainKind { UnitDisc, UnitBall2, Egg };
enum class KernelStrategy { ClosedForm, MonomialSeries };

struct SeriesOptions {
  int max_degree = 0;  // 0 selects 200 (n = 1) or 120 per variable (n = 2)
  double tail_tol = 1e-10;
  std::size_t table_cap = 4'000'000;
};

// Squared L2 norms of monomials z1^a z2^b, a and b up to max_degree.
class MonomialTable {
 public:
  MonomialTable(int n, int max_degree, std::vector<double> norms);

  int n() const { return n_; }
  int max_degree() const { return max_degree_; }
  double norm(int a, int b = 0) const;
  std::size_t size() const { return norms_.size(); }

 private:
  int n_;
  int max_degree_;
  std::vector<double> norms_;
};

struct SeriesValue {
  cplx value;
  double tail;  // bound on the truncated remainder
};

class Domain {
 public:
  static Domain disc();
  static Domain ball2();
  static Domain egg(int m);
  // Accepts "disc", "ball2", "egg:m=<int>".
  static Domain parse(const std::string& id);

  DomainKind kind() const { return kind_; }
  int n() const { return n_; }
  // Finite-type parameter: 1 for disc and ball, m for Egg(m).
  int m() const { return m_; }
  // Exponent of |z2|^2 in the defining function.
  int z2_power() const { return kind_ == DomainKind::Egg ? m_ : 1; }
  // Maximal contact order of the boundary: 2 or 2m.
  int max_type() const { return 2 * m_; }
  std::string id() const;

  KernelStrategy strategy() const { return strategy_; }
  const SeriesOptions& series_options() const { return series_; }
  Domain with_strategy(KernelStrategy s, SeriesOptions opts = {}) const;

  double kernel_floor() const { return 1e-8; }

  double r(const Point& z) const;
  bool interior(const Point& z) const { return r(z) < 0.0; }
  double volume() const;
  double diameter() const { return 2.0; }

  cplx kernel(const Point& z, const Point& w) const;
  double kernel_diag(const Point& z) const;
  // Closed form evaluated without the boundary guard; valid on the closure
  // away from the boundary diagonal.
  cplx kernel_closure(const Point& z, const Point& w) const;
  SeriesValue kernel_series(const Point& z, const Point& w) const;
  const MonomialTable& table() const;

  // t * p with r(t p) = -delta, for p a boundary point.
  Point ray_point(const Point& p, double delta) const;
  // Scaling of a nonzero direction onto the boundary.
  Point project_to_boundary(const Point& z) const;

 private:
  Domain(DomainKind kind, int n, int m) : kind_(kind), n_(n), m_(m) {}
  void check_interior(const Point& z, const char* name) const;

  DomainKind kind_;
  int n_;
  int m_;
  KernelStrategy strategy_ = KernelStrategy::ClosedForm;
  SeriesOptions series_;
  std::shared_ptr<const MonomialTable> table_;
};

MonomialTable monomial_norms(const Domain& domain, int max_degree,
                             std::size_t cap = 4'000'000);

// Sup of |K(z,w)| over sampled pairs of the closure with |z - w| >= s.
double offdiagonal_sup(const Domain& domain, double separation,
                       std::size_t sample_count, std::uint64_t seed = 1);

// Empirical c1, c2 with c1 dist(z) <= |r(z)| <= c2 dist(z).
struct BoundaryConstants {
  double c1;
  double c2;
};
BoundaryConstants boundary_constants(const Domain& domain,
                                     std::size_t samples = 2000,
                                     std::uint64_t seed = 1);

double distance_to_boundary(const Domain& domain, const Point& z);

}  // namespace bergman
