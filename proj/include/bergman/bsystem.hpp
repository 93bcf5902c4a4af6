#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bergman/domains.hpp"

namespace bergman {

struct BSystemOptions {
  double neighborhood = 1.0;
  double band = 0.2;
  double type_threshold = 1e-3;
  int order_cap = 16;
};

// Approach ray: boundary point p and depths delta = |r(z)|.
struct Ray {
  Point boundary_point;
  std::vector<double> deltas;
};

std::vector<double> log_spaced(double lo, double hi, int count);
// Real-axis ray (strongly pseudoconvex for disc and ball, weak for Egg).
Ray axis_ray(const Domain& domain, std::vector<double> deltas);
// Ray into a strongly pseudoconvex point with |z1|^2 = |z2|^{2m} = 1/2.
Ray strong_ray(const Domain& domain, std::vector<double> deltas);
std::vector<Point> ray_points(const Domain& domain, const Ray& ray);

// B-system at an interior point z near the boundary.  Points passed to the
// member functions are in the original coordinates; the unitary affine map
// z -> (<z - p, N>, <z - p, T>) is applied internally.
class BSystem {
 public:
  const Domain& domain() const { return domain_; }
  const Point& base() const { return z_; }
  const Point& boundary_point() const { return p_; }
  const Point& normal() const { return normal_; }
  const Point& tangent() const { return tangent_; }
  double r_abs() const { return r_abs_; }
  int m() const { return m_; }
  double neighborhood() const { return c_; }
  // A_{2k}(z') for k = 2..m; zero for n = 1.
  double A(int j, int k) const;
  const std::vector<double>& A_row() const { return A2_; }

  Point to_local(const Point& w) const;
  Point to_global(const Point& w_local) const;
  bool in_neighborhood(const Point& w) const;

  double pseudo_distance(const Point& w) const;
  std::array<double, 2> b(const Point& w) const;
  std::array<double, 2> b_diag() const { return b(z_); }

 private:
  friend BSystem build_bsystem(const Domain&, const Point&, const BSystemOptions&);
  explicit BSystem(const Domain& d) : domain_(d) {}

  Domain domain_;
  Point z_{};
  Point p_{};
  Point normal_{};
  Point tangent_{};
  double r_abs_ = 0.0;
  int m_ = 2;
  double c_ = 1.0;
  std::vector<double> A2_;
};

// A_{2k} at point z along unit direction v, k = 2..order.
std::vector<double> tangential_coefficients(const Domain& domain, const Point& z,
                                            const Point& v, int order);

BSystem build_bsystem(const Domain& domain, const Point& z,
                      const BSystemOptions& opts = {});

struct Polydisc {
  Point center;  // original coordinates
  std::array<double, 2> radii{};
  double lambda = 0.0;
  int n = 1;
  // w in original coordinates.
  bool contains(const BSystem& bs, const Point& w) const;
};

Polydisc polydisc(const BSystem& bs, double lambda);
double polydisc_volume(const BSystem& bs, double lambda);

struct ContainmentResult {
  bool contained;
  double margin;  // max r(w) / |r(z)| over samples
  std::size_t samples;
};
ContainmentResult polydisc_containment_check(const BSystem& bs, double lambda,
                                             std::size_t samples = 1024);

// max |K(z,w)| / prod b_j(z,w)^2 over sampled w in the neighborhood.
double btype_upper_check(const BSystem& bs, std::size_t sample_count,
                         std::uint64_t seed = 1);

struct DiagonalBand {
  std::vector<double> deltas;
  std::vector<double> kernel;   // K(z,z)
  std::vector<double> product;  // prod b_j(z,z)^2
  std::vector<double> ratios;
  double ratio_min;
  double ratio_max;
  double kernel_slope;   // log K vs log |r|
  double product_slope;  // log prod b^2 vs log |r|
};
DiagonalBand sharp_diagonal_check(const Domain& domain, const Ray& ray,
                                  const BSystemOptions& opts = {});

// max |K(z,w)| / [K(z,z) (|r(z)|/(|r(z)|+|r(w)|))^2] over sampled w.
double kernel_domination_check(const BSystem& bs, std::size_t samples,
                               std::uint64_t seed = 1);

// max K(w,w)/K(z,z) over sampled w in P_lambda(z).
double comparability_on_polydisc(const BSystem& bs, double lambda,
                                 std::size_t samples = 2048,
                                 std::uint64_t seed = 1);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bergman
