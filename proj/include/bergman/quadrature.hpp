#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bergman/bsystem.hpp"
#include "bergman/domains.hpp"

namespace bergman {

// Polar (n = 1) or product-polar (n = 2) grid parameters.  Radial shells in
// s = |r| are geometric toward the boundary: [e_{k+1}, e_k] with e_0 = 1 and
// a final shell [0, e_{L-1}].
struct GridSpec {
  int levels = 10;
  int angular = 64;
  int order = 1;         // Gauss-Legendre nodes per radial cell
  int subdivisions = 1;  // equal radial cells per shell
  int tangential = 0;    // sigma nodes for n = 2; 0 means max(1, angular / 8)
  bool whitney = false;  // n = 1 only: shell k carries angular * 2^k nodes
  double depth = 0.0;    // > 0: e_{L-1} = depth, levels derived, ratio ~ 1/2
  double rfloor = 1e-8;
  std::size_t node_cap = 4'000'000;

  int effective_levels() const;
  std::vector<double> edges() const;  // e_0..e_{L-1}
  // One more shell (or half the depth), doubled angular and radial resolution.
  GridSpec refined() const;
  std::string id() const;
};

struct Ring {
  std::size_t begin;
  std::size_t count;
  double radius;
};

struct QuadratureGrid {
  int n = 1;
  std::string domain_id;
  GridSpec spec;
  std::vector<Point> nodes;
  std::vector<double> weights;
  std::vector<double> r_abs;
  // Disc grids only: rings of equispaced nodes starting at angle 0.
  std::vector<Ring> rings;

  std::size_t size() const { return nodes.size(); }
  double weight_sum() const;
  std::string id() const { return domain_id + "/" + spec.id(); }
};

QuadratureGrid build_grid(const Domain& domain, const GridSpec& spec);
QuadratureGrid build_grid(const Domain& domain, int levels, int angular);

// One-dimensional composite rules.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};
Rule1D gauss_legendre(int q);  // on [-1, 1]
// Cells [a, a+h0], then doubling widths up to b.
Rule1D graded_one_sided(double a, double b, double h0, int q);
// Cells doubling away from c on both sides, finest width h, within [a, b].
Rule1D graded_two_sided(double c, double a, double b, double h, int q);
Rule1D uniform_periodic(int count);

// Tensor-product rule focused on a point: s graded toward the boundary,
// angles and sigma graded toward the focus coordinates.
struct FocusSpec {
  int order = 4;
  double scale = 0.25;  // finest focused cell = scale * |r(focus)|
  int angular = 2;      // nodes for an angle whose focus coordinate vanishes
  double rfloor = 1e-8;
  std::size_t node_cap = 60'000'000;
  FocusSpec refined() const;
};

class ProductRule {
 public:
  ProductRule(const Domain& domain, Rule1D s, Rule1D sigma, Rule1D t1, Rule1D t2);
  std::size_t size() const;
  // Sum of f(w, |r(w)|) times the volume weight, reproducible across workers.
  double integrate(const std::function<double(const Point&, double)>& f) const;

 private:
  int n_;
  int e_;
  Rule1D s_, sigma_, t1_, t2_;
};

ProductRule focused_rule(const Domain& domain, const Point& focus,
                         const FocusSpec& spec);

double integrate_grid(const QuadratureGrid& grid,
                      const std::function<double(const Point&, double)>& f);

double kappa(double a, double b);
double kappa_bound(double a, double b);

struct IntegralResult {
  double value;
  double error;  // |fine - coarse|
  double coarse;
  std::size_t nodes;
};

IntegralResult integral_Iab(const Domain& domain, const FocusSpec& spec,
                            const Point& z, double a, double b,
                            double rel_tol = 0.05);
IntegralResult integral_Iab(const Domain& domain, const GridSpec& spec,
                            const Point& z, double a, double b,
                            double rel_tol = 0.05);

struct IabReport {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> deltas, values, errors, kernel, reference, ratios;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};
IabReport iab_bound_check(const Domain& domain, const Ray& ray, double a, double b,
                          const FocusSpec& spec = {}, double rel_tol = 0.05);

std::vector<double> mj_sequence(const BSystem& bs, const std::array<double, 2>& rho,
                                double r_abs);

// [sum_k (A_k/M)^{1/k}] * int_0^inf drho / (M + sum_k A_k rho^k) * M, with
// A indexed by k (entries below 2 ignored).
double claim_value(const std::vector<double>& A, double M);
double claim_check(const BSystem& bs, int j, const std::vector<double>& rho_partial);

}  // namespace bergman
