#include "bergman/bsystem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

cplx inner(const Point& a, const Point& b) {
  return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]);
}

double dist(const Point& a, const Point& b) {
  return std::sqrt(std::norm(a[0] - b[0]) + std::norm(a[1] - b[1]));
}

double falling(int m, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= (m - i);
  return f;
}

}  // namespace

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi > 0.0))
    throw std::invalid_argument("log_spaced needs positive bounds and count >= 1");
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = hi;
    return v;
  }
  for (int i = 0; i < count; ++i)
    v[i] = std::exp(std::log(hi) + (std::log(lo) - std::log(hi)) * i / (count - 1));
  return v;
}

Ray axis_ray(const Domain&, std::vector<double> deltas) {
  return {Point{1.0, 0.0}, std::move(deltas)};
}

Ray strong_ray(const Domain& domain, std::vector<double> deltas) {
  if (domain.n() == 1) return axis_ray(domain, std::move(deltas));
  const double e = domain.z2_power();
  return {Point{std::sqrt(0.5), std::pow(0.5, 0.5 / e)}, std::move(deltas)};
}

std::vector<Point> ray_points(const Domain& domain, const Ray& ray) {
  std::vector<Point> pts;
  pts.reserve(ray.deltas.size());
  for (double d : ray.deltas) pts.push_back(domain.ray_point(ray.boundary_point, d));
  return pts;
}

std::vector<double> tangential_coefficients(const Domain& domain, const Point& z,
                                            const Point& v, int order) {
  std::vector<double> A(order + 1, 0.0);
  if (domain.n() == 1) return A;
  // r(z + l v) = |z1 + l v1|^2 + |z2 + l v2|^{2e} - 1; the mixed derivative
  // d^{k1}/dl^{k1} d^{k2}/dlbar^{k2} of (c + l d)^e (cbar + lbar dbar)^e at
  // l = 0 is e!/(e-k1)! c^{e-k1} d^{k1} * e!/(e-k2)! cbar^{e-k2} dbar^{k2}.
  const int e = domain.z2_power();
  const double c = std::abs(z[1]);
  const double d = std::abs(v[1]);
  for (int k = 2; k <= order; ++k) {
    double sum = 0.0;
    for (int k1 = 1; k1 < k; ++k1) {
      const int k2 = k - k1;
      double term = 0.0;
      if (k1 == 1 && k2 == 1) term += std::norm(v[0]);
      if (k1 <= e && k2 <= e)
        term += falling(e, k1) * falling(e, k2) * std::pow(c, 2 * e - k) *
                std::pow(d, k);
      sum += term;
    }
    A[k] = sum;
  }
  return A;
}

BSystem build_bsystem(const Domain& domain, const Point& z,
                      const BSystemOptions& opts) {
  const double rz = domain.r(z);
  if (!(rz < 0.0) || -rz > opts.band) {
    std::ostringstream os;
    os << "point outside boundary band: |r(z)| = " << std::abs(rz)
       << " (band " << opts.band << ")";
    throw std::invalid_argument(os.str());
  }
  BSystem bs(domain);
  bs.z_ = z;
  bs.r_abs_ = -rz;
  bs.c_ = opts.neighborhood;
  bs.p_ = domain.project_to_boundary(z);
  const Point& p = bs.p_;
  Point grad{p[0], 0.0};
  if (domain.n() == 2) {
    const int e = domain.z2_power();
    grad[1] = static_cast<double>(e) * p[1] * std::pow(std::norm(p[1]), e - 1);
  }
  const double gn = std::sqrt(std::norm(grad[0]) + std::norm(grad[1]));
  bs.normal_ = {grad[0] / gn, grad[1] / gn};
  bs.tangent_ = {-std::conj(bs.normal_[1]), std::conj(bs.normal_[0])};
  if (domain.n() == 1) {
    bs.m_ = 2;
    bs.A2_.assign(3, 0.0);
    return bs;
  }
  const int top = domain.max_type();
  if (top > opts.order_cap)
    throw std::invalid_argument("derivative order cap exceeded: type " +
                                std::to_string(top) + " > cap " +
                                std::to_string(opts.order_cap));
  const std::vector<double> at_p =
      tangential_coefficients(domain, p, bs.tangent_, top);
  int m = top;
  for (int k = 2; k <= top; ++k)
    if (at_p[k] >= opts.type_threshold) {
      m = k;
      break;
    }
  bs.m_ = m;
  bs.A2_ = tangential_coefficients(domain, z, bs.tangent_, m);
  return bs;
}

double BSystem::A(int j, int k) const {
  if (j < 2 || j > domain_.n() || k < 2 || k > m_) return 0.0;
  return A2_[k];
}

Point BSystem::to_local(const Point& w) const {
  const Point d{w[0] - p_[0], w[1] - p_[1]};
  return {inner(d, normal_), domain_.n() == 1 ? cplx(0.0) : inner(d, tangent_)};
}

Point BSystem::to_global(const Point& wl) const {
  if (domain_.n() == 1) return {p_[0] + wl[0] * normal_[0], 0.0};
  return {p_[0] + wl[0] * normal_[0] + wl[1] * tangent_[0],
          p_[1] + wl[0] * normal_[1] + wl[1] * tangent_[1]};
}

bool BSystem::in_neighborhood(const Point& w) const { return dist(w, z_) <= c_; }

double BSystem::pseudo_distance(const Point& w) const {
  if (!in_neighborhood(w))
    throw std::invalid_argument("point outside the B-system neighborhood");
  const Point zl = to_local(z_);
  const Point wl = to_local(w);
  double d = r_abs_ + std::abs(domain_.r(w)) + std::abs(zl[0] - wl[0]);
  if (domain_.n() == 2) {
    const double t = std::abs(zl[1] - wl[1]);
    for (int s = 2; s <= m_; ++s) d += A2_[s] * std::pow(t, s);
  }
  return d;
}

std::array<double, 2> BSystem::b(const Point& w) const {
  const double d = pseudo_distance(w);
  std::array<double, 2> out{1.0 / d, 0.0};
  if (domain_.n() == 2)
    for (int k = 2; k <= m_; ++k) out[1] += std::pow(A2_[k] / d, 1.0 / k);
  return out;
}

bool Polydisc::contains(const BSystem& bs, const Point& w) const {
  const Point zl = bs.to_local(center);
  const Point wl = bs.to_local(w);
  const auto bd = bs.b_diag();
  for (int j = 0; j < n; ++j)
    if (std::abs(wl[j] - zl[j]) * bd[j] > lambda) return false;
  return true;
}

Polydisc polydisc(const BSystem& bs, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  const auto bd = bs.b_diag();
  Polydisc P;
  P.center = bs.base();
  P.lambda = lambda;
  P.n = bs.domain().n();
  for (int j = 0; j < P.n; ++j) {
    if (!(bd[j] > 0.0))
      throw std::invalid_argument("degenerate direction: b_" +
                                  std::to_string(j + 1) + "(z,z) = 0");
    P.radii[j] = lambda / bd[j];
  }
  return P;
}

double polydisc_volume(const BSystem& bs, double lambda) {
  const auto bd = bs.b_diag();
  const int n = bs.domain().n();
  double prod = 1.0;
  for (int j = 0; j < n; ++j) {
    if (!(bd[j] > 0.0)) throw std::invalid_argument("degenerate direction");
    prod *= bd[j] * bd[j];
  }
  return std::pow(kPi, n) * std::pow(lambda, 2 * n) / prod;
}

namespace {

Point polydisc_point(const BSystem& bs, const Polydisc& P, double t1, double a1,
                     double t2, double a2) {
  const Point zl = bs.to_local(P.center);
  Point wl{zl[0] + std::polar(t1 * P.radii[0], a1), zl[1]};
  if (P.n == 2) wl[1] = zl[1] + std::polar(t2 * P.radii[1], a2);
  return bs.to_global(wl);
}

// Samples of the c-neighborhood mixing isotropic random offsets with offsets
// aligned to the local frame at the scales lambda / b_j(z,z).
std::vector<Point> neighborhood_samples(const BSystem& bs, std::size_t count,
                                        std::uint64_t seed) {
  const Domain& d = bs.domain();
  const int n = d.n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  const auto bd = bs.b_diag();
  const double c = bs.neighborhood();
  const double tmin = std::max(1e-3 * bs.r_abs(), 1e-12);
  std::vector<Point> pts{bs.base()};
  const Point zl = bs.to_local(bs.base());
  std::size_t attempts = 0;
  while (pts.size() < count && attempts < 50 * count) {
    ++attempts;
    Point w;
    if (attempts % 3 == 0) {
      // Tangential offset, then slide along the local normal to a target depth.
      const double t = tmin * std::pow(c / tmin, unit(rng));
      const double depth = std::max(bs.r_abs() * std::pow(10.0, 1.0 - 5.0 * unit(rng)),
                                    2 * d.kernel_floor());
      Point wl = zl;
      const double u = t * std::pow(10.0, -3.0 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
      if (n == 2)
        wl[1] += std::polar(t, 2 * kPi * unit(rng));
      else
        wl[0] += cplx(0.0, t);
      if (n == 2) wl[0] += cplx(0.0, u);
      auto at = [&](double sh) {
        Point v = wl;
        v[0] += sh;
        return bs.to_global(v);
      };
      double lo = -c, hi = c;
      if (!(d.r(at(lo)) < -depth) || !(d.r(at(hi)) > -depth)) continue;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (d.r(at(mid)) < -depth ? lo : hi) = mid;
      }
      w = at(lo);
    } else if (attempts % 3 == 1) {
      Point u{cplx(gauss(rng), gauss(rng)),
              n == 2 ? cplx(gauss(rng), gauss(rng)) : cplx(0.0)};
      const double un = std::sqrt(std::norm(u[0]) + std::norm(u[1]));
      const double t = tmin * std::pow(c / tmin, unit(rng));
      w = {bs.base()[0] + t * u[0] / un, bs.base()[1] + t * u[1] / un};
    } else {
      const double lam = std::pow(10.0, -3.0 + 6.0 * unit(rng));
      Point wl{zl[0] + std::polar(lam * unit(rng) / bd[0], 2 * kPi * unit(rng)),
               zl[1]};
      if (n == 2 && bd[1] > 0.0)
        wl[1] = zl[1] + std::polar(lam * unit(rng) / bd[1], 2 * kPi * unit(rng));
      w = bs.to_global(wl);
    }
    if (!bs.in_neighborhood(w)) continue;
    if (!(d.r(w) <= -d.kernel_floor() + 1e-13)) continue;
    pts.push_back(w);
  }
  return pts;
}

double prod_b2(const std::array<double, 2>& b, int n) {
  double p = b[0] * b[0];
  if (n == 2) p *= b[1] * b[1];
  return p;
}

}  // namespace

ContainmentResult polydisc_containment_check(const BSystem& bs, double lambda,
                                             std::size_t samples) {
  const Polydisc P = polydisc(bs, lambda);
  const Domain& d = bs.domain();
  ContainmentResult res{true, -std::numeric_limits<double>::infinity(), 0};
  auto visit = [&](const Point& w) {
    const double rel = d.r(w) / bs.r_abs();
    res.margin = std::max(res.margin, rel);
    if (!(d.r(w) < 0.0)) res.contained = false;
    ++res.samples;
  };
  if (P.n == 1) {
    const std::size_t k = std::max<std::size_t>(samples, 1000);
    for (std::size_t i = 0; i < k; ++i)
      visit(polydisc_point(bs, P, 1.0, 2 * kPi * i / k, 0.0, 0.0));
    return res;
  }
  // Torus corners plus the two families of faces.
  const std::size_t side = std::max<std::size_t>(
      32, static_cast<std::size_t>(std::ceil(std::sqrt(samples / 3.0))));
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) {
      const double a1 = 2 * kPi * i / side, a2 = 2 * kPi * j / side;
      const double t = (j + 0.5) / side;
      visit(polydisc_point(bs, P, 1.0, a1, 1.0, a2));
      visit(polydisc_point(bs, P, 1.0, a1, t, a2 * 7.0));
      visit(polydisc_point(bs, P, t, a2 * 7.0, 1.0, a1));
    }
  return res;
}

double btype_upper_check(const BSystem& bs, std::size_t sample_count,
                         std::uint64_t seed) {
  const Domain& d = bs.domain();
  double best = 0.0;
  for (const Point& w : neighborhood_samples(bs, sample_count, seed)) {
    const double v = std::abs(d.kernel(bs.base(), w)) / prod_b2(bs.b(w), d.n());
    best = std::max(best, v);
  }
  return best;
}

double kernel_domination_check(const BSystem& bs, std::size_t samples,
                               std::uint64_t seed) {
  const Domain& d = bs.domain();
  const double kzz = d.kernel_diag(bs.base());
  const double rz = bs.r_abs();
  double best = 0.0;
  for (const Point& w : neighborhood_samples(bs, samples, seed)) {
    const double f = rz / (rz + std::abs(d.r(w)));
    best = std::max(best, std::abs(d.kernel(bs.base(), w)) / (kzz * f * f));
  }
  return best;
}

double comparability_on_polydisc(const BSystem& bs, double lambda,
                                 std::size_t samples, std::uint64_t seed) {
  const ContainmentResult c = polydisc_containment_check(bs, lambda);
  if (!c.contained)
    throw std::runtime_error("containment failure: polydisc leaves the domain "
                             "(margin " + std::to_string(c.margin) + ")");
  const Polydisc P = polydisc(bs, lambda);
  const Domain& d = bs.domain();
  const double kzz = d.kernel_diag(bs.base());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double best = 1.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const bool corner = i % 4 == 0;
    const double t1 = corner ? 1.0 : std::sqrt(unit(rng));
    const double t2 = corner ? 1.0 : std::sqrt(unit(rng));
    const Point w = polydisc_point(bs, P, t1, 2 * kPi * unit(rng), t2,
                                   2 * kPi * unit(rng));
    if (!(d.r(w) <= -d.kernel_floor() + 1e-13)) continue;
    best = std::max(best, d.kernel_diag(w) / kzz);
  }
  return best;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("slope needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DiagonalBand sharp_diagonal_check(const Domain& domain, const Ray& ray,
                                  const BSystemOptions& opts) {
  DiagonalBand out{};
  out.ratio_min = std::numeric_limits<double>::infinity();
  out.ratio_max = 0.0;
  for (double delta : ray.deltas) {
    const Point z = domain.ray_point(ray.boundary_point, delta);
    const BSystem bs = build_bsystem(domain, z, opts);
    const double K = domain.kernel_diag(z);
    const double P = prod_b2(bs.b_diag(), domain.n());
    out.deltas.push_back(bs.r_abs());
    out.kernel.push_back(K);
    out.product.push_back(P);
    out.ratios.push_back(K / P);
    out.ratio_min = std::min(out.ratio_min, K / P);
    out.ratio_max = std::max(out.ratio_max, K / P);
  }
  if (out.deltas.size() >= 2) {
    out.kernel_slope = loglog_slope(out.deltas, out.kernel);
    out.product_slope = loglog_slope(out.deltas, out.product);
  }
  return out;
}

}  // namespace bergman
