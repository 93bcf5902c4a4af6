#include "bergman/domains.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(const Point& z) { return std::norm(z[0]) + std::norm(z[1]); }

// Smallest t > 0 with t^2 a + t^{2e} b = target, for a, b >= 0 not both 0.
double solve_radial(double a, double b, int e, double target) {
  auto f = [&](double t) {
    return t * t * a + std::pow(t * t, e) * b - target;
  };
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  auto [lo, up] = boost::math::tools::toms748_solve(f, 0.0, hi, tol, iters);
  return 0.5 * (lo + up);
}

cplx random_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const double re = g(rng);
  return {re, g(rng)};
}

}  // namespace

MonomialTable::MonomialTable(int n, int max_degree, std::vector<double> norms)
    : n_(n), max_degree_(max_degree), norms_(std::move(norms)) {}

double MonomialTable::norm(int a, int b) const {
  if (a < 0 || b < 0 || a > max_degree_ || b > max_degree_ ||
      (n_ == 1 && b != 0))
    throw std::out_of_range("monomial index outside table");
  if (n_ == 1) return norms_[a];
  return norms_[static_cast<std::size_t>(a) * (max_degree_ + 1) + b];
}

Domain Domain::disc() { return Domain(DomainKind::UnitDisc, 1, 1); }
Domain Domain::ball2() { return Domain(DomainKind::UnitBall2, 2, 1); }
Domain Domain::egg(int m) {
  if (m < 2) throw std::invalid_argument("Egg(m) requires integer m >= 2");
  return Domain(DomainKind::Egg, 2, m);
}

Domain Domain::parse(const std::string& id) {
  if (id == "disc") return disc();
  if (id == "ball2") return ball2();
  if (id.rfind("egg:m=", 0) == 0) {
    const std::string tail = id.substr(6);
    std::size_t used = 0;
    int m = 0;
    try {
      m = std::stoi(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tail.size())
      throw std::invalid_argument("bad egg parameter in domain id '" + id + "'");
    return egg(m);
  }
  throw std::invalid_argument("unknown domain id '" + id +
                              "' (expected disc, ball2 or egg:m=<int>)");
}

std::string Domain::id() const {
  switch (kind_) {
    case DomainKind::UnitDisc: return "disc";
    case DomainKind::UnitBall2: return "ball2";
    case DomainKind::Egg: return "egg:m=" + std::to_string(m_);
  }
  return "";
}

Domain Domain::with_strategy(KernelStrategy s, SeriesOptions opts) const {
  Domain d = *this;
  d.strategy_ = s;
  d.series_ = opts;
  d.table_.reset();
  if (s == KernelStrategy::MonomialSeries) {
    if (d.series_.max_degree == 0) d.series_.max_degree = n_ == 1 ? 200 : 120;
    d.table_ = std::make_shared<const MonomialTable>(
        monomial_norms(d, d.series_.max_degree, d.series_.table_cap));
  }
  return d;
}

const MonomialTable& Domain::table() const {
  if (!table_) throw std::logic_error("domain has no monomial table");
  return *table_;
}

double Domain::r(const Point& z) const {
  switch (kind_) {
    case DomainKind::UnitDisc: return std::norm(z[0]) - 1.0;
    case DomainKind::UnitBall2: return norm2(z) - 1.0;
    case DomainKind::Egg:
      return std::norm(z[0]) + std::pow(std::norm(z[1]), m_) - 1.0;
  }
  return 0.0;
}

double Domain::volume() const {
  if (n_ == 1) return kPi;
  const double e = z2_power();
  return kPi * kPi * e / (e + 1.0);
}

void Domain::check_interior(const Point& z, const char* name) const {
  const double rz = r(z);
  if (!(rz <= -kernel_floor() + 1e-13)) {
    std::ostringstream os;
    os << "kernel evaluation requires |r(" << name << ")| >= " << kernel_floor()
       << " inside the domain, got r = " << rz;
    throw std::domain_error(os.str());
  }
}

cplx Domain::kernel_closure(const Point& z, const Point& w) const {
  const cplx x = z[0] * std::conj(w[0]);
  switch (kind_) {
    case DomainKind::UnitDisc: {
      const cplx d = 1.0 - x;
      return 1.0 / (kPi * d * d);
    }
    case DomainKind::UnitBall2: {
      const cplx d = 1.0 - x - z[1] * std::conj(w[1]);
      return 2.0 / (kPi * kPi * d * d * d);
    }
    case DomainKind::Egg: {
      // Resummation of the monomial series in the z2 variable:
      // K = (1/(pi^2 m)) (1-x)^{-2-1/m} [(1+Y)/(1-Y)^3 + m/(1-Y)^2],
      // Y = y (1-x)^{-1/m}, principal branches.
      const double mm = m_;
      const cplx y = z[1] * std::conj(w[1]);
      const cplx om = 1.0 - x;
      const cplx Y = y * std::pow(om, -1.0 / mm);
      const cplx oY = 1.0 - Y;
      const cplx bracket = (1.0 + Y) / (oY * oY * oY) + mm / (oY * oY);
      return std::pow(om, -2.0 - 1.0 / mm) * bracket / (kPi * kPi * mm);
    }
  }
  return 0.0;
}

cplx Domain::kernel(const Point& z, const Point& w) const {
  check_interior(z, "z");
  check_interior(w, "w");
  if (strategy_ == KernelStrategy::MonomialSeries) {
    const SeriesValue sv = kernel_series(z, w);
    if (!(sv.tail <= series_.tail_tol * std::abs(sv.value))) {
      std::ostringstream os;
      os << "series truncation insufficient: tail bound " << sv.tail
         << " exceeds relative tolerance " << series_.tail_tol << " of |K| = "
         << std::abs(sv.value);
      throw NumericalError(os.str());
    }
    return sv.value;
  }
  return kernel_closure(z, w);
}

double Domain::kernel_diag(const Point& z) const {
  return std::real(kernel(z, z));
}

namespace {

// Geometric tail estimate from the last two shell sums.
double geometric_tail(double last, double prev) {
  if (last == 0.0) return 0.0;
  if (!(prev > 0.0)) return std::numeric_limits<double>::infinity();
  const double rho = last / prev;
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  return last * rho / (1.0 - rho);
}

}  // namespace

SeriesValue Domain::kernel_series(const Point& z, const Point& w) const {
  const MonomialTable& tab = table();
  const int D = tab.max_degree();
  if (n_ == 1) {
    const cplx x = z[0] * std::conj(w[0]);
    const double uz = std::norm(z[0]);
    const double uw = std::norm(w[0]);
    cplx sum = 0.0;
    cplx xp = 1.0;
    double pz = 1.0, pw = 1.0;
    double tz[2] = {0, 0}, tw[2] = {0, 0};
    for (int k = 0; k <= D; ++k) {
      const double c = tab.norm(k);
      sum += xp / c;
      if (k >= D - 1) {
        tz[k - (D - 1)] = pz / c;
        tw[k - (D - 1)] = pw / c;
      }
      xp *= x;
      pz *= uz;
      pw *= uw;
    }
    const double tail = std::sqrt(geometric_tail(tz[1], tz[0]) *
                                  geometric_tail(tw[1], tw[0]));
    return {sum, tail};
  }
  const cplx x = z[0] * std::conj(w[0]);
  const cplx y = z[1] * std::conj(w[1]);
  std::vector<cplx> xp(D + 1), yp(D + 1);
  std::vector<double> u1z(D + 1), u2z(D + 1), u1w(D + 1), u2w(D + 1);
  xp[0] = yp[0] = 1.0;
  u1z[0] = u2z[0] = u1w[0] = u2w[0] = 1.0;
  for (int k = 1; k <= D; ++k) {
    xp[k] = xp[k - 1] * x;
    yp[k] = yp[k - 1] * y;
    u1z[k] = u1z[k - 1] * std::norm(z[0]);
    u2z[k] = u2z[k - 1] * std::norm(z[1]);
    u1w[k] = u1w[k - 1] * std::norm(w[0]);
    u2w[k] = u2w[k - 1] * std::norm(w[1]);
  }
  cplx sum = 0.0;
  double sz[2] = {0, 0}, sw[2] = {0, 0};
  for (int a = 0; a <= D; ++a) {
    for (int b = 0; b <= D; ++b) {
      const double c = tab.norm(a, b);
      sum += xp[a] * yp[b] / c;
      const int shell = std::max(a, b);
      if (shell >= D - 1) {
        sz[shell - (D - 1)] += u1z[a] * u2z[b] / c;
        sw[shell - (D - 1)] += u1w[a] * u2w[b] / c;
      }
    }
  }
  const double tail = std::sqrt(geometric_tail(sz[1], sz[0]) *
                                geometric_tail(sw[1], sw[0]));
  return {sum, tail};
}

MonomialTable monomial_norms(const Domain& domain, int max_degree,
                             std::size_t cap) {
  if (max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
  const std::size_t side = static_cast<std::size_t>(max_degree) + 1;
  const std::size_t size = domain.n() == 1 ? side : side * side;
  if (size > cap)
    throw std::length_error("monomial table of " + std::to_string(size) +
                            " entries exceeds cap " + std::to_string(cap));
  std::vector<double> norms(size);
  if (domain.n() == 1) {
    for (std::size_t k = 0; k < side; ++k) norms[k] = kPi / (k + 1.0);
  } else {
    // ||z1^a z2^b||^2 = (pi^2/e) G(a+1) G((b+1)/e) / G(a+2+(b+1)/e).
    const double e = domain.z2_power();
    for (std::size_t a = 0; a < side; ++a)
      for (std::size_t b = 0; b < side; ++b) {
        const double t = (b + 1.0) / e;
        norms[a * side + b] =
            kPi * kPi / e *
            std::exp(std::lgamma(a + 1.0) + std::lgamma(t) -
                     std::lgamma(a + 2.0 + t));
      }
  }
  return MonomialTable(domain.n(), max_degree, std::move(norms));
}

Point Domain::ray_point(const Point& p, double delta) const {
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("ray depth must lie in [0, 1)");
  double a = std::norm(p[0]), b = 0.0;
  if (kind_ == DomainKind::UnitBall2) a += std::norm(p[1]);
  if (kind_ == DomainKind::Egg) b = std::pow(std::norm(p[1]), m_);
  if (a + b == 0.0) throw std::invalid_argument("ray direction is zero");
  const double t = solve_radial(a, b, z2_power(), 1.0 - delta);
  return {t * p[0], n_ == 1 ? cplx(0.0) : t * p[1]};
}

Point Domain::project_to_boundary(const Point& z) const {
  return ray_point(z, 0.0);
}

double distance_to_boundary(const Domain& domain, const Point& z) {
  if (domain.n() == 1) return 1.0 - std::abs(z[0]);
  if (domain.kind() == DomainKind::UnitBall2)
    return 1.0 - std::sqrt(std::norm(z[0]) + std::norm(z[1]));
  // Reinhardt symmetry reduces to the real section x1^2 + x2^{2m} = 1.
  const double x1 = std::abs(z[0]), x2 = std::abs(z[1]);
  const int m = domain.m();
  auto dist = [&](double u) {
    const double c1 = std::sqrt(std::max(0.0, 1.0 - std::pow(u, 2 * m)));
    return std::hypot(c1 - x1, u - x2);
  };
  const int scan = 4000;
  int best = 0;
  double bestv = dist(0.0);
  for (int i = 1; i <= scan; ++i) {
    const double v = dist(static_cast<double>(i) / scan);
    if (v < bestv) {
      bestv = v;
      best = i;
    }
  }
  double lo = std::max(0.0, (best - 1.0) / scan);
  double hi = std::min(1.0, (best + 1.0) / scan);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (dist(a) < dist(b))
      hi = b;
    else
      lo = a;
  }
  return std::min(bestv, dist(0.5 * (lo + hi)));
}

namespace {

Point random_boundary_point(const Domain& d, std::mt19937_64& rng) {
  const cplx a = random_gaussian(rng);
  Point dir{a, d.n() == 1 ? cplx(0.0) : random_gaussian(rng)};
  return d.project_to_boundary(dir);
}

}  // namespace

double offdiagonal_sup(const Domain& domain, double separation,
                       std::size_t sample_count, std::uint64_t seed) {
  if (!(separation > 0.0))
    throw std::invalid_argument("separation must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> pts;
  pts.reserve(sample_count);
  // The model domains are balanced, so -z is admissible; antipodal pairs
  // realize the largest separations.
  while (pts.size() < sample_count) {
    const Point p = random_boundary_point(domain, rng);
    Point z = p;
    if (pts.size() % 4 >= 2) z = domain.ray_point(p, std::min(std::pow(10.0, -8.0 * unit(rng)), 0.999));
    pts.push_back(z);
    if (pts.size() < sample_count) pts.push_back({-z[0], -z[1]});
  }
  const double s2 = separation * separation * (1.0 - 1e-12);
  auto value = [&](const Point& z, const Point& w) {
    const double d2 = std::norm(z[0] - w[0]) + std::norm(z[1] - w[1]);
    if (d2 < s2) return -1.0;
    const double v = std::abs(domain.kernel_closure(z, w));
    return std::isfinite(v) ? v : -1.0;
  };
  struct Pair {
    double v;
    Point z, w;
  };
  constexpr std::size_t kKeep = 8;
  std::vector<Pair> top;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double v = value(pts[i], pts[j]);
      if (v < 0.0 || (top.size() == kKeep && v <= top.back().v)) continue;
      if (top.size() == kKeep) top.pop_back();
      top.push_back({v, pts[i], pts[j]});
      std::sort(top.begin(), top.end(), [](const Pair& a, const Pair& b) { return a.v > b.v; });
    }
  // Local ascent from the best sampled pairs, staying in the closure.
  std::normal_distribution<double> gauss;
  auto nudge = [&](const Point& z, double h) {
    Point c{z[0] + h * cplx(gauss(rng), gauss(rng)),
            domain.n() == 2 ? z[1] + h * cplx(gauss(rng), gauss(rng)) : cplx(0.0)};
    return domain.r(c) > 0.0 ? domain.project_to_boundary(c) : c;
  };
  double sup = 0.0;
  for (Pair pr : top) {
    for (double h = 0.1; h > 1e-7; h *= 0.5)
      for (int it = 0; it < 60; ++it) {
        const Point z = nudge(pr.z, h), w = nudge(pr.w, h);
        const double v = value(z, w);
        if (v > pr.v) pr = {v, z, w};
      }
    sup = std::max(sup, pr.v);
  }
  return sup;
}

BoundaryConstants boundary_constants(const Domain& domain, std::size_t samples,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BoundaryConstants c{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < samples; ++i) {
    const Point p = random_boundary_point(domain, rng);
    const double delta = std::pow(10.0, -6.0 * unit(rng));
    const Point z = domain.ray_point(p, std::min(delta, 0.999));
    const double d = distance_to_boundary(domain, z);
    if (!(d > 0.0)) continue;
    const double ratio = std::abs(domain.r(z)) / d;
    c.c1 = std::min(c.c1, ratio);
    c.c2 = std::max(c.c2, ratio);
  }
  return c;
}

}  // namespace bergman
