#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

namespace {
constexpr double kPi = std::numbers::pi;
}

int GridSpec::effective_levels() const {
  if (depth > 0.0) {
    if (!(depth < 1.0)) throw std::invalid_argument("grid depth must lie in (0, 1)");
    return 1 + static_cast<int>(std::ceil(std::log2(1.0 / depth) - 1e-12));
  }
  return levels;
}

std::vector<double> GridSpec::edges() const {
  const int L = effective_levels();
  if (L < 1) throw std::invalid_argument("levels must be >= 1");
  const double ratio = (depth > 0.0 && L > 1) ? std::pow(depth, 1.0 / (L - 1)) : 0.5;
  std::vector<double> e(L);
  for (int k = 0; k < L; ++k) e[k] = std::pow(ratio, k);
  if (depth > 0.0 && L > 1) e[L - 1] = depth;
  return e;
}

GridSpec GridSpec::refined() const {
  GridSpec g = *this;
  if (depth > 0.0)
    g.depth = depth / 2.0;
  else
    g.levels = levels + 1;
  g.angular = angular * 2;
  g.subdivisions = subdivisions * 2;
  if (tangential > 0) g.tangential = tangential * 2;
  return g;
}

std::string GridSpec::id() const {
  std::ostringstream os;
  os << "L" << effective_levels() << "-A" << angular << "-q" << order << "-c"
     << subdivisions;
  if (tangential > 0) os << "-t" << tangential;
  if (whitney) os << "-w";
  if (depth > 0.0) os << "-d" << depth;
  return os.str();
}

double QuadratureGrid::weight_sum() const { return pairwise_sum(weights); }

Rule1D gauss_legendre(int q) {
  if (q < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  Rule1D r;
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(q);
  for (double x : zeros) {
    const double dp = boost::math::legendre_p_prime<double>(q, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    if (x == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(w);
    } else {
      r.x.push_back(-x);
      r.w.push_back(w);
      r.x.push_back(x);
      r.w.push_back(w);
    }
  }
  std::vector<std::size_t> idx(r.x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return r.x[a] < r.x[b]; });
  Rule1D s;
  for (auto i : idx) {
    s.x.push_back(r.x[i]);
    s.w.push_back(r.w[i]);
  }
  return s;
}

namespace {

void append_cell(Rule1D& out, const Rule1D& gl, double a, double b) {
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  for (std::size_t i = 0; i < gl.x.size(); ++i) {
    out.x.push_back(m + h * gl.x[i]);
    out.w.push_back(h * gl.w[i]);
  }
}

std::vector<double> doubling_edges(double start, double end, double h) {
  std::vector<double> e{start};
  const double dir = end >= start ? 1.0 : -1.0;
  const double len = std::abs(end - start);
  double off = 0.0, width = h;
  while (off < len) {
    off = std::min(len, off + width);
    if (len - off < 0.25 * width) off = len;
    e.push_back(start + dir * off);
    if (off > h) width *= 2.0;
  }
  return e;
}

}  // namespace

Rule1D graded_one_sided(double a, double b, double h0, int q) {
  const Rule1D gl = gauss_legendre(q);
  Rule1D out;
  const auto e = doubling_edges(a, b, std::min(h0, b - a));
  for (std::size_t i = 0; i + 1 < e.size(); ++i) append_cell(out, gl, e[i], e[i + 1]);
  return out;
}

Rule1D graded_two_sided(double c, double a, double b, double h, int q) {
  const Rule1D gl = gauss_legendre(q);
  Rule1D out;
  if (c - a > 1e-15) {
    const auto e = doubling_edges(c, a, std::min(h, c - a));
    for (std::size_t i = e.size() - 1; i > 0; --i) append_cell(out, gl, e[i], e[i - 1]);
  }
  if (b - c > 1e-15) {
    const auto e = doubling_edges(c, b, std::min(h, b - c));
    for (std::size_t i = 0; i + 1 < e.size(); ++i) append_cell(out, gl, e[i], e[i + 1]);
  }
  return out;
}

Rule1D uniform_periodic(int count) {
  Rule1D r;
  for (int i = 0; i < count; ++i) {
    r.x.push_back(2 * kPi * i / count);
    r.w.push_back(2 * kPi / count);
  }
  return r;
}

namespace {

// Radial nodes in s with weights including the Jacobian (1 - s)^expo; the
// weights of each cell are rescaled so that they sum to the exact cell
// integral of the Jacobian.
Rule1D radial_rule(const GridSpec& spec, double expo, std::vector<int>* shell_of) {
  const auto edges = spec.edges();
  const int L = static_cast<int>(edges.size());
  const Rule1D gl = gauss_legendre(spec.order);
  Rule1D out;
  const double p = 1.0 + expo;
  for (int k = 0; k < L; ++k) {
    const double hi = edges[k];
    const double lo = k + 1 < L ? edges[k + 1] : 0.0;
    for (int c = 0; c < spec.subdivisions; ++c) {
      const double a = lo + (hi - lo) * c / spec.subdivisions;
      const double b = lo + (hi - lo) * (c + 1) / spec.subdivisions;
      Rule1D cell;
      append_cell(cell, gl, a, b);
      double raw = 0.0;
      for (std::size_t i = 0; i < cell.x.size(); ++i) {
        cell.w[i] *= std::pow(1.0 - cell.x[i], expo);
        raw += cell.w[i];
      }
      const double exact = (std::pow(1.0 - a, p) - std::pow(1.0 - b, p)) / p;
      for (std::size_t i = 0; i < cell.x.size(); ++i) {
        if (cell.x[i] < spec.rfloor)
          throw std::invalid_argument(
              "grid node closer to the boundary than rfloor; reduce depth or levels");
        out.x.push_back(cell.x[i]);
        out.w.push_back(cell.w[i] * exact / raw);
        if (shell_of) shell_of->push_back(k);
      }
    }
  }
  return out;
}

}  // namespace

QuadratureGrid build_grid(const Domain& domain, const GridSpec& spec) {
  if (spec.effective_levels() < 1) throw std::invalid_argument("levels must be >= 1");
  if (spec.angular < 1 || spec.order < 1 || spec.subdivisions < 1)
    throw std::invalid_argument("angular, order and subdivisions must be >= 1");
  QuadratureGrid g;
  g.n = domain.n();
  g.domain_id = domain.id();
  g.spec = spec;
  std::vector<int> shell;
  if (domain.n() == 1) {
    const Rule1D s = radial_rule(spec, 0.0, &shell);
    std::size_t total = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      total += static_cast<std::size_t>(spec.angular) << (spec.whitney ? shell[i] : 0);
    if (total > spec.node_cap)
      throw std::length_error("node count " + std::to_string(total) +
                              " above configured cap " + std::to_string(spec.node_cap));
    g.nodes.reserve(total);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const std::size_t A = static_cast<std::size_t>(spec.angular)
                            << (spec.whitney ? shell[i] : 0);
      const double rad = std::sqrt(1.0 - s.x[i]);
      g.rings.push_back({g.nodes.size(), A, rad});
      for (std::size_t l = 0; l < A; ++l) {
        g.nodes.push_back({std::polar(rad, 2 * kPi * l / A), 0.0});
        g.weights.push_back(0.5 * s.w[i] * 2 * kPi / A);
        g.r_abs.push_back(s.x[i]);
      }
    }
    return g;
  }
  if (spec.whitney)
    throw std::invalid_argument("whitney angular grading is defined for n = 1 only");
  const int e = domain.z2_power();
  const Rule1D s = radial_rule(spec, 1.0 / e, nullptr);
  const int T = spec.tangential > 0 ? spec.tangential : std::max(1, spec.angular / 8);
  Rule1D sig;
  append_cell(sig, gauss_legendre(T), 0.0, 1.0);
  const std::size_t A = spec.angular;
  const std::size_t total = s.x.size() * sig.x.size() * A * A;
  if (total > spec.node_cap)
    throw std::length_error("node count " + std::to_string(total) +
                            " above configured cap " + std::to_string(spec.node_cap));
  g.nodes.reserve(total);
  for (std::size_t i = 0; i < s.x.size(); ++i)
    for (std::size_t j = 0; j < sig.x.size(); ++j) {
      const double u = 1.0 - s.x[i];
      const double se = std::pow(sig.x[j], e);
      const double r1 = std::sqrt(u * (1.0 - se));
      const double r2 = std::pow(u, 0.5 / e) * std::sqrt(sig.x[j]);
      const double w = 0.25 * s.w[i] * sig.w[j] * (2 * kPi / A) * (2 * kPi / A);
      for (std::size_t a = 0; a < A; ++a)
        for (std::size_t b = 0; b < A; ++b) {
          g.nodes.push_back({std::polar(r1, 2 * kPi * a / A), std::polar(r2, 2 * kPi * b / A)});
          g.weights.push_back(w);
          g.r_abs.push_back(s.x[i]);
        }
    }
  return g;
}

QuadratureGrid build_grid(const Domain& domain, int levels, int angular) {
  GridSpec spec;
  spec.levels = levels;
  spec.angular = angular;
  return build_grid(domain, spec);
}

double integrate_grid(const QuadratureGrid& grid,
                      const std::function<double(const Point&, double)>& f) {
  return deterministic_sum(grid.size(), [&](std::size_t i) {
    return grid.weights[i] * f(grid.nodes[i], grid.r_abs[i]);
  });
}

FocusSpec FocusSpec::refined() const {
  FocusSpec f = *this;
  f.order = order + 2;
  f.scale = scale / 2.0;
  return f;
}

ProductRule::ProductRule(const Domain& domain, Rule1D s, Rule1D sigma, Rule1D t1,
                         Rule1D t2)
    : n_(domain.n()),
      e_(domain.z2_power()),
      s_(std::move(s)),
      sigma_(std::move(sigma)),
      t1_(std::move(t1)),
      t2_(std::move(t2)) {}

std::size_t ProductRule::size() const {
  if (n_ == 1) return s_.x.size() * t1_.x.size();
  return s_.x.size() * sigma_.x.size() * t1_.x.size() * t2_.x.size();
}

double ProductRule::integrate(const std::function<double(const Point&, double)>& f) const {
  if (n_ == 1) {
    const std::size_t nt = t1_.x.size();
    return deterministic_sum(size(), [&](std::size_t idx) {
      const std::size_t i = idx / nt, k = idx % nt;
      const double s = s_.x[i];
      const Point w{std::polar(std::sqrt(1.0 - s), t1_.x[k]), 0.0};
      return 0.5 * s_.w[i] * t1_.w[k] * f(w, s);
    });
  }
  const std::size_t n2 = t2_.x.size(), n1 = t1_.x.size(), ns = sigma_.x.size();
  const double e = e_;
  return deterministic_sum(size(), [&](std::size_t idx) {
    const std::size_t b = idx % n2;
    const std::size_t a = (idx / n2) % n1;
    const std::size_t j = (idx / (n2 * n1)) % ns;
    const std::size_t i = idx / (n2 * n1 * ns);
    const double s = s_.x[i];
    const double u = 1.0 - s;
    const double sig = sigma_.x[j];
    const double se = std::pow(sig, e);
    const Point w{std::polar(std::sqrt(u * (1.0 - se)), t1_.x[a]),
                  std::polar(std::pow(u, 0.5 / e) * std::sqrt(sig), t2_.x[b])};
    const double wt = 0.25 * std::pow(u, 1.0 / e) * s_.w[i] * sigma_.w[j] *
                      t1_.w[a] * t2_.w[b];
    return wt * f(w, s);
  });
}

ProductRule focused_rule(const Domain& domain, const Point& focus,
                         const FocusSpec& spec) {
  const double rz = domain.r(focus);
  if (!(rz < 0.0)) throw std::invalid_argument("focus point must be interior");
  const double s0 = -rz;
  const int q = spec.order;
  const Rule1D gl = gauss_legendre(q);
  const double fmin = 0.5 * (1.0 + gl.x.front());
  const double h0 = std::min(0.5, spec.rfloor / fmin);
  const double h = std::max(spec.scale * s0, 1e-14);
  Rule1D s = graded_one_sided(0.0, 1.0, h0, q);
  auto angle_rule = [&](const cplx& c) {
    if (std::abs(c) == 0.0) return uniform_periodic(spec.angular);
    const double th = std::arg(c);
    return graded_two_sided(th, th - kPi, th + kPi, h, q);
  };
  Rule1D t1 = angle_rule(focus[0]);
  Rule1D sigma, t2;
  if (domain.n() == 2) {
    const double e = domain.z2_power();
    const double sig0 = std::min(1.0, std::norm(focus[1]) / std::pow(1.0 - s0, 1.0 / e));
    sigma = sig0 < h ? graded_one_sided(0.0, 1.0, h, q)
                     : graded_two_sided(sig0, 0.0, 1.0, h, q);
    t2 = angle_rule(focus[1]);
  }
  ProductRule rule(domain, std::move(s), std::move(sigma), std::move(t1), std::move(t2));
  if (rule.size() > spec.node_cap)
    throw std::length_error("focused rule with " + std::to_string(rule.size()) +
                            " nodes above configured cap " +
                            std::to_string(spec.node_cap));
  return rule;
}

}  // namespace bergman
