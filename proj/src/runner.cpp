#include "bergman/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "bergman/bsystem.hpp"
#include "bergman/kernel_matrix.hpp"
#include "bergman/parallel.hpp"
#include "bergman/schur.hpp"
#include "json.hpp"

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

double band(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

double resolve_alpha(double alpha, double p, double q) {
  return std::isnan(alpha) ? 1.0 / p - 1.0 / q : alpha;
}

bool same(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }

// Rows grouped by the values of the key columns, in first-seen order.
std::vector<std::vector<std::size_t>> group_rows(const SweepReport& rep,
                                                 const std::vector<std::string>& keys) {
  std::vector<std::size_t> cols;
  for (const auto& k : keys) cols.push_back(rep.column(k));
  std::vector<std::vector<double>> seen;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    std::vector<double> key;
    for (auto c : cols) key.push_back(rep.rows[i][c]);
    std::size_t g = 0;
    for (; g < seen.size(); ++g)
      if (std::equal(key.begin(), key.end(), seen[g].begin(), same)) break;
    if (g == seen.size()) {
      seen.push_back(key);
      groups.emplace_back();
    }
    groups[g].push_back(i);
  }
  return groups;
}

std::vector<double> pick(const SweepReport& rep, const std::vector<std::size_t>& rows,
                         const std::string& col) {
  const std::size_t c = rep.column(col);
  std::vector<double> v;
  for (auto i : rows) v.push_back(rep.rows[i][c]);
  return v;
}

// Expected log-log slope of K(z,z) against |r(z)|: -(2 + 2(n-1)/m).
double expected_kernel_slope(int n, int m) { return -(2.0 + 2.0 * (n - 1) / m); }

// Uniform Claim constant: sum over k of int_0^inf dx / (1 + x^k).
double claim_bound(const std::vector<double>& A) {
  double s = 0.0;
  for (std::size_t k = 2; k < A.size(); ++k)
    if (A[k] > 0.0) s += (kPi / k) / std::sin(kPi / k);
  return s;
}

template <class F>
void guarded(std::size_t row, const std::string& context, F&& f) {
  try {
    f();
  } catch (const RowError&) {
    throw;
  } catch (const std::exception& e) {
    throw RowError(row, context, e.what());
  }
}

std::vector<Ray> rays_for(const ExperimentConfig& c, const Domain& d) {
  std::vector<Ray> rays{c.ray.resolve(d)};
  if (c.ray.kind == "axis" && d.n() == 2) rays.push_back(strong_ray(d, c.ray.deltas));
  if (c.ray.kind == "strong") rays.push_back(axis_ray(d, c.ray.deltas));
  return rays;
}

SweepReport run_kernel(const ExperimentConfig& c, const Domain& d) {
  SweepReport rep;
  rep.columns = columns_for("kernel");
  const Ray ray = c.ray.resolve(d);
  const auto pts = ray_points(d, ray);
  const auto it = std::min_element(ray.deltas.begin(), ray.deltas.end());
  const int m = d.n() == 1 ? 2 : build_bsystem(d, pts[it - ray.deltas.begin()]).m();
  for (std::size_t i = 0; i < pts.size(); ++i)
    guarded(rep.rows.size(), "delta=" + fmt(ray.deltas[i]), [&] {
      rep.add_row({-d.r(pts[i]), d.kernel_diag(pts[i]), static_cast<double>(m),
                   expected_kernel_slope(d.n(), m)});
    });
  return rep;
}

SweepReport run_btype(const ExperimentConfig& c, const Domain& d) {
  SweepReport rep;
  rep.columns = columns_for("btype");
  const auto rays = rays_for(c, d);
  for (std::size_t r = 0; r < rays.size(); ++r) {
    DiagonalBand diag;
    guarded(rep.rows.size(), "ray=" + std::to_string(r), [&] { diag = sharp_diagonal_check(d, rays[r]); });
    const auto pts = ray_points(d, rays[r]);
    for (std::size_t i = 0; i < pts.size(); ++i)
      guarded(rep.rows.size(), "ray=" + std::to_string(r) + " delta=" + fmt(rays[r].deltas[i]), [&] {
        const BSystem bs = build_bsystem(d, pts[i]);
        const double cup = btype_upper_check(bs, 4096, c.seed + i);
        rep.add_row({static_cast<double>(r), diag.deltas[i], diag.kernel[i], diag.product[i],
                     diag.ratios[i], cup});
      });
  }
  return rep;
}

SweepReport run_iab(const ExperimentConfig& c, const Domain& d) {
  SweepReport rep;
  rep.columns = columns_for("iab");
  const Ray ray = c.ray.resolve(d);
  for (std::size_t k = 0; k < c.a.size(); ++k) {
    for (double delta : ray.deltas)
      guarded(rep.rows.size(), "a=" + fmt(c.a[k]) + " b=" + fmt(c.b[k]) + " delta=" + fmt(delta), [&] {
        const IabReport r = iab_bound_check(d, Ray{ray.boundary_point, {delta}}, c.a[k], c.b[k], c.focus);
        rep.add_row({c.a[k], c.b[k], r.deltas[0], r.values[0], r.errors[0], r.kernel[0],
                     r.reference[0], r.ratios[0]});
      });
  }
  return rep;
}

SweepReport run_claim(const ExperimentConfig& c, const Domain& d) {
  if (d.n() < 2) throw ConfigError(0, "claim diagnostics need a domain in C^2");
  SweepReport rep;
  rep.columns = columns_for("claim");
  const Ray ray = c.ray.resolve(d);
  const auto pts = ray_points(d, ray);
  const auto rhos = log_spaced(1e-6, 1.0, 7);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const BSystem bs = build_bsystem(d, pts[i]);
    std::vector<double> A(bs.m() + 1, 0.0);
    for (int k = 2; k <= bs.m(); ++k) A[k] = bs.A(2, k);
    for (double rho : rhos)
      guarded(rep.rows.size(), "delta=" + fmt(ray.deltas[i]) + " rho=" + fmt(rho), [&] {
        const auto M = mj_sequence(bs, {rho, 0.0}, bs.r_abs());
        rep.add_row({bs.r_abs(), static_cast<double>(bs.m()), rho, M[0],
                      claim_check(bs, 2, {rho}), claim_bound(A)});
      });
  }
  return rep;
}

SweepReport run_schur(const ExperimentConfig& c, const Domain& d) {
  SweepReport rep;
  rep.columns = columns_for("schur");
  const QuadratureGrid grid = build_grid(d, c.grid);
  const KernelFn f = [d](const Point& z, const Point& w) { return d.kernel(z, w); };
  std::shared_ptr<const KernelMatrix> Kp;
  if (RingKernel::supports(d, grid))
    Kp = std::make_shared<RingKernel>(f, grid);
  else
    Kp = DenseKernel::assemble(f, grid.nodes, grid.nodes);
  const Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(grid.weights.data(), grid.weights.size());
  struct Case {
    double p, q, beta;
    int kind;
  };
  std::vector<Case> cases;
  for (const auto& [p, q] : c.pq_pairs()) cases.push_back({p, q, 1.0 / (p / (p - 1.0) + q), 0});
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int s = 0; s < c.samples; ++s) {
    const double p = 1.1 + 4.9 * U(rng);
    const double q = p + 4.0 * U(rng);
    const double bmax = std::min(1.0 - 1.0 / p, 1.0 / q);
    cases.push_back({p, q, bmax * (0.05 + 0.9 * U(rng)), 1});
  }
  for (const Case& cs : cases)
    guarded(rep.rows.size(), "p=" + fmt(cs.p) + " q=" + fmt(cs.q) + " beta=" + fmt(cs.beta), [&] {
      const SchurWeights w = power_weights(d, grid, cs.p, cs.q, cs.beta);
      const SchurCertificate cert = certify(*Kp, w, mu, mu, cs.p, cs.q, grid.id());
      Eigen::VectorXcd psi = w.psi.cast<cplx>();
      const DiscreteOperator op(Kp, psi, mu, mu, "schur");
      PowerOptions po = c.power;
      po.seed = c.seed + rep.rows.size();
      const NormEstimate est = estimate_norm_pq(op, cs.p, cs.q, po);
      const TauCheck tc = tau_bound_check(cs.p, cs.q);
      rep.add_row({cs.p, cs.q, cs.beta, static_cast<double>(cs.kind), cert.C1, cert.C2, cert.M,
                   cert.bound, est.estimate, tc.lhs, tc.rhs});
    });
  return rep;
}

SweepReport run_norms(const ExperimentConfig& c, const Domain& d) {
  NormSweepOptions o{c.grid, c.deeper_grid(), c.power};
  o.power.seed = c.seed;
  return norm_sweep(d, c.pq_pairs(), c.alpha, o);
}

SweepReport run_sharpness(const ExperimentConfig& c, const Domain& d) {
  SweepReport rep;
  rep.columns = columns_for("sharpness");
  const Ray ray = c.ray.resolve(d);
  for (const auto& [p, q] : c.pq_pairs()) {
    std::vector<double> as;
    for (double a : c.alpha) as.push_back(resolve_alpha(a, p, q));
    SweepReport s;
    guarded(rep.rows.size(), "p=" + fmt(p) + " q=" + fmt(q), [&] {
      s = sharpness_sweep(d, p, q, as, ray, c.focus);
    });
    for (auto row : s.rows) {
      row.insert(row.begin(), {p, q});
      rep.add_row(std::move(row));
    }
  }
  return rep;
}

SweepReport run_linf(const ExperimentConfig& c, const Domain& d) {
  SweepReport rep;
  rep.columns = columns_for("linf");
  const GridSpec specs[2] = {c.grid, c.deeper_grid()};
  for (int level = 0; level < 2; ++level)
    guarded(rep.rows.size(), "level=" + std::to_string(level), [&] {
      const QuadratureGrid g = build_grid(d, specs[level]);
      const LinfResult r = linf_check(d, g);
      double deepest = 1.0;
      for (double s : g.r_abs) deepest = std::min(deepest, s);
      rep.add_row({static_cast<double>(level), deepest, static_cast<double>(r.nodes), r.sup,
                   static_cast<double>(r.i), static_cast<double>(r.j)});
    });
  return rep;
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RowError::RowError(std::size_t row, const std::string& context, const std::string& what)
    : std::runtime_error("row " + std::to_string(row) + " (" + context + "): " + what),
      row_(row) {}

bool RunResult::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s = {"kernel", "btype", "iab",       "claim",
                                             "schur",  "norms", "sharpness", "linf"};
  return s;
}

std::vector<std::string> columns_for(const std::string& sub) {
  if (sub == "kernel") return {"delta", "K", "m", "expected_slope"};
  if (sub == "btype") return {"ray", "delta", "K", "product", "ratio", "c_up"};
  if (sub == "iab") return {"a", "b", "delta", "value", "error", "kernel", "reference", "ratio"};
  if (sub == "claim") return {"delta", "m", "rho", "M1", "ratio", "bound"};
  if (sub == "schur")
    return {"p", "q", "beta", "random", "C1", "C2", "M", "bound", "estimate", "tau", "tau_rhs"};
  if (sub == "norms")
    return {"p", "q", "alpha", "level", "depth", "nodes", "estimate", "iterations", "converged",
            "envelope"};
  if (sub == "sharpness") return {"p", "q", "delta", "alpha", "Q", "Q_err", "K", "K_power", "ratio"};
  if (sub == "linf") return {"level", "depth", "nodes", "sup", "i", "j"};
  throw ConfigError(0, "unknown subcommand '" + sub + "'");
}

std::vector<Verdict> verdicts_from_rows(const std::string& sub, const SweepReport& rep,
                                        const ExperimentConfig& c) {
  std::vector<Verdict> out;
  auto add = [&](std::string name, double value, double threshold, bool pass) {
    out.push_back({std::move(name), value, threshold, pass});
  };
  if (rep.rows.empty()) {
    add(sub + ": rows present", 0.0, 1.0, false);
    return out;
  }
  if (sub == "kernel") {
    const auto delta = rep.values("delta"), K = rep.values("K");
    const double expected = rep.rows[0][rep.column("expected_slope")];
    const double m = rep.rows[0][rep.column("m")];
    const double tol = m <= 2.0 ? c.threshold("kernel_slope_tol")
                                : c.threshold("kernel_slope_tol_degenerate");
    const double slope = loglog_slope(delta, K);
    add("kernel slope " + fmt(slope) + " vs " + fmt(expected), std::abs(slope - expected), tol,
        std::abs(slope - expected) <= tol);
  } else if (sub == "btype") {
    for (const auto& g : group_rows(rep, {"ray"})) {
      const std::string r = fmt(rep.rows[g[0]][rep.column("ray")]);
      const double b = band(pick(rep, g, "ratio"));
      add("ray " + r + " diagonal band", b, c.threshold("btype_band"), b <= c.threshold("btype_band"));
      const double v = band(pick(rep, g, "c_up"));
      add("ray " + r + " upper constant variation", v, c.threshold("btype_upper_variation"),
          std::isfinite(v) && v <= c.threshold("btype_upper_variation"));
    }
  } else if (sub == "iab") {
    for (const auto& g : group_rows(rep, {"a", "b"})) {
      const double a = rep.rows[g[0]][rep.column("a")], b = rep.rows[g[0]][rep.column("b")];
      const std::string tag = "(a,b)=(" + fmt(a) + "," + fmt(b) + ")";
      const double bd = band(pick(rep, g, "ratio"));
      add(tag + " ratio band", bd, c.threshold("iab_band"), std::isfinite(bd) && bd <= c.threshold("iab_band"));
      if (a == 2.0 && b == 0.0) {
        double worst = 0.0;
        bool ok = true;
        for (auto i : g) {
          const double v = rep.rows[i][rep.column("value")], e = rep.rows[i][rep.column("error")],
                       k = rep.rows[i][rep.column("kernel")];
          const double dev = std::abs(v / k - 1.0);
          worst = std::max(worst, dev);
          ok = ok && dev <= c.threshold("iab_identity_tol") + e / k;
        }
        add(tag + " reproducing identity I/K - 1", worst, c.threshold("iab_identity_tol"), ok);
      }
    }
  } else if (sub == "claim") {
    double worst = 0.0;
    for (const auto& row : rep.rows)
      worst = std::max(worst, row[rep.column("ratio")] / row[rep.column("bound")]);
    add("claim ratio / uniform constant", worst, c.threshold("claim_factor"),
        worst <= c.threshold("claim_factor"));
  } else if (sub == "schur") {
    double worst = std::numeric_limits<double>::infinity();
    double tau_worst = 0.0;
    for (const auto& row : rep.rows) {
      const double bound = row[rep.column("bound")], est = row[rep.column("estimate")];
      worst = std::min(worst, bound / est);
      tau_worst = std::max(tau_worst, row[rep.column("tau")] / row[rep.column("tau_rhs")]);
    }
    add("min bound / estimate", worst, 1.0 - c.threshold("schur_rel_slack"),
        worst >= 1.0 - c.threshold("schur_rel_slack"));
    add("max tau / (4 (p'+q)^(1-1/p+1/q))", tau_worst, 1.0, tau_worst <= 1.0);
  } else if (sub == "norms") {
    const double margin = c.threshold("growth_margin");
    std::map<int, std::vector<double>> env;
    std::vector<double> drift;
    for (const auto& g : group_rows(rep, {"p", "q", "alpha"})) {
      if (g.size() != 2) {
        add("refinement pair present", static_cast<double>(g.size()), 2.0, false);
        continue;
      }
      const auto& r0 = rep.rows[g[0]];
      const auto& r1 = rep.rows[g[1]];
      const double p = r0[rep.column("p")], q = r0[rep.column("q")], a = r0[rep.column("alpha")];
      const double star = 1.0 / p - 1.0 / q;
      const double growth = r1[rep.column("estimate")] / r0[rep.column("estimate")] - 1.0;
      const std::string tag = "(p,q)=(" + fmt(p) + "," + fmt(q) + ") alpha=" + fmt(a);
      if (a < star - 1e-12)
        add(tag + " growth indicator > 0", growth - margin, 0.0, growth - margin > 0.0);
      else
        add(tag + " growth <= margin", growth, margin, growth <= margin);
      if (same(a, star)) {
        for (auto i : g)
          env[static_cast<int>(rep.rows[i][rep.column("level")])].push_back(
              rep.rows[i][rep.column("estimate")] / rep.rows[i][rep.column("envelope")]);
        drift.push_back(std::abs(growth));
      }
    }
    if (env.size() == 2 && env.begin()->second.size() >= 2) {
      for (const auto& [level, v] : env) {
        const double s = band(v);
        add("envelope spread level " + std::to_string(level), s, c.threshold("envelope_spread"),
            s <= c.threshold("envelope_spread"));
      }
      const double dmax = *std::max_element(drift.begin(), drift.end());
      add("envelope drift", dmax, c.threshold("envelope_drift"), dmax <= c.threshold("envelope_drift"));
    }
  } else if (sub == "sharpness") {
    for (const auto& g : group_rows(rep, {"p", "q", "alpha"})) {
      const auto& r0 = rep.rows[g[0]];
      const double p = r0[rep.column("p")], q = r0[rep.column("q")], a = r0[rep.column("alpha")];
      const double star = 1.0 / p - 1.0 / q;
      const std::string tag = "(p,q)=(" + fmt(p) + "," + fmt(q) + ") alpha=" + fmt(a);
      const auto delta = pick(rep, g, "delta"), ratio = pick(rep, g, "ratio"), K = pick(rep, g, "K");
      if (a < star - 1e-12) {
        const double expected = (star - a) * loglog_slope(delta, K);
        const double slope = loglog_slope(delta, ratio);
        const double rel = std::abs(slope / expected - 1.0);
        add(tag + " ratio slope " + fmt(slope) + " vs " + fmt(expected), rel,
            c.threshold("sharpness_slope_rel_tol"), rel <= c.threshold("sharpness_slope_rel_tol"));
      } else {
        const double b = band(ratio);
        add(tag + " ratio band", b, c.threshold("sharpness_band"), b <= c.threshold("sharpness_band"));
      }
    }
  } else if (sub == "linf") {
    const auto sup = rep.values("sup");
    bool finite = std::all_of(sup.begin(), sup.end(), [](double v) { return std::isfinite(v); });
    add("sup finite", finite ? 1.0 : 0.0, 1.0, finite);
    if (sup.size() == 2) {
      const double dr = std::abs(sup[1] / sup[0] - 1.0);
      add("sup drift", dr, c.threshold("linf_drift"), dr <= c.threshold("linf_drift"));
    }
  }
  return out;
}

RunResult run_experiment(const std::string& sub, const ExperimentConfig& c) {
  columns_for(sub);
  c.validate();
  const Domain d = Domain::parse(c.domain);
  RunResult res;
  res.subcommand = sub;
  if (sub == "kernel") res.report = run_kernel(c, d);
  else if (sub == "btype") res.report = run_btype(c, d);
  else if (sub == "iab") res.report = run_iab(c, d);
  else if (sub == "claim") res.report = run_claim(c, d);
  else if (sub == "schur") res.report = run_schur(c, d);
  else if (sub == "norms") res.report = run_norms(c, d);
  else if (sub == "sharpness") res.report = run_sharpness(c, d);
  else res.report = run_linf(c, d);
  res.report.metadata = {{"tool", "bergman-lab 1.0"},
                         {"subcommand", sub},
                         {"domain", d.id()},
                         {"seed", std::to_string(c.seed)},
                         {"grid", c.grid.id()}};
  res.verdicts = verdicts_from_rows(sub, res.report, c);
  return res;
}

int run(const std::string& sub, const ExperimentConfig& c, std::ostream& log) {
  using json = nlohmann::ordered_json;
  const std::string started = timestamp();
  RunResult res;
  try {
    res = run_experiment(sub, c);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "numeric failure: " << e.what() << "\n";
    return 1;
  }
  std::filesystem::create_directories(c.output);
  const std::string csv = (std::filesystem::path(c.output) / (sub + ".csv")).string();
  const std::string js = (std::filesystem::path(c.output) / (sub + ".json")).string();
  res.report.write_csv(csv);
  json summary;
  summary["subcommand"] = sub;
  summary["csv"] = csv;
  summary["started"] = started;
  summary["finished"] = timestamp();
  summary["workers"] = workers();
  summary["config"] = json::parse(c.canonical());
  json vs = json::array();
  for (const auto& v : res.verdicts) {
    vs.push_back({{"name", v.name}, {"value", v.value}, {"threshold", v.threshold}, {"pass", v.pass}});
    log << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << fmt(v.value) << " (threshold "
        << fmt(v.threshold) << ")\n";
  }
  summary["verdicts"] = vs;
  summary["pass"] = res.pass();
  std::ofstream(js) << summary.dump(2) << "\n";
  log << sub << ": " << (res.pass() ? "pass" : "fail") << " -> " << csv << "\n";
  return res.pass() ? 0 : 1;
}

}  // namespace bergman
