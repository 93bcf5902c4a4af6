#include "bergman/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bergman {

using json = nlohmann::ordered_json;

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message
                                  : "config: " + message),
      line_(line) {}

int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

Ray RaySpec::resolve(const Domain& domain) const {
  if (point) {
    Ray r{*point, deltas};
    if (std::abs(domain.r(r.boundary_point)) > 1e-9)
      throw ConfigError(0, "ray point is not on the boundary of " + domain.id());
    return r;
  }
  if (kind == "strong") return strong_ray(domain, deltas);
  return axis_ray(domain, deltas);
}

const std::map<std::string, double>& ExperimentConfig::default_thresholds() {
  static const std::map<std::string, double> t = {
      {"kernel_slope_tol", 0.05},
      {"kernel_slope_tol_degenerate", 0.10},
      {"btype_band", 16.0},
      {"btype_upper_variation", 4.0},
      {"iab_band", 32.0},
      {"iab_identity_tol", 1e-6},
      {"claim_factor", 1.0},
      {"schur_rel_slack", 1e-9},
      {"sharpness_slope_rel_tol", 0.20},
      {"sharpness_band", 8.0},
      {"growth_margin", 0.15},
      {"envelope_spread", 4.0},
      {"envelope_drift", 0.15},
      {"linf_drift", 0.10},
  };
  return t;
}

double ExperimentConfig::threshold(const std::string& name) const {
  if (auto it = thresholds.find(name); it != thresholds.end()) return it->second;
  return default_thresholds().at(name);
}

std::vector<std::pair<double, double>> ExperimentConfig::pq_pairs() const {
  std::vector<std::pair<double, double>> out;
  for (double pp : p)
    for (double qq : q)
      if (pp <= qq) out.emplace_back(pp, qq);
  return out;
}

GridSpec ExperimentConfig::deeper_grid() const {
  GridSpec g = grid;
  if (g.depth > 0.0)
    g.depth /= refine_factor;
  else
    g.levels += static_cast<int>(std::ceil(std::log2(refine_factor)));
  return g;
}

ExperimentConfig ExperimentConfig::defaults_for(const std::string& domain) {
  ExperimentConfig c;
  c.domain = domain;
  const Domain d = Domain::parse(domain);
  if (d.n() == 2) {
    c.grid.levels = 6;
    c.grid.angular = 8;
    c.grid.tangential = 2;
  }
  c.ray.deltas = log_spaced(1e-4, 1e-1, 13);
  return c;
}

namespace {

const std::vector<std::string> kTopKeys = {"domain", "grid", "refine_factor", "ray",
                                           "exponents", "power", "focus", "samples",
                                           "seed", "output", "thresholds"};

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& where, const std::string& text) {
  if (!j.is_object()) throw ConfigError(line_of_key(text, where), where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError(line_of_key(text, it.key()),
                        "unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get(const json& j, const std::string& key, const std::string& text) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(line_of_key(text, key), "bad value for '" + key + "': " + e.what());
  }
}

json point_json(const Point& p, int n) {
  json a = json::array();
  for (int k = 0; k < n; ++k) a.push_back({p[k].real(), p[k].imag()});
  return a;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const int line =
        1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
    throw ConfigError(line, std::string("malformed JSON: ") + e.what());
  }
  check_keys(j, kTopKeys, "config", text);
  std::string domain = j.contains("domain") ? get<std::string>(j, "domain", text) : "disc";
  ExperimentConfig c;
  try {
    c = defaults_for(domain);
  } catch (const std::exception& e) {
    throw ConfigError(line_of_key(text, "domain"), e.what());
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    check_keys(g, {"levels", "angular", "order", "subdivisions", "tangential", "whitney",
                   "depth", "rfloor", "node_cap"},
               "grid", text);
    if (g.contains("levels")) c.grid.levels = get<int>(g, "levels", text);
    if (g.contains("angular")) c.grid.angular = get<int>(g, "angular", text);
    if (g.contains("order")) c.grid.order = get<int>(g, "order", text);
    if (g.contains("subdivisions")) c.grid.subdivisions = get<int>(g, "subdivisions", text);
    if (g.contains("tangential")) c.grid.tangential = get<int>(g, "tangential", text);
    if (g.contains("whitney")) c.grid.whitney = get<bool>(g, "whitney", text);
    if (g.contains("depth")) c.grid.depth = get<double>(g, "depth", text);
    if (g.contains("rfloor")) c.grid.rfloor = get<double>(g, "rfloor", text);
    if (g.contains("node_cap")) c.grid.node_cap = get<std::size_t>(g, "node_cap", text);
  }
  if (j.contains("refine_factor")) c.refine_factor = get<double>(j, "refine_factor", text);
  if (j.contains("ray")) {
    const json& r = j["ray"];
    check_keys(r, {"point", "deltas"}, "ray", text);
    if (r.contains("point")) {
      const json& pt = r["point"];
      if (pt.is_string()) {
        c.ray.kind = pt.get<std::string>();
      } else {
        const int n = Domain::parse(domain).n();
        if (!pt.is_array() || static_cast<int>(pt.size()) != n)
          throw ConfigError(line_of_key(text, "point"),
                            "ray point needs " + std::to_string(n) + " [re, im] pairs");
        Point p{};
        for (int k = 0; k < n; ++k) {
          if (!pt[k].is_array() || pt[k].size() != 2 || !pt[k][0].is_number() ||
              !pt[k][1].is_number())
            throw ConfigError(line_of_key(text, "point"), "ray point entries are [re, im]");
          p[k] = cplx(pt[k][0].get<double>(), pt[k][1].get<double>());
        }
        c.ray.kind = "point";
        c.ray.point = p;
      }
    }
    if (r.contains("deltas")) c.ray.deltas = get<std::vector<double>>(r, "deltas", text);
  }
  if (j.contains("exponents")) {
    const json& e = j["exponents"];
    check_keys(e, {"p", "q", "alpha", "a", "b"}, "exponents", text);
    if (e.contains("p")) c.p = get<std::vector<double>>(e, "p", text);
    if (e.contains("q")) c.q = get<std::vector<double>>(e, "q", text);
    if (e.contains("alpha")) {
      const json& al = e["alpha"];
      if (!al.is_array()) throw ConfigError(line_of_key(text, "alpha"), "alpha must be a list");
      c.alpha.clear();
      for (const auto& v : al) {
        if (v.is_string() && v.get<std::string>() == "threshold")
          c.alpha.push_back(std::numeric_limits<double>::quiet_NaN());
        else if (v.is_number())
          c.alpha.push_back(v.get<double>());
        else
          throw ConfigError(line_of_key(text, "alpha"),
                            "alpha entries are numbers or \"threshold\"");
      }
    }
    if (e.contains("a")) c.a = get<std::vector<double>>(e, "a", text);
    if (e.contains("b")) c.b = get<std::vector<double>>(e, "b", text);
  }
  if (j.contains("power")) {
    const json& pw = j["power"];
    check_keys(pw, {"restarts", "max_iter", "tol"}, "power", text);
    if (pw.contains("restarts")) c.power.restarts = get<int>(pw, "restarts", text);
    if (pw.contains("max_iter")) c.power.max_iter = get<int>(pw, "max_iter", text);
    if (pw.contains("tol")) c.power.tol = get<double>(pw, "tol", text);
  }
  if (j.contains("focus")) {
    const json& f = j["focus"];
    check_keys(f, {"order", "scale", "angular"}, "focus", text);
    if (f.contains("order")) c.focus.order = get<int>(f, "order", text);
    if (f.contains("scale")) c.focus.scale = get<double>(f, "scale", text);
    if (f.contains("angular")) c.focus.angular = get<int>(f, "angular", text);
  }
  if (j.contains("samples")) c.samples = get<int>(j, "samples", text);
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", text);
  if (j.contains("output")) c.output = get<std::string>(j, "output", text);
  if (j.contains("thresholds")) {
    const json& t = j["thresholds"];
    if (!t.is_object()) throw ConfigError(line_of_key(text, "thresholds"), "thresholds must be an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      if (!default_thresholds().count(it.key()))
        throw ConfigError(line_of_key(text, it.key()), "unknown threshold '" + it.key() + "'");
      c.thresholds[it.key()] = get<double>(t, it.key(), text);
    }
  }
  c.validate(text);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(0, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::validate(const std::string& text) const {
  auto fail = [&](const std::string& key, const std::string& msg) {
    throw ConfigError(line_of_key(text, key), msg);
  };
  try {
    Domain::parse(domain);
  } catch (const std::exception& e) {
    fail("domain", e.what());
  }
  if (grid.levels < 1) fail("levels", "levels must be >= 1");
  if (grid.angular < 1) fail("angular", "angular must be >= 1");
  if (grid.order < 1) fail("order", "order must be >= 1");
  if (grid.subdivisions < 1) fail("subdivisions", "subdivisions must be >= 1");
  if (grid.tangential < 0) fail("tangential", "tangential must be >= 0");
  if (grid.depth < 0.0 || grid.depth >= 1.0) fail("depth", "depth must lie in [0, 1)");
  if (!(grid.rfloor > 0.0) || grid.rfloor >= 1.0) fail("rfloor", "rfloor must lie in (0, 1)");
  if (grid.depth > 0.0 && grid.depth < grid.rfloor) fail("depth", "depth is below rfloor");
  if (!(refine_factor > 1.0)) fail("refine_factor", "refine_factor must exceed 1");
  if (ray.kind != "axis" && ray.kind != "strong" && ray.kind != "point")
    fail("point", "ray point must be \"axis\", \"strong\" or [[re, im], ...]");
  if (ray.deltas.empty()) fail("deltas", "delta list is empty");
  for (double d : ray.deltas)
    if (!(d > 0.0 && d < 1.0)) fail("deltas", "ray deltas must lie in (0, 1)");
  if (p.empty()) fail("p", "p list is empty");
  if (q.empty()) fail("q", "q list is empty");
  if (alpha.empty()) fail("alpha", "alpha list is empty");
  for (double v : p)
    if (!(v > 1.0) || !std::isfinite(v))
      fail("p", "exponent range violation: p must satisfy 1 < p < inf");
  for (double v : q)
    if (!(v > 1.0) || !std::isfinite(v))
      fail("q", "exponent range violation: q must satisfy 1 < q < inf");
  if (pq_pairs().empty()) fail("q", "exponent range violation: no pair with p <= q");
  for (double v : alpha)
    if (!std::isnan(v) && (!std::isfinite(v) || v < 0.0))
      fail("alpha", "alpha values must be finite and >= 0");
  if (a.size() != b.size()) fail("b", "a and b lists must have equal length");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] >= 1.0)) fail("a", "exponent range violation: a >= 1 required");
    if (!(b[i] > -1.0 && b[i] < 2.0 * a[i] - 2.0))
      fail("b", "exponent range violation: -1 < b < 2a - 2 required");
  }
  if (power.restarts < 1) fail("restarts", "restarts must be >= 1");
  if (power.max_iter < 1) fail("max_iter", "max_iter must be >= 1");
  if (!(power.tol > 0.0)) fail("tol", "tol must be positive");
  if (focus.order < 1) fail("focus", "focus order must be >= 1");
  if (!(focus.scale > 0.0 && focus.scale <= 1.0)) fail("scale", "focus scale must lie in (0, 1]");
  if (focus.angular < 1) fail("focus", "focus angular must be >= 1");
  if (samples < 0) fail("samples", "samples must be >= 0");
  if (output.empty()) fail("output", "output path is empty");
  for (const auto& [k, v] : thresholds)
    if (!std::isfinite(v) || v < 0.0) fail(k, "threshold '" + k + "' must be finite and >= 0");
}

std::string ExperimentConfig::canonical() const {
  json j;
  j["domain"] = domain;
  const int n = Domain::parse(domain).n();
  j["grid"] = {{"levels", grid.levels},         {"angular", grid.angular},
               {"order", grid.order},           {"subdivisions", grid.subdivisions},
               {"tangential", grid.tangential}, {"whitney", grid.whitney},
               {"depth", grid.depth},           {"rfloor", grid.rfloor},
               {"node_cap", grid.node_cap}};
  j["refine_factor"] = refine_factor;
  j["ray"] = {{"point", ray.point ? point_json(*ray.point, n) : json(ray.kind)},
              {"deltas", ray.deltas}};
  json al = json::array();
  for (double v : alpha) al.push_back(std::isnan(v) ? json("threshold") : json(v));
  j["exponents"] = {{"p", p}, {"q", q}, {"alpha", al}, {"a", a}, {"b", b}};
  j["power"] = {{"restarts", power.restarts}, {"max_iter", power.max_iter}, {"tol", power.tol}};
  j["focus"] = {{"order", focus.order}, {"scale", focus.scale}, {"angular", focus.angular}};
  j["samples"] = samples;
  j["seed"] = seed;
  j["output"] = output;
  json t = json::object();
  for (const auto& [k, v] : default_thresholds()) t[k] = threshold(k);
  j["thresholds"] = t;
  return j.dump(2) + "\n";
}

}  // namespace bergman
