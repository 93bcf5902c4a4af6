#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bergman/quadrature.hpp"
#include "bergman/toeplitz.hpp"

namespace bergman {

// Invalid configuration; line is 1-based, 0 when no source line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// Ray selection: "axis", "strong", or an explicit boundary point.
struct RaySpec {
  std::string kind = "axis";
  std::optional<Point> point;
  std::vector<double> deltas;
  Ray resolve(const Domain& domain) const;
};

struct ExperimentConfig {
  std::string domain = "disc";
  GridSpec grid;
  double refine_factor = 10.0;  // deeper grid: depth / refine_factor
  RaySpec ray;
  std::vector<double> p{2.0};
  std::vector<double> q{4.0};
  std::vector<double> alpha{0.15, 0.25, 0.5};  // NaN: threshold 1/p - 1/q
  std::vector<double> a{1.0, 2.0, 1.5};
  std::vector<double> b{-0.5, 0.0, 0.5};
  PowerOptions power;
  FocusSpec focus;
  int samples = 20;
  std::uint64_t seed = 1;
  std::string output = "out";
  std::map<std::string, double> thresholds;

  static const std::map<std::string, double>& default_thresholds();
  double threshold(const std::string& name) const;

  // Pairs p <= q from the product of the p and q lists.
  std::vector<std::pair<double, double>> pq_pairs() const;
  GridSpec deeper_grid() const;

  // Throws ConfigError. text is used for line lookup only.
  void validate(const std::string& text = "") const;
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig defaults_for(const std::string& domain);
  std::string canonical() const;
};

// Line of the first occurrence of "key" in text, 0 if absent.
int line_of_key(const std::string& text, const std::string& key);

}  // namespace bergman
