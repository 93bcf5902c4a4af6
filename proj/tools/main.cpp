#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bergman/config.hpp"
#include "bergman/parallel.hpp"
#include "bergman/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"bergman-lab: numerical experiments for Bergman-Toeplitz operators"};
  app.require_subcommand(1);

  std::string config_path, out, domain;
  std::optional<int> levels, angular, workers_opt;
  std::optional<double> rfloor, depth;
  std::optional<std::uint64_t> seed;
  bool print_config = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--out", out, "artifact directory");
    sub->add_option("--domain", domain, "disc, ball2 or egg:m=<m>");
    sub->add_option("--levels", levels, "boundary shell count");
    sub->add_option("--angular", angular, "angular nodes per ring");
    sub->add_option("--rfloor", rfloor, "smallest admissible |r|");
    sub->add_option("--depth", depth, "deepest shell edge (0 selects levels)");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--workers", workers_opt, "worker threads");
    sub->add_flag("--print-config", print_config, "print the canonical config and exit");
  };
  for (const auto& name : bergman::subcommands()) add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  bergman::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = bergman::ExperimentConfig::load(config_path);
      if (!domain.empty() && domain != cfg.domain)
        throw bergman::ConfigError(0, "--domain conflicts with the config file domain");
    } else {
      cfg = bergman::ExperimentConfig::defaults_for(domain.empty() ? "disc" : domain);
    }
    if (!out.empty()) cfg.output = out;
    if (levels) cfg.grid.levels = *levels;
    if (angular) cfg.grid.angular = *angular;
    if (rfloor) cfg.grid.rfloor = *rfloor;
    if (depth) cfg.grid.depth = *depth;
    if (seed) cfg.seed = *seed;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (print_config) {
    std::cout << cfg.canonical();
    return 0;
  }
  if (workers_opt) {
    if (*workers_opt < 1) {
      std::cerr << "error: --workers must be >= 1\n";
      return 2;
    }
    bergman::set_workers(*workers_opt);
  }
  return bergman::run(sub, cfg, std::cout);
}
