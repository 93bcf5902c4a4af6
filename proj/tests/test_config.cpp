#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bergman/config.hpp"
#include "bergman/runner.hpp"
#include "doctest.h"

using namespace bergman;

namespace {

int error_line(const std::string& text) {
  try {
    ExperimentConfig::parse(text).validate(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("canonical form round trips") {
  const std::string text = R"({
  "domain": "egg:m=3",
  "grid": {"levels": 5, "angular": 6, "tangential": 2},
  "exponents": {"p": [2, 3], "q": [4], "alpha": [0.1, "threshold"]},
  "thresholds": {"envelope_spread": 3.5},
  "seed": 42
})";
  const ExperimentConfig c = ExperimentConfig::parse(text);
  CHECK(c.domain == "egg:m=3");
  CHECK(c.grid.levels == 5);
  CHECK(c.alpha.size() == 2);
  CHECK(std::isnan(c.alpha[1]));
  CHECK(c.threshold("envelope_spread") == 3.5);
  CHECK(c.threshold("growth_margin") == 0.15);
  const std::string canon = c.canonical();
  CHECK(canon.find("\"threshold\"") != std::string::npos);
  const ExperimentConfig back = ExperimentConfig::parse(canon);
  CHECK(back.canonical() == canon);
  CHECK(c.pq_pairs() == std::vector<std::pair<double, double>>{{2.0, 4.0}, {3.0, 4.0}});
}

TEST_CASE("configuration errors carry line numbers") {
  CHECK(error_line("{\n  \"domain\": \"disc\",\n  \"exponents\": {\n    \"p\": [2],\n    \"alpha\": []\n  }\n}") == 5);
  CHECK(error_line("{\n  \"exponents\": {\n    \"p\": [1],\n    \"q\": [2]\n  }\n}") == 3);
  CHECK(error_line("{\n  \"domain\": \"disc\",\n  \"colour\": 3\n}") == 3);
  CHECK(error_line("{\n  \"domain\": \"annulus\"\n}") == 2);
  CHECK(error_line("{\n  \"grid\": {\"levels\": 4,,}\n}") == 2);
  CHECK(error_line("{\n  \"exponents\": {\"a\": [1, 2], \"b\": [0]}\n}") == 2);
  CHECK(error_line("{\n  \"exponents\": {\"a\": [2], \"b\": [2.5]}\n}") == 2);
  CHECK(error_line("{\n  \"thresholds\": {\"bogus\": 1}\n}") == 2);
  try {
    ExperimentConfig::parse("{\n  \"exponents\": {\n    \"p\": [0.5]\n  }\n}").validate();
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("exponent range violation") != std::string::npos);
  }
}

TEST_CASE("deeper grid") {
  ExperimentConfig c;
  c.grid.depth = 1e-2;
  CHECK(c.deeper_grid().depth == doctest::Approx(1e-3));
  c.grid.depth = 0.0;
  c.grid.levels = 6;
  CHECK(c.deeper_grid().levels == 10);
}

TEST_CASE("verdicts can be recomputed from the CSV alone") {
  ExperimentConfig c = ExperimentConfig::defaults_for("disc");
  c.ray.deltas = {1e-3, 1e-2, 1e-1};
  c.samples = 2;
  c.grid.levels = 4;
  c.grid.angular = 16;
  for (const char* sub : {"kernel", "btype", "schur"}) {
    const RunResult r = run_experiment(sub, c);
    CHECK(r.report.columns == columns_for(sub));
    const SweepReport parsed = SweepReport::parse_csv(r.report.to_csv());
    const auto again = verdicts_from_rows(sub, parsed, c);
    REQUIRE(again.size() == r.verdicts.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
      CHECK(again[i].name == r.verdicts[i].name);
      CHECK(again[i].pass == r.verdicts[i].pass);
      CHECK(again[i].value == doctest::Approx(r.verdicts[i].value).epsilon(1e-10));
    }
  }
}

TEST_CASE("run writes artifacts and maps failures to exit codes") {
  const auto dir = std::filesystem::temp_directory_path() / "bergman_config_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = ExperimentConfig::defaults_for("disc");
  c.ray.deltas = {1e-3, 1e-2, 1e-1};
  c.output = dir.string();
  std::ostringstream log;
  CHECK(run("kernel", c, log) == 0);
  CHECK(std::filesystem::exists(dir / "kernel.csv"));
  CHECK(std::filesystem::exists(dir / "kernel.json"));
  std::ifstream in(dir / "kernel.csv");
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find("time") == std::string::npos);
  ExperimentConfig bad = c;
  bad.p = {0.5};
  CHECK(run("norms", bad, log) == 2);
  CHECK(run("nonsense", c, log) == 2);
  std::filesystem::remove_all(dir);
}
