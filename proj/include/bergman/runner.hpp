#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bergman/config.hpp"
#include "bergman/report.hpp"

namespace bergman {

struct Verdict {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct RunResult {
  std::string subcommand;
  SweepReport report;
  std::vector<Verdict> verdicts;
  bool pass() const;
};

// Computation failure attributed to one output row.
class RowError : public std::runtime_error {
 public:
  RowError(std::size_t row, const std::string& context, const std::string& what);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

const std::vector<std::string>& subcommands();

// Columns written by each subcommand.
std::vector<std::string> columns_for(const std::string& subcommand);

RunResult run_experiment(const std::string& subcommand, const ExperimentConfig& config);

// Verdicts derived from report rows and config thresholds only.
std::vector<Verdict> verdicts_from_rows(const std::string& subcommand,
                                        const SweepReport& report,
                                        const ExperimentConfig& config);

// Runs, writes <output>/<subcommand>.csv and .json, and returns the exit
// status: 0 pass, 1 numeric failure, 2 configuration error.
int run(const std::string& subcommand, const ExperimentConfig& config, std::ostream& log);

}  // namespace bergman
