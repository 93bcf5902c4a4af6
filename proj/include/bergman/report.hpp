#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bergman {

// Tabular experiment output.  CSV layout: '#'-prefixed "key: value" metadata
// lines, a header row, then one row per record with %.12e formatting.
struct SweepReport {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
  void add_row(std::vector<double> row);
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
  static SweepReport parse_csv(const std::string& text);
};

}  // namespace bergman
