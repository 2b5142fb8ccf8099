#pragma once

#include <string>
#include <utility>
#include <vector>

#include "run_config.hpp"

namespace nhkubo::cli {

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// 12 significant digits, C locale, "nan" / "inf" spelled out.
std::string format_number(double x);

// Full parameter set, framework, delta0 and tolerances.
void add_run_metadata(Table& t, const std::string& command, const RunConfig& cfg);

// CSV with '#' metadata lines, or a JSON object; to cfg.out or stdout.
void write_table(const Table& t, const RunConfig& cfg);

}  // namespace nhkubo::cli
