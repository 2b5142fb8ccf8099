#include "table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace nhkubo::cli {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void add_run_metadata(Table& t, const std::string& command, const RunConfig& cfg) {
  auto& m = t.metadata;
  m.emplace_back("command", command);
  m.emplace_back("framework", cfg.framework);
  m.emplace_back("v_F", format_number(cfg.model.v_F));
  m.emplace_back("Delta", format_number(cfg.model.Delta));
  m.emplace_back("m", format_number(cfg.model.m));
  m.emplace_back("mu", format_number(cfg.model.mu));
  m.emplace_back("gamma", format_number(cfg.model.gamma));
  m.emplace_back("temperature", format_number(cfg.temperature));
  m.emplace_back("delta0", format_number(cfg.delta0_value()));
  if (cfg.sweep.enabled()) {
    m.emplace_back("sweep", cfg.sweep.variable + " " + format_number(cfg.sweep.start) + " " +
                                format_number(cfg.sweep.stop) + " " + std::to_string(cfg.sweep.points));
  }
  m.emplace_back("omega_rel_tol", format_number(cfg.omega_rel_tol));
  m.emplace_back("omega_abs_tol", format_number(cfg.omega_abs_tol));
  m.emplace_back("k_rel_tol", format_number(cfg.k_rel_tol));
  m.emplace_back("k_abs_tol", format_number(cfg.k_abs_tol));
}

namespace {

void emit(const Table& t, const std::string& format, std::ostream& os) {
  if (format == "json") {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : t.metadata) j["metadata"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      auto r = nlohmann::ordered_json::array();
      // Round through the text form so JSON and CSV carry the same digits.
      for (double x : row) {
        if (std::isfinite(x)) {
          r.push_back(std::stod(format_number(x)));
        } else {
          r.push_back(nullptr);
        }
      }
      j["rows"].push_back(r);
    }
    os << j.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

}  // namespace

void write_table(const Table& t, const RunConfig& cfg) {
  if (cfg.out.empty()) {
    emit(t, cfg.format, std::cout);
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw std::runtime_error("cannot write " + cfg.out);
  emit(t, cfg.format, f);
  if (!f) throw std::runtime_error("write to " + cfg.out + " failed");
}

}  // namespace nhkubo::cli
