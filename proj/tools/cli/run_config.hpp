#pragma once

#include <optional>
#include <string>

#include "nhkubo/greens.hpp"
#include "nhkubo/tachyon.hpp"

namespace nhkubo::cli {

// Usage and configuration problems; the tool exits with status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string variable;  // omega, k, m or gamma; empty for a single point
  double start = 0.0;
  double stop = 0.0;
  int points = 0;

  bool enabled() const { return !variable.empty(); }
  double at(int i) const { return points == 1 ? start : start + (stop - start) * i / (points - 1); }
};

/// Everything a subcommand needs. The JSON config is flat and uses these field
/// names; command-line flags override file values.
struct RunConfig {
  tachyon::TachyonParams model;
  double temperature = 0.0;
  std::string framework = "standard";
  double omega = 0.0;  // frequency when it is not swept
  double k = 0.0;      // momentum when it is not swept
  SweepSpec sweep;
  double k_start = -4.0;  // momentum axis of the spectral map
  double k_stop = 4.0;
  int k_points = 81;
  std::string out;  // empty: stdout
  std::string format = "csv";
  std::optional<double> delta0;  // default 1e-6 |Delta|
  double omega_rel_tol = 1e-10;
  double omega_abs_tol = 1e-13;
  double k_rel_tol = 1e-8;
  double k_abs_tol = 1e-11;
  unsigned workers = 0;

  double delta0_value() const { return delta0 ? *delta0 : 1e-6 * std::abs(model.Delta); }
  tachyon::Approach approach() const;
  bool phqm() const;
  // gamma, or delta0 when a PHQM run asks for the clean limit gamma = 0.
  double effective_gamma() const;
  Framework greens_framework() const;

  // Throws ConfigError; `allowed` lists the sweep variables the command accepts.
  void validate(std::initializer_list<const char*> allowed) const;
};

tachyon::Approach parse_approach(const std::string& name);

// Reads a flat JSON object; unknown keys and wrong types are ConfigErrors.
RunConfig load_config(const std::string& path);

}  // namespace nhkubo::cli
