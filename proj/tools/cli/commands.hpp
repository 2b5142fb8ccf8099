#pragma once

#include <optional>
#include <vector>

#include "run_config.hpp"

namespace nhkubo::cli {

// Each returns the process exit status; ConfigError escapes for status 2.
int cmd_spectral(const RunConfig& cfg);
int cmd_sigma(const RunConfig& cfg);
int cmd_sigma_dc(const RunConfig& cfg);
int cmd_osr(const RunConfig& cfg);
int cmd_occupation(const RunConfig& cfg);

struct ValidateOptions {
  std::vector<int> only;            // empty: every check
  std::optional<RunConfig> config;  // adds a DC closed-form check at this point
  std::string format = "text";
  unsigned workers = 0;
};

int cmd_validate(const ValidateOptions& opts);

}  // namespace nhkubo::cli
