#pragma once

#include <string>
#include <vector>

#include "nhkubo/tachyon.hpp"

namespace nhkubo::validation {

/// One measured quantity inside a check. `error` is compared with `tolerance`;
/// for ordering checks it is the margin and must be positive.
struct Measurement {
  std::string label;
  double reference = 0.0;
  double computed = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct CheckReport {
  int number = 0;
  std::string title;
  std::vector<Measurement> measurements;
  std::string note;
  double seconds = 0.0;

  bool passed() const;
};

struct SuiteOptions {
  unsigned workers = 0;  // 0: one per hardware thread
};

std::vector<int> all_checks();
std::string check_title(int number);

// Runs one numbered acceptance check; exceptions become failed measurements.
CheckReport run_check(int number, const SuiteOptions& options = {});

/// Comparison of the numeric DC conductivity with its closed form at a
/// user-supplied point. Constraint violations are reported as a failure.
CheckReport dc_closed_form_check(const tachyon::TachyonParams& params, tachyon::Approach approach);

Measurement relative(std::string label, double reference, double computed, double tolerance);
Measurement absolute(std::string label, double reference, double computed, double tolerance);
// Passes when lhs > rhs.
Measurement greater(std::string label, double lhs, double rhs);

}  // namespace nhkubo::validation
