#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace tangentlab::diag {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentResult {
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Dispatch on cfg's `experiment` key, write artifacts into out_dir (created
// if needed), and evaluate the experiment's embedded tolerance checks.
// Throws ConfigError for invalid configurations, including unknown keys.
ExperimentResult run_experiment(Config cfg, const std::string& out_dir, bool emit_svg);

}  // namespace tangentlab::diag
