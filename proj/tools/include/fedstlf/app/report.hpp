#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fedstlf/app/config.hpp"
#include "fedstlf/evaluate.hpp"
#include "fedstlf/fedavg.hpp"

namespace fedstlf::app {

struct EvaluationTable {
  fed::EvaluationSummary global;
  std::optional<fed::EvaluationSummary> personalized;
};

struct NetLoadSection {
  double model_size_kb = 0.0;
  int direction_multiplier = 2;
  double centralized_kb = 0.0;
  double federated_kb = 0.0;
  double gain = 0.0;
};

struct ScenarioReport {
  RunConfig config;
  std::vector<std::string> eligible;
  std::vector<fed::RoundReport> rounds;
  EvaluationTable participants;
  std::optional<EvaluationTable> holdout;
  NetLoadSection netload;
};

// Pretty-printed JSON, stable byte-for-byte for identical inputs.
std::string render_report(const ScenarioReport& report);

// Config echo; execution-only settings (worker count) are left out so that the
// report does not depend on them.
std::string render_config(const RunConfig& config);

}  // namespace fedstlf::app
