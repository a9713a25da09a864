#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "fedstlf/fedavg.hpp"

namespace fedstlf::app {

struct CsvSource {
  std::filesystem::path dir;
};

struct SyntheticSource {
  std::size_t n_clients = 200;
  std::size_t n_days = 90;
  double flat_fraction = 0.0;
  std::optional<std::uint64_t> seed;  // defaults to the scenario seed
};

struct TopologySpec {
  int default_hops = 1;
  std::map<std::string, int> hops;
};

struct NetLoadSpec {
  std::optional<double> model_size_kb;  // default: 64 bits per parameter
  std::optional<double> total_data_kb;  // spread equally over participants
  std::map<std::string, double> client_data_kb;
  int direction_multiplier = 2;
};

struct PersonalizationSpec {
  bool enabled = true;
  std::size_t epochs = 5;
  std::optional<double> learning_rate;  // default: scenario learning rate
  std::optional<nn::OptimizerKind> optimizer;
};

struct RunConfig {
  std::optional<int> scenario;  // preset 1-4: subset size and local epochs
  fed::ScenarioConfig fed;
  std::variant<SyntheticSource, CsvSource> source;
  double train_frac = 0.9;
  std::size_t n_participants = 180;
  std::size_t n_holdout = 20;
  TopologySpec topology;
  NetLoadSpec netload;
  PersonalizationSpec personalization;
  std::filesystem::path output_dir = "out";
  bool round_checkpoints = false;
};

struct ScenarioPreset {
  std::size_t subset_size;
  std::size_t local_epochs;
};

// The four evaluated scenarios: K in {5, 20} x local epochs in {1, 5}.
ScenarioPreset scenario_preset(int scenario);

// Nested key-value config in YAML syntax. Unknown keys, type mismatches and
// constraint violations raise ConfigError naming the key path.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);

std::string optimizer_name(nn::OptimizerKind k);

}  // namespace fedstlf::app
