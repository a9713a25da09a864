#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fedstlf/app/config.hpp"
#include "fedstlf/app/report.hpp"
#include "fedstlf/evaluate.hpp"
#include "fedstlf/preprocess.hpp"

namespace fedstlf::app {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitDataError = 2,
  kExitRuntimeError = 3,
};

int exit_code_for(const std::exception& e);

struct RunArtifacts {
  std::filesystem::path report_path;
  std::filesystem::path model_path;
  std::vector<std::filesystem::path> prediction_paths;
  ScenarioReport report;
};

// Ingests or generates data, partitions clients, trains, personalizes and
// writes report.json, model.flsm and predictions/*.csv under output_dir.
RunArtifacts execute_run(const RunConfig& config);

struct NetLoadResult {
  double centralized_kb = 0.0;
  double federated_kb = 0.0;
  double gain = 0.0;
};

// Network load for the configured scenario without training.
NetLoadResult compute_netload(const RunConfig& config);

std::vector<std::filesystem::path> execute_synth(const RunConfig& config);

// CSV `timestamp,actual_kw,predicted_kw`, one row per test window.
void emit_predictions(const fed::Predictor& predictor, const data::ClientDataset& client,
                      const std::filesystem::path& out_path);
void emit_predictions(const nn::ModelParams& model, const data::ClientDataset& client,
                      const std::filesystem::path& out_path);

struct PredictOptions {
  std::size_t look_back = 12;
  std::size_t look_ahead = 1;
  double train_frac = 0.9;
};

// The cmd_* wrappers print results to `out`, errors to `err`, and return an ExitCode.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_netload(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_predict(const std::filesystem::path& checkpoint, const std::filesystem::path& client_csv,
                const std::filesystem::path& out_path, const PredictOptions& opts,
                std::ostream& out, std::ostream& err);

// Reads FEDSTLF_LOG_LEVEL (trace, debug, info, warn, error, off); default info.
void configure_logging();

}  // namespace fedstlf::app
