#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fedstlf/lstm.hpp"
#include "fedstlf/metrics.hpp"
#include "fedstlf/preprocess.hpp"

namespace fedstlf::fed {

// Maps a scaled input window to a scaled prediction.
using Predictor = std::function<double(std::span<const double> window)>;

Predictor model_predictor(const nn::ModelParams& m);

// Inverse-scaled predictions for every window of the chosen split, clamped at
// 0 kW (reporting only; training never clamps).
std::vector<double> predict_kw(const Predictor& predictor, const data::ClientDataset& client,
                               bool use_test = true);
std::vector<double> actual_kw(const data::ClientDataset& client, bool use_test = true);

struct ClientMetrics {
  std::string client_id;
  double rmse = 0.0;  // kW
  double mape = 0.0;  // percent
};

struct EvaluationSummary {
  std::vector<ClientMetrics> clients;
  metrics::Summary rmse;
  metrics::Summary mape;
};

EvaluationSummary summarize_clients(std::vector<ClientMetrics> clients);

EvaluationSummary evaluate_predictor(const Predictor& predictor,
                                     std::span<const data::ClientDataset* const> clients,
                                     bool use_test = true);
EvaluationSummary evaluate_global(const nn::ModelParams& m,
                                  std::span<const data::ClientDataset> clients,
                                  bool use_test = true);
EvaluationSummary evaluate_global(const nn::ModelParams& m,
                                  std::span<const data::ClientDataset* const> clients,
                                  bool use_test = true);

// Mean squared error of the model on one client's scaled training windows.
double train_mse(const nn::ModelParams& m, const data::ClientDataset& client);

}  // namespace fedstlf::fed
