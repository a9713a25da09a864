#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fedstlf/evaluate.hpp"
#include "fedstlf/lstm.hpp"
#include "fedstlf/netload.hpp"
#include "fedstlf/optim.hpp"
#include "fedstlf/preprocess.hpp"

namespace fedstlf::fed {

struct ScenarioConfig {
  std::size_t rounds = 20;
  std::size_t subset_size = 5;
  std::size_t local_epochs = 1;
  double learning_rate = 1e-3;
  nn::OptimizerKind optimizer = nn::OptimizerKind::adam;
  double eligibility_threshold = 0.01;  // kW
  std::size_t min_records = 24;
  std::size_t look_back = 12;
  std::size_t look_ahead = 1;
  std::vector<std::size_t> layer_widths{1, 200, 200};
  std::size_t batch_size = 32;
  std::uint64_t seed = 42;
  // Select among all clients and skip ineligible ones afterwards, instead of
  // selecting among eligible clients only.
  bool guard_after_select = false;
  std::size_t workers = 1;

  // rounds == 0 is accepted here (an empty run); the config parser rejects it.
  void validate() const;
};

struct ClientState {
  const data::ClientDataset* dataset = nullptr;
  bool eligible = false;
};

bool is_eligible(const data::ClientDataset& client, double threshold, std::size_t min_records);

// Clients with load_std > threshold and n_k >= min_records, by client id.
std::vector<const data::ClientDataset*> eligible_clients(
    std::span<const data::ClientDataset> clients, double threshold, std::size_t min_records);

// min(K, |pool|) clients uniformly without replacement, returned by client id.
std::vector<const data::ClientDataset*> select_subset(
    std::span<const data::ClientDataset* const> pool, std::size_t k, std::mt19937_64& rng);

struct LocalTrainOptions {
  std::size_t epochs = 1;
  double learning_rate = 1e-3;
  nn::OptimizerKind optimizer = nn::OptimizerKind::adam;
  std::size_t batch_size = 32;
  nn::AdamHyper adam{};
};

struct LocalUpdate {
  std::string client_id;
  nn::ModelParams params;
  std::size_t n_k = 0;
  double last_epoch_loss = 0.0;  // mean batch MSE of the final epoch
};

// Mini-batch training from a copy of `global`; each epoch visits the
// training windows in an order shuffled by `rng`. Adam state starts fresh.
LocalUpdate local_train(const nn::ModelParams& global, const data::ClientDataset& client,
                        const LocalTrainOptions& opts, std::mt19937_64& rng);

// Weighted mean with weights n_k / sum(n_k), summed in client-id order.
nn::ModelParams aggregate(std::span<const LocalUpdate> updates);

struct RoundReport {
  std::size_t round = 0;
  std::vector<std::string> selected;  // subset drawn this round
  std::vector<std::string> trained;   // selected clients that passed the guard
  std::vector<std::size_t> n_k;       // per trained client
  std::uint64_t checksum = 0;         // FNV-1a of the aggregated flat parameters
  std::optional<EvaluationSummary> evaluation;  // trained clients' test splits
  double cumulative_federated_load_kb = 0.0;
};

struct NetAccounting {
  metrics::NetLoadParams params;
  metrics::Topology topology;
};

struct ScenarioResult {
  nn::ModelParams initial;
  nn::ModelParams final_model;
  std::vector<RoundReport> reports;
};

using RoundObserver = std::function<void(const RoundReport&, const nn::ModelParams&)>;

std::uint64_t init_seed(std::uint64_t master);
std::uint64_t round_seed(std::uint64_t master, std::size_t round);
std::uint64_t client_seed(std::uint64_t master, std::size_t round, const std::string& client_id);
std::uint64_t personalize_seed(std::uint64_t master, const std::string& client_id);

std::uint64_t params_checksum(const nn::ModelParams& m);

// Default model size in kilobits: 64-bit floats over every parameter.
double model_size_kb(const nn::ModelParams& m);

ScenarioResult run_scenario(const ScenarioConfig& config,
                            std::span<const data::ClientDataset> clients,
                            const std::optional<NetAccounting>& net = std::nullopt,
                            const RoundObserver& observer = {});

// Fine-tunes the global model on one client's training data; `global` is not modified.
nn::ModelParams personalize(const nn::ModelParams& global, const data::ClientDataset& client,
                            const LocalTrainOptions& opts, std::uint64_t seed);

}  // namespace fedstlf::fed
