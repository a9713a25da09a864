#include "fedstlf/fedavg.hpp"

#include <algorithm>
#include <numeric>

#include "fedstlf/error.hpp"
#include "fedstlf/parallel.hpp"
#include "fedstlf/seed.hpp"

namespace fedstlf::fed {
namespace {

bool by_id(const data::ClientDataset* a, const data::ClientDataset* b) {
  return a->client_id < b->client_id;
}

void zero(nn::Gradients& g) {
  for (auto block : g.values.blocks()) std::fill(block.begin(), block.end(), 0.0);
}

std::vector<std::string> ids_of(std::span<const data::ClientDataset* const> clients) {
  std::vector<std::string> ids;
  ids.reserve(clients.size());
  for (const auto* c : clients) ids.push_back(c->client_id);
  return ids;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (subset_size < 1) throw ConfigError("subset_size must be >= 1");
  if (local_epochs < 1) throw ConfigError("local_epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (look_back < 1 || look_ahead < 1) throw ConfigError("look_back and look_ahead must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  nn::check_widths(layer_widths);
}

bool is_eligible(const data::ClientDataset& client, double threshold, std::size_t min_records) {
  return client.load_std > threshold && client.n_k >= min_records;
}

std::vector<const data::ClientDataset*> eligible_clients(
    std::span<const data::ClientDataset> clients, double threshold, std::size_t min_records) {
  std::vector<const data::ClientDataset*> out;
  for (const auto& c : clients) {
    if (is_eligible(c, threshold, min_records)) out.push_back(&c);
  }
  std::sort(out.begin(), out.end(), by_id);
  return out;
}

std::vector<const data::ClientDataset*> select_subset(
    std::span<const data::ClientDataset* const> pool, std::size_t k, std::mt19937_64& rng) {
  if (pool.empty()) throw NoEligibleClientsError("no eligible clients to select from");
  std::vector<const data::ClientDataset*> sorted(pool.begin(), pool.end());
  std::sort(sorted.begin(), sorted.end(), by_id);
  std::vector<const data::ClientDataset*> out;
  out.reserve(std::min(k, sorted.size()));
  std::sample(sorted.begin(), sorted.end(), std::back_inserter(out), k, rng);
  return out;
}

LocalUpdate local_train(const nn::ModelParams& global, const data::ClientDataset& client,
                        const LocalTrainOptions& opts, std::mt19937_64& rng) {
  const std::size_t n = client.train_y.size();
  if (n == 0) throw InsufficientDataError("client " + client.client_id + " has no training windows");
  if (opts.batch_size == 0) throw ConfigError("batch_size must be >= 1");

  LocalUpdate up{client.client_id, global, client.n_k, 0.0};
  if (opts.epochs == 0) return up;

  const std::size_t look_back = client.train_x.cols();
  auto adam = nn::AdamState::fresh(global, opts.adam);
  auto grad = nn::Gradients::zeros_like(global);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += opts.batch_size) {
      const std::size_t end = std::min(n, start + opts.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(end - start);
      zero(grad);
      double batch_loss = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t idx = order[b];
        auto fwd = nn::model_forward(up.params, client.train_x.row(idx), look_back);
        const auto loss = nn::mse_loss(fwd.prediction, client.train_y[idx]);
        batch_loss += loss.value;
        nn::accumulate_backward(up.params, fwd.cache, loss.dloss_dpred * inv_batch, grad);
      }
      if (opts.optimizer == nn::OptimizerKind::sgd) {
        nn::sgd_update(up.params, grad, opts.learning_rate);
      } else {
        nn::adam_update(up.params, grad, adam, opts.learning_rate);
      }
      loss_sum += batch_loss * inv_batch;
      ++batches;
    }
    up.last_epoch_loss = loss_sum / static_cast<double>(batches);
  }
  return up;
}

nn::ModelParams aggregate(std::span<const LocalUpdate> updates) {
  if (updates.empty()) throw AggregationError("aggregate: no client updates");
  const auto widths = updates.front().params.widths();
  std::size_t total = 0;
  for (const auto& u : updates) {
    if (u.params.widths() != widths) {
      throw ShapeError("aggregate: update from " + u.client_id + " has a different shape");
    }
    total += u.n_k;
  }
  if (total == 0) throw AggregationError("aggregate: total sample count is zero");

  std::vector<std::size_t> order(updates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return updates[a].client_id < updates[b].client_id;
  });

  nn::ModelParams out = nn::ModelParams::zeros(widths);
  auto acc = out.blocks();
  for (std::size_t idx : order) {
    const double w = static_cast<double>(updates[idx].n_k) / static_cast<double>(total);
    const auto src = updates[idx].params.blocks();
    for (std::size_t b = 0; b < acc.size(); ++b) {
      for (std::size_t k = 0; k < acc[b].size(); ++k) acc[b][k] += w * src[b][k];
    }
  }
  return out;
}

std::uint64_t init_seed(std::uint64_t master) { return derive_seed(master, "init", 0); }

std::uint64_t round_seed(std::uint64_t master, std::size_t round) {
  return derive_seed(master, "select", round);
}

std::uint64_t client_seed(std::uint64_t master, std::size_t round, const std::string& client_id) {
  return derive_seed(master, "local", round, client_id);
}

std::uint64_t personalize_seed(std::uint64_t master, const std::string& client_id) {
  return derive_seed(master, "personalize", 0, client_id);
}

std::uint64_t params_checksum(const nn::ModelParams& m) { return fnv1a64(nn::flatten(m)); }

double model_size_kb(const nn::ModelParams& m) {
  return 64.0 * static_cast<double>(m.parameter_count()) / 1000.0;
}

ScenarioResult run_scenario(const ScenarioConfig& config,
                            std::span<const data::ClientDataset> clients,
                            const std::optional<NetAccounting>& net,
                            const RoundObserver& observer) {
  config.validate();
  std::vector<const data::ClientDataset*> all;
  all.reserve(clients.size());
  for (const auto& c : clients) all.push_back(&c);
  std::sort(all.begin(), all.end(), by_id);

  std::vector<ClientState> states;
  std::vector<const data::ClientDataset*> eligible;
  for (const auto* c : all) {
    const bool ok = is_eligible(*c, config.eligibility_threshold, config.min_records);
    states.push_back({c, ok});
    if (ok) eligible.push_back(c);
  }
  if (eligible.empty()) {
    throw NoEligibleClientsError("no client passes the eligibility gate (threshold " +
                                 std::to_string(config.eligibility_threshold) + " kW, min_records " +
                                 std::to_string(config.min_records) + ")");
  }

  ScenarioResult result;
  result.initial = nn::init_params(config.layer_widths, init_seed(config.seed));
  nn::ModelParams global = result.initial;

  NetAccounting accounting;
  if (net) {
    accounting = *net;
  } else {
    const auto ids = ids_of(all);
    accounting.params.model_size_kb = model_size_kb(global);
    accounting.topology = metrics::Topology::uniform(ids, 1);
  }

  const LocalTrainOptions local{config.local_epochs, config.learning_rate, config.optimizer,
                                config.batch_size, {}};
  std::vector<std::vector<std::string>> exchanged;

  for (std::size_t r = 0; r < config.rounds; ++r) {
    std::mt19937_64 rng(round_seed(config.seed, r));
    const auto selected = select_subset(config.guard_after_select ? all : eligible,
                                        config.subset_size, rng);
    std::vector<const data::ClientDataset*> trained;
    for (const auto* c : selected) {
      if (is_eligible(*c, config.eligibility_threshold, config.min_records)) trained.push_back(c);
    }

    std::vector<LocalUpdate> updates(trained.size());
    parallel_for(trained.size(), config.workers, [&](std::size_t i) {
      std::mt19937_64 crng(client_seed(config.seed, r, trained[i]->client_id));
      updates[i] = local_train(global, *trained[i], local, crng);
    });
    if (!updates.empty()) global = aggregate(updates);

    RoundReport report;
    report.round = r;
    report.selected = ids_of(selected);
    report.trained = ids_of(trained);
    for (const auto& u : updates) report.n_k.push_back(u.n_k);
    report.checksum = params_checksum(global);
    if (!trained.empty()) report.evaluation = evaluate_global(global, trained, true);
    exchanged.push_back(report.trained);
    report.cumulative_federated_load_kb =
        metrics::federated_load(accounting.params, accounting.topology, exchanged);
    if (observer) observer(report, global);
    result.reports.push_back(std::move(report));
  }
  result.final_model = std::move(global);
  return result;
}

nn::ModelParams personalize(const nn::ModelParams& global, const data::ClientDataset& client,
                            const LocalTrainOptions& opts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return local_train(global, client, opts, rng).params;
}

}  // namespace fedstlf::fed
