#include "fedstlf/app/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fedstlf/checkpoint.hpp"
#include "fedstlf/error.hpp"
#include "fedstlf/parallel.hpp"
#include "fedstlf/seed.hpp"
#include "fedstlf/synth.hpp"
#include "fedstlf/timeseries.hpp"

namespace fedstlf::app {
namespace {

std::shared_ptr<spdlog::logger> log() {
  if (auto existing = spdlog::get("fedstlf")) return existing;
  auto logger = spdlog::stderr_color_mt("fedstlf");
  logger->set_pattern("[%l] %v");
  return logger;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<data::TimeSeries> load_source(const RunConfig& cfg) {
  if (const auto* csv = std::get_if<CsvSource>(&cfg.source)) return data::load_client_dir(csv->dir);
  const auto& s = std::get<SyntheticSource>(cfg.source);
  return data::synth_generate(
      {s.n_clients, s.n_days, s.seed.value_or(cfg.fed.seed), s.flat_fraction});
}

metrics::Topology build_topology(const RunConfig& cfg, std::span<const std::string> ids) {
  metrics::Topology topo = metrics::Topology::uniform(ids, cfg.topology.default_hops);
  for (const auto& [id, d] : cfg.topology.hops) {
    if (!topo.hops.contains(id)) throw ConfigError("topology.hops." + id + ": unknown client");
    topo.hops[id] = d;
  }
  topo.validate();
  return topo;
}

std::vector<std::string> ids_of(std::span<const data::ClientDataset> clients) {
  std::vector<std::string> ids;
  for (const auto& c : clients) ids.push_back(c.client_id);
  return ids;
}

std::vector<data::ClientDataset> build_datasets(const std::vector<std::string>& ids,
                                                const std::map<std::string, const data::TimeSeries*>& by_id,
                                                const data::DatasetOptions& opts,
                                                std::size_t workers) {
  std::vector<data::ClientDataset> out(ids.size());
  parallel_for(ids.size(), workers,
               [&](std::size_t i) { out[i] = data::build_client_dataset(*by_id.at(ids[i]), opts); });
  return out;
}

fed::LocalTrainOptions personalization_options(const RunConfig& cfg) {
  const auto& p = cfg.personalization;
  return {p.epochs, p.learning_rate.value_or(cfg.fed.learning_rate),
          p.optimizer.value_or(cfg.fed.optimizer), cfg.fed.batch_size, {}};
}

struct PersonalizedSet {
  std::vector<nn::ModelParams> models;
  fed::EvaluationSummary summary;
};

PersonalizedSet personalize_all(const RunConfig& cfg, const nn::ModelParams& global,
                                std::span<const data::ClientDataset> clients) {
  const auto opts = personalization_options(cfg);
  PersonalizedSet set;
  set.models.resize(clients.size());
  parallel_for(clients.size(), cfg.fed.workers, [&](std::size_t i) {
    set.models[i] = fed::personalize(global, clients[i], opts,
                                     fed::personalize_seed(cfg.fed.seed, clients[i].client_id));
  });
  std::vector<fed::ClientMetrics> rows;
  for (std::size_t i = 0; i < clients.size(); ++i) {
    const data::ClientDataset* one[] = {&clients[i]};
    auto single = fed::evaluate_global(set.models[i], one, true);
    rows.push_back(single.clients.front());
  }
  set.summary = fed::summarize_clients(std::move(rows));
  return set;
}

std::string fmt_kb(double v) { return fmt::format("{:.3f}", v); }

}  // namespace

void configure_logging() {
  auto logger = log();
  const char* env = std::getenv("FEDSTLF_LOG_LEVEL");
  const auto level = env ? spdlog::level::from_str(env) : spdlog::level::info;
  logger->set_level(level);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfigError;
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const IoError*>(&e)) return kExitDataError;
  return kExitRuntimeError;
}

void emit_predictions(const fed::Predictor& predictor, const data::ClientDataset& client,
                      const std::filesystem::path& out_path) {
  if (client.test_y.empty()) throw InsufficientDataError(client.client_id + " has no test windows");
  const auto actual = fed::actual_kw(client, true);
  const auto predicted = fed::predict_kw(predictor, client, true);
  std::string text = "timestamp,actual_kw,predicted_kw\n";
  for (std::size_t i = 0; i < actual.size(); ++i) {
    text += fmt::format("{},{:.6f},{:.6f}\n", data::format_timestamp(client.test_times[i]),
                        actual[i], predicted[i]);
  }
  write_text(out_path, text);
}

void emit_predictions(const nn::ModelParams& model, const data::ClientDataset& client,
                      const std::filesystem::path& out_path) {
  emit_predictions(fed::model_predictor(model), client, out_path);
}

RunArtifacts execute_run(const RunConfig& cfg) {
  cfg.fed.validate();
  if (cfg.fed.rounds < 1) throw ConfigError("rounds: must be >= 1");
  auto series = load_source(cfg);
  std::map<std::string, const data::TimeSeries*> by_id;
  std::vector<std::string> ids;
  for (const auto& s : series) {
    if (!by_id.emplace(s.client_id, &s).second) {
      throw DataError("duplicate client id " + s.client_id);
    }
    ids.push_back(s.client_id);
  }
  const auto partition = data::partition_clients(ids, cfg.n_participants, cfg.n_holdout,
                                                 derive_seed(cfg.fed.seed, "partition", 0));
  const data::DatasetOptions dopts{cfg.fed.look_back, cfg.fed.look_ahead, cfg.train_frac};
  const auto participants = build_datasets(partition.participants, by_id, dopts, cfg.fed.workers);
  const auto holdout = build_datasets(partition.holdout, by_id, dopts, cfg.fed.workers);
  log()->info("{} clients loaded: {} participants, {} holdout", ids.size(), participants.size(),
              holdout.size());

  const auto participant_ids = ids_of(participants);
  std::vector<std::string> all_ids = participant_ids;
  for (const auto& h : holdout) all_ids.push_back(h.client_id);
  fed::NetAccounting net;
  net.topology = build_topology(cfg, all_ids);
  net.params.direction_multiplier = cfg.netload.direction_multiplier;
  net.params.model_size_kb = cfg.netload.model_size_kb.value_or(
      64.0 * static_cast<double>(nn::parameter_count(cfg.fed.layer_widths)) / 1000.0);
  if (!cfg.netload.client_data_kb.empty()) {
    net.params.client_data_kb = cfg.netload.client_data_kb;
  } else if (cfg.netload.total_data_kb) {
    net.params.client_data_kb = metrics::NetLoadParams::with_total_data(
        net.params.model_size_kb, *cfg.netload.total_data_kb, participant_ids,
        net.params.direction_multiplier).client_data_kb;
  } else {
    for (const auto& id : participant_ids) {
      net.params.client_data_kb[id] = 64.0 * static_cast<double>(by_id.at(id)->size()) / 1000.0;
    }
  }
  net.params.validate();

  const auto out_dir = cfg.output_dir;
  ensure_dir(out_dir);
  ensure_dir(out_dir / "predictions");
  if (cfg.round_checkpoints) ensure_dir(out_dir / "checkpoints");

  const auto observer = [&](const fed::RoundReport& r, const nn::ModelParams& global) {
    if (r.evaluation) {
      log()->info("round {:>3}: {} trained, mean test RMSE {:.4f} kW, MAPE {:.2f}%", r.round,
                  r.trained.size(), r.evaluation->rmse.mean, r.evaluation->mape.mean);
    } else {
      log()->info("round {:>3}: no eligible client in subset", r.round);
    }
    if (cfg.round_checkpoints) {
      nn::save_checkpoint(out_dir / "checkpoints" / fmt::format("round-{:03}.flsm", r.round), global);
    }
  };
  auto result = fed::run_scenario(cfg.fed, participants, net, observer);

  RunArtifacts art;
  ScenarioReport& rep = art.report;
  rep.config = cfg;
  for (const auto* c : fed::eligible_clients(participants, cfg.fed.eligibility_threshold,
                                             cfg.fed.min_records)) {
    rep.eligible.push_back(c->client_id);
  }
  rep.rounds = result.reports;

  const auto& global = result.final_model;
  rep.participants.global = fed::evaluate_global(global, participants, true);
  if (!holdout.empty()) rep.holdout = EvaluationTable{fed::evaluate_global(global, holdout, true), {}};

  for (const auto* group : {&participants, &holdout}) {
    for (const auto& c : *group) {
      const auto path = out_dir / "predictions" / (c.client_id + ".global.csv");
      emit_predictions(global, c, path);
      art.prediction_paths.push_back(path);
    }
  }

  if (cfg.personalization.enabled) {
    log()->info("personalizing {} clients for {} epochs", participants.size() + holdout.size(),
                cfg.personalization.epochs);
    auto p = personalize_all(cfg, global, participants);
    rep.participants.personalized = p.summary;
    std::vector<nn::ModelParams> holdout_models;
    if (!holdout.empty()) {
      auto h = personalize_all(cfg, global, holdout);
      rep.holdout->personalized = h.summary;
      holdout_models = std::move(h.models);
    }
    for (std::size_t i = 0; i < participants.size(); ++i) {
      const auto path = out_dir / "predictions" / (participants[i].client_id + ".personalized.csv");
      emit_predictions(p.models[i], participants[i], path);
      art.prediction_paths.push_back(path);
    }
    for (std::size_t i = 0; i < holdout.size(); ++i) {
      const auto path = out_dir / "predictions" / (holdout[i].client_id + ".personalized.csv");
      emit_predictions(holdout_models[i], holdout[i], path);
      art.prediction_paths.push_back(path);
    }
  }

  auto& nl = rep.netload;
  nl.model_size_kb = net.params.model_size_kb;
  nl.direction_multiplier = net.params.direction_multiplier;
  nl.centralized_kb = metrics::centralized_load(net.params, net.topology, participant_ids);
  nl.federated_kb = rep.rounds.empty() ? 0.0 : rep.rounds.back().cumulative_federated_load_kb;
  nl.gain = metrics::network_gain(nl.federated_kb, nl.centralized_kb);

  art.model_path = out_dir / "model.flsm";
  nn::save_checkpoint(art.model_path, global);
  art.report_path = out_dir / "report.json";
  write_text(art.report_path, render_report(rep));
  return art;
}

NetLoadResult compute_netload(const RunConfig& cfg) {
  const auto& spec = cfg.netload;
  if (!spec.model_size_kb) throw ConfigError("netload.model_size_kb: required for netload");
  if (!spec.total_data_kb && spec.client_data_kb.empty()) {
    throw ConfigError("netload: total_data_kb or client_data_kb required for netload");
  }
  std::vector<std::string> ids;
  if (!spec.client_data_kb.empty()) {
    for (const auto& [id, size] : spec.client_data_kb) ids.push_back(id);
  } else {
    for (std::size_t i = 0; i < cfg.n_participants; ++i) ids.push_back(fmt::format("client-{:03}", i));
  }
  metrics::NetLoadParams params;
  if (spec.total_data_kb) {
    params = metrics::NetLoadParams::with_total_data(*spec.model_size_kb, *spec.total_data_kb, ids,
                                                     spec.direction_multiplier);
  } else {
    params.model_size_kb = *spec.model_size_kb;
    params.client_data_kb = spec.client_data_kb;
    params.direction_multiplier = spec.direction_multiplier;
    params.validate();
  }
  const auto topo = build_topology(cfg, ids);

  std::vector<std::vector<std::string>> selections;
  for (std::size_t r = 0; r < cfg.fed.rounds; ++r) {
    std::mt19937_64 rng(fed::round_seed(cfg.fed.seed, r));
    std::vector<std::string> picked;
    std::sample(ids.begin(), ids.end(), std::back_inserter(picked), cfg.fed.subset_size, rng);
    selections.push_back(std::move(picked));
  }
  NetLoadResult out;
  out.centralized_kb = metrics::centralized_load(params, topo, ids);
  out.federated_kb = metrics::federated_load(params, topo, selections);
  out.gain = metrics::network_gain(out.federated_kb, out.centralized_kb);
  return out;
}

std::vector<std::filesystem::path> execute_synth(const RunConfig& cfg) {
  if (!std::holds_alternative<SyntheticSource>(cfg.source)) {
    throw ConfigError("data: synth needs a synthetic source");
  }
  const auto series = load_source(cfg);
  ensure_dir(cfg.output_dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& s : series) {
    paths.push_back(cfg.output_dir / (s.client_id + ".csv"));
    data::write_client_csv(paths.back(), s);
  }
  return paths;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto art = execute_run(config);
    const auto& p = art.report.participants.global;
    out << "report: " << art.report_path.string() << '\n'
        << "model: " << art.model_path.string() << '\n'
        << fmt::format("participants: mean RMSE {:.4f} kW, mean MAPE {:.2f}%\n", p.rmse.mean,
                       p.mape.mean)
        << fmt::format("network gain: {:.4f}\n", art.report.netload.gain);
  });
}

int cmd_netload(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto r = compute_netload(config);
    out << "rounds: " << config.fed.rounds << '\n'
        << "subset_size: " << config.fed.subset_size << '\n'
        << "direction_multiplier: " << config.netload.direction_multiplier << '\n'
        << "centralized_load_kb: " << fmt_kb(r.centralized_kb) << '\n'
        << "federated_load_kb: " << fmt_kb(r.federated_kb) << '\n'
        << fmt::format("gain: {:.6f} ({:.1f}%)\n", r.gain, 100.0 * r.gain);
  });
}

int cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto paths = execute_synth(config);
    out << "wrote " << paths.size() << " client files to " << config.output_dir.string() << '\n';
  });
}

int cmd_predict(const std::filesystem::path& checkpoint, const std::filesystem::path& client_csv,
                const std::filesystem::path& out_path, const PredictOptions& opts,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto model = nn::load_checkpoint(checkpoint);
    const auto series = data::load_client_csv(client_csv);
    const auto ds = data::build_client_dataset(series, {opts.look_back, opts.look_ahead, opts.train_frac});
    emit_predictions(model, ds, out_path);
    out << "wrote " << ds.test_y.size() << " predictions to " << out_path.string() << '\n';
  });
}

}  // namespace fedstlf::app
