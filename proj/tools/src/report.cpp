#include "fedstlf/app/report.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace fedstlf::app {
namespace {

using json = nlohmann::ordered_json;

json to_json(const metrics::Summary& s) {
  return json{{"min", s.min}, {"max", s.max}, {"mean", s.mean}};
}

json to_json(const fed::EvaluationSummary& e) {
  json clients = json::array();
  for (const auto& c : e.clients) {
    clients.push_back(json{{"client_id", c.client_id}, {"rmse_kw", c.rmse}, {"mape_pct", c.mape}});
  }
  return json{{"clients", clients}, {"rmse_kw", to_json(e.rmse)}, {"mape_pct", to_json(e.mape)}};
}

json to_json(const EvaluationTable& t) {
  json out{{"client_count", t.global.clients.size()}, {"global", to_json(t.global)}};
  if (t.personalized) {
    out["personalized"] = to_json(*t.personalized);
    const double before = t.global.mape.mean;
    const double after = t.personalized->mape.mean;
    out["mape_mean_change_pct_points"] = after - before;
  } else {
    out["personalized"] = nullptr;
  }
  return out;
}

json to_json(const fed::RoundReport& r) {
  json out{{"round", r.round},
           {"selected", r.selected},
           {"trained", r.trained},
           {"n_k", r.n_k},
           {"checksum", fmt::format("{:016x}", r.checksum)}};
  if (r.evaluation) {
    out["evaluation"] = json{{"rmse_kw", to_json(r.evaluation->rmse)},
                             {"mape_pct", to_json(r.evaluation->mape)}};
  } else {
    out["evaluation"] = nullptr;
  }
  out["cumulative_federated_load_kb"] = r.cumulative_federated_load_kb;
  return out;
}

json config_json(const RunConfig& c) {
  const auto& f = c.fed;
  json out;
  out["scenario"] = c.scenario ? json(*c.scenario) : json(nullptr);
  out["rounds"] = f.rounds;
  out["subset_size"] = f.subset_size;
  out["local_epochs"] = f.local_epochs;
  out["learning_rate"] = f.learning_rate;
  out["optimizer"] = optimizer_name(f.optimizer);
  out["batch_size"] = f.batch_size;
  out["eligibility_threshold"] = f.eligibility_threshold;
  out["min_records"] = f.min_records;
  out["look_back"] = f.look_back;
  out["look_ahead"] = f.look_ahead;
  out["train_frac"] = c.train_frac;
  out["layer_widths"] = f.layer_widths;
  out["seed"] = f.seed;
  out["guard_after_select"] = f.guard_after_select;
  out["participants"] = c.n_participants;
  out["holdout"] = c.n_holdout;
  if (const auto* csv = std::get_if<CsvSource>(&c.source)) {
    out["data"] = json{{"csv_dir", csv->dir.string()}};
  } else {
    const auto& s = std::get<SyntheticSource>(c.source);
    out["data"] = json{{"synthetic", json{{"clients", s.n_clients},
                                          {"days", s.n_days},
                                          {"flat_fraction", s.flat_fraction},
                                          {"seed", s.seed.value_or(f.seed)}}}};
  }
  json hops = json::object();
  for (const auto& [id, d] : c.topology.hops) hops[id] = d;
  out["topology"] = json{{"default_hops", c.topology.default_hops}, {"hops", hops}};
  json net;
  net["model_size_kb"] = c.netload.model_size_kb ? json(*c.netload.model_size_kb) : json(nullptr);
  net["total_data_kb"] = c.netload.total_data_kb ? json(*c.netload.total_data_kb) : json(nullptr);
  json per = json::object();
  for (const auto& [id, s] : c.netload.client_data_kb) per[id] = s;
  net["client_data_kb"] = per;
  net["direction_multiplier"] = c.netload.direction_multiplier;
  out["netload"] = net;
  const auto& p = c.personalization;
  out["personalization"] = json{
      {"enabled", p.enabled},
      {"epochs", p.epochs},
      {"learning_rate", p.learning_rate.value_or(f.learning_rate)},
      {"optimizer", optimizer_name(p.optimizer.value_or(f.optimizer))}};
  out["output_dir"] = c.output_dir.string();
  out["round_checkpoints"] = c.round_checkpoints;
  return out;
}

}  // namespace

std::string render_config(const RunConfig& config) { return config_json(config).dump(2); }

std::string render_report(const ScenarioReport& report) {
  json out;
  out["format"] = "fedstlf-scenario-report";
  out["version"] = 1;
  out["evaluation_split"] = "test";
  out["prediction_units"] = "kW, inverse-scaled, clamped at 0";
  out["config"] = config_json(report.config);
  out["eligible_participants"] = report.eligible;
  json rounds = json::array();
  for (const auto& r : report.rounds) rounds.push_back(to_json(r));
  out["rounds"] = rounds;
  out["evaluation"] = json{{"participants", to_json(report.participants)},
                           {"holdout", report.holdout ? to_json(*report.holdout) : json(nullptr)}};
  const auto& n = report.netload;
  out["netload"] = json{{"model_size_kb", n.model_size_kb},
                        {"direction_multiplier", n.direction_multiplier},
                        {"centralized_kb", n.centralized_kb},
                        {"federated_kb", n.federated_kb},
                        {"gain", n.gain}};
  return out.dump(2) + "\n";
}

}  // namespace fedstlf::app
