#include "fedstlf/app/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fedstlf/error.hpp"

namespace fedstlf::app {
namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const YAML::Node& node, const std::string& path,
                    const std::set<std::string>& known) {
  if (!node.IsMap()) {
    throw ConfigError((path.empty() ? std::string("config") : path) + ": expected a mapping");
  }
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!known.contains(key)) throw ConfigError("unknown key '" + join(path, key) + "'");
  }
}

template <typename T>
T read(const YAML::Node& node, const std::string& path, const char* type_name) {
  if (!node.IsScalar()) throw ConfigError(path + ": expected " + type_name);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path + ": expected " + type_name + ", got '" + node.Scalar() + "'");
  }
}

std::size_t read_count(const YAML::Node& node, const std::string& path) {
  const auto v = read<long long>(node, path, "an integer");
  if (v < 0) throw ConfigError(path + ": must be >= 0");
  return static_cast<std::size_t>(v);
}

std::size_t read_positive(const YAML::Node& node, const std::string& path) {
  const auto v = read_count(node, path);
  if (v < 1) throw ConfigError(path + ": must be >= 1");
  return v;
}

double read_double(const YAML::Node& node, const std::string& path) {
  return read<double>(node, path, "a number");
}

nn::OptimizerKind read_optimizer(const YAML::Node& node, const std::string& path) {
  const auto name = read<std::string>(node, path, "a string");
  if (name == "sgd") return nn::OptimizerKind::sgd;
  if (name == "adam") return nn::OptimizerKind::adam;
  throw ConfigError(path + ": expected 'sgd' or 'adam', got '" + name + "'");
}

void parse_data(const YAML::Node& node, RunConfig& cfg) {
  reject_unknown(node, "data", {"csv_dir", "synthetic"});
  const bool has_csv = static_cast<bool>(node["csv_dir"]);
  const bool has_synth = static_cast<bool>(node["synthetic"]);
  if (has_csv && has_synth) {
    throw ConfigError("data: exactly one source required, got both csv_dir and synthetic");
  }
  if (!has_csv && !has_synth) {
    throw ConfigError("data: exactly one source required (csv_dir or synthetic)");
  }
  if (has_csv) {
    cfg.source = CsvSource{read<std::string>(node["csv_dir"], "data.csv_dir", "a path")};
    return;
  }
  const auto& s = node["synthetic"];
  reject_unknown(s, "data.synthetic", {"clients", "days", "flat_fraction", "seed"});
  SyntheticSource src;
  if (s["clients"]) src.n_clients = read_positive(s["clients"], "data.synthetic.clients");
  if (s["days"]) src.n_days = read_count(s["days"], "data.synthetic.days");
  if (src.n_days < 2) throw ConfigError("data.synthetic.days: must be >= 2");
  if (s["flat_fraction"]) {
    src.flat_fraction = read_double(s["flat_fraction"], "data.synthetic.flat_fraction");
    if (!(src.flat_fraction >= 0.0 && src.flat_fraction <= 1.0)) {
      throw ConfigError("data.synthetic.flat_fraction: must be in [0, 1]");
    }
  }
  if (s["seed"]) src.seed = read<std::uint64_t>(s["seed"], "data.synthetic.seed", "an integer");
  cfg.source = src;
}

void parse_topology(const YAML::Node& node, RunConfig& cfg) {
  reject_unknown(node, "topology", {"default_hops", "hops"});
  if (node["default_hops"]) {
    cfg.topology.default_hops =
        static_cast<int>(read_positive(node["default_hops"], "topology.default_hops"));
  }
  if (const auto& hops = node["hops"]) {
    if (!hops.IsMap()) throw ConfigError("topology.hops: expected a mapping of client id to hops");
    for (const auto& kv : hops) {
      const auto id = kv.first.as<std::string>();
      cfg.topology.hops[id] = static_cast<int>(read_positive(kv.second, "topology.hops." + id));
    }
  }
}

void parse_netload(const YAML::Node& node, RunConfig& cfg) {
  reject_unknown(node, "netload",
                 {"model_size_kb", "total_data_kb", "client_data_kb", "direction_multiplier"});
  auto positive = [](const YAML::Node& n, const std::string& path) {
    const double v = read_double(n, path);
    if (!(v > 0.0)) throw ConfigError(path + ": must be > 0");
    return v;
  };
  if (node["model_size_kb"]) {
    cfg.netload.model_size_kb = positive(node["model_size_kb"], "netload.model_size_kb");
  }
  if (node["total_data_kb"]) {
    cfg.netload.total_data_kb = positive(node["total_data_kb"], "netload.total_data_kb");
  }
  if (const auto& per = node["client_data_kb"]) {
    if (!per.IsMap()) throw ConfigError("netload.client_data_kb: expected a mapping");
    for (const auto& kv : per) {
      const auto id = kv.first.as<std::string>();
      cfg.netload.client_data_kb[id] = positive(kv.second, "netload.client_data_kb." + id);
    }
  }
  if (cfg.netload.total_data_kb && !cfg.netload.client_data_kb.empty()) {
    throw ConfigError("netload: give either total_data_kb or client_data_kb, not both");
  }
  if (node["direction_multiplier"]) {
    const auto m = read_count(node["direction_multiplier"], "netload.direction_multiplier");
    if (m != 1 && m != 2) throw ConfigError("netload.direction_multiplier: must be 1 or 2");
    cfg.netload.direction_multiplier = static_cast<int>(m);
  }
}

void parse_personalization(const YAML::Node& node, RunConfig& cfg) {
  reject_unknown(node, "personalization", {"enabled", "epochs", "learning_rate", "optimizer"});
  auto& p = cfg.personalization;
  if (node["enabled"]) p.enabled = read<bool>(node["enabled"], "personalization.enabled", "a boolean");
  if (node["epochs"]) p.epochs = read_count(node["epochs"], "personalization.epochs");
  if (node["learning_rate"]) {
    p.learning_rate = read_double(node["learning_rate"], "personalization.learning_rate");
    if (!(*p.learning_rate > 0.0)) throw ConfigError("personalization.learning_rate: must be > 0");
  }
  if (node["optimizer"]) p.optimizer = read_optimizer(node["optimizer"], "personalization.optimizer");
}

RunConfig from_yaml(const YAML::Node& root) {
  RunConfig cfg;
  if (!root || root.IsNull()) return cfg;
  reject_unknown(root, "",
                 {"scenario", "rounds", "subset_size", "local_epochs", "learning_rate",
                  "optimizer", "batch_size", "eligibility_threshold", "min_records", "look_back",
                  "look_ahead", "train_frac", "layer_widths", "seed", "workers",
                  "guard_after_select", "participants", "holdout", "output_dir",
                  "round_checkpoints", "data", "topology", "netload", "personalization"});
  auto& f = cfg.fed;
  if (root["scenario"]) {
    cfg.scenario = read<int>(root["scenario"], "scenario", "an integer");
    const auto preset = scenario_preset(*cfg.scenario);
    f.subset_size = preset.subset_size;
    f.local_epochs = preset.local_epochs;
  }
  if (root["rounds"]) f.rounds = read_positive(root["rounds"], "rounds");
  if (root["subset_size"]) f.subset_size = read_positive(root["subset_size"], "subset_size");
  if (root["local_epochs"]) f.local_epochs = read_positive(root["local_epochs"], "local_epochs");
  if (root["learning_rate"]) {
    f.learning_rate = read_double(root["learning_rate"], "learning_rate");
    if (!(f.learning_rate > 0.0)) throw ConfigError("learning_rate: must be > 0");
  }
  if (root["optimizer"]) f.optimizer = read_optimizer(root["optimizer"], "optimizer");
  if (root["batch_size"]) f.batch_size = read_positive(root["batch_size"], "batch_size");
  if (root["eligibility_threshold"]) {
    f.eligibility_threshold = read_double(root["eligibility_threshold"], "eligibility_threshold");
  }
  if (root["min_records"]) f.min_records = read_count(root["min_records"], "min_records");
  if (root["look_back"]) f.look_back = read_positive(root["look_back"], "look_back");
  if (root["look_ahead"]) f.look_ahead = read_positive(root["look_ahead"], "look_ahead");
  if (root["train_frac"]) {
    cfg.train_frac = read_double(root["train_frac"], "train_frac");
    if (!(cfg.train_frac > 0.0 && cfg.train_frac < 1.0)) {
      throw ConfigError("train_frac: must be in (0, 1)");
    }
  }
  if (const auto& w = root["layer_widths"]) {
    if (!w.IsSequence()) throw ConfigError("layer_widths: expected a list of integers");
    f.layer_widths.clear();
    for (std::size_t i = 0; i < w.size(); ++i) {
      f.layer_widths.push_back(read_positive(w[i], "layer_widths[" + std::to_string(i) + "]"));
    }
    try {
      nn::check_widths(f.layer_widths);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("layer_widths: ") + e.what());
    }
  }
  if (root["seed"]) f.seed = read<std::uint64_t>(root["seed"], "seed", "a non-negative integer");
  if (root["workers"]) f.workers = read_positive(root["workers"], "workers");
  if (root["guard_after_select"]) {
    f.guard_after_select = read<bool>(root["guard_after_select"], "guard_after_select", "a boolean");
  }
  if (root["participants"]) cfg.n_participants = read_positive(root["participants"], "participants");
  if (root["holdout"]) cfg.n_holdout = read_count(root["holdout"], "holdout");
  if (root["output_dir"]) {
    cfg.output_dir = read<std::string>(root["output_dir"], "output_dir", "a path");
  }
  if (root["round_checkpoints"]) {
    cfg.round_checkpoints = read<bool>(root["round_checkpoints"], "round_checkpoints", "a boolean");
  }
  if (root["data"]) parse_data(root["data"], cfg);
  if (root["topology"]) parse_topology(root["topology"], cfg);
  if (root["netload"]) parse_netload(root["netload"], cfg);
  if (root["personalization"]) parse_personalization(root["personalization"], cfg);
  f.validate();
  return cfg;
}

}  // namespace

ScenarioPreset scenario_preset(int scenario) {
  switch (scenario) {
    case 1: return {5, 1};
    case 2: return {20, 1};
    case 3: return {5, 5};
    case 4: return {20, 5};
    default:
      throw ConfigError("scenario: must be 1, 2, 3 or 4, got " + std::to_string(scenario));
  }
}

RunConfig parse_config_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string("config is not well-formed: ") + e.what());
  }
  return from_yaml(root);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string optimizer_name(nn::OptimizerKind k) {
  return k == nn::OptimizerKind::sgd ? "sgd" : "adam";
}

}  // namespace fedstlf::app
