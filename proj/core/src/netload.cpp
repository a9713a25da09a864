#include "fedstlf/netload.hpp"

#include "fedstlf/error.hpp"

namespace fedstlf::metrics {

Topology Topology::uniform(std::span<const std::string> clients, int hops) {
  Topology t;
  for (const auto& c : clients) t.hops[c] = hops;
  t.validate();
  return t;
}

int Topology::hops_for(const std::string& client) const {
  const auto it = hops.find(client);
  if (it == hops.end()) throw ConfigError("topology has no hop count for client '" + client + "'");
  return it->second;
}

void Topology::validate() const {
  for (const auto& [id, d] : hops) {
    if (d < 1) throw ConfigError("hop count for client '" + id + "' must be >= 1");
  }
}

NetLoadParams NetLoadParams::with_total_data(double model_size_kb, double total_data_kb,
                                             std::span<const std::string> clients,
                                             int direction_multiplier) {
  if (clients.empty()) throw ConfigError("netload: no clients to spread the data volume over");
  NetLoadParams p;
  p.model_size_kb = model_size_kb;
  p.direction_multiplier = direction_multiplier;
  const double share = total_data_kb / static_cast<double>(clients.size());
  for (const auto& c : clients) p.client_data_kb[c] = share;
  p.validate();
  return p;
}

void NetLoadParams::validate() const {
  if (!(model_size_kb > 0.0)) throw ConfigError("netload.model_size_kb must be > 0");
  if (direction_multiplier != 1 && direction_multiplier != 2) {
    throw ConfigError("netload.direction_multiplier must be 1 or 2");
  }
  for (const auto& [id, s] : client_data_kb) {
    if (!(s > 0.0)) throw ConfigError("netload data size for client '" + id + "' must be > 0");
  }
}

double centralized_load(const NetLoadParams& params, const Topology& topo,
                        std::span<const std::string> clients) {
  double total = 0.0;
  for (const auto& c : clients) {
    const auto it = params.client_data_kb.find(c);
    if (it == params.client_data_kb.end()) {
      throw ConfigError("netload has no data size for client '" + c + "'");
    }
    total += it->second * topo.hops_for(c);
  }
  return total;
}

double federated_load(const NetLoadParams& params, const Topology& topo,
                      std::span<const std::vector<std::string>> selections) {
  long long hop_sum = 0;
  for (const auto& round : selections) {
    for (const auto& c : round) hop_sum += topo.hops_for(c);
  }
  return params.model_size_kb * params.direction_multiplier * static_cast<double>(hop_sum);
}

double network_gain(double federated_kb, double centralized_kb) {
  if (centralized_kb == 0.0) throw UndefinedMetricError("network gain undefined: centralized load is 0");
  return 1.0 - federated_kb / centralized_kb;
}

}  // namespace fedstlf::metrics
