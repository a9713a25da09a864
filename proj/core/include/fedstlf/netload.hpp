#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace fedstlf::metrics {

// Hop count between each client and the aggregation server.
struct Topology {
  std::map<std::string, int> hops;

  static Topology uniform(std::span<const std::string> clients, int hops = 1);
  int hops_for(const std::string& client) const;
  void validate() const;
};

// Sizes are in kilobits. direction_multiplier counts the model download and
// upload per participation (2) or only one direction (1).
struct NetLoadParams {
  double model_size_kb = 0.0;
  std::map<std::string, double> client_data_kb;
  int direction_multiplier = 2;

  // Splits an aggregate data volume equally across the given clients.
  static NetLoadParams with_total_data(double model_size_kb, double total_data_kb,
                                       std::span<const std::string> clients,
                                       int direction_multiplier = 2);
  void validate() const;
};

// Raw-data upload: sum of data size x hops.
double centralized_load(const NetLoadParams& params, const Topology& topo,
                        std::span<const std::string> clients);

// Model exchange: S_m x multiplier x sum over rounds of the selected clients' hops.
double federated_load(const NetLoadParams& params, const Topology& topo,
                      std::span<const std::vector<std::string>> selections);

// 1 - federated / centralized. Not clamped: negative when federated traffic is larger.
double network_gain(double federated_kb, double centralized_kb);

}  // namespace fedstlf::metrics
