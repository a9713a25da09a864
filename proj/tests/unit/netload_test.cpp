#include "fedstlf/netload.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fedstlf/error.hpp"

namespace fedstlf::metrics {
namespace {

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("c" + std::to_string(i));
  return out;
}

// rounds x first-K clients
std::vector<std::vector<std::string>> selections(std::size_t rounds, std::size_t k) {
  const auto all = ids(k);
  return std::vector<std::vector<std::string>>(rounds, all);
}

TEST(CentralizedLoad, Examples) {
  const auto three = ids(3);
  NetLoadParams p{1.9, {{"c0", 16000}, {"c1", 16000}, {"c2", 16000}}, 2};
  EXPECT_EQ(centralized_load(p, Topology::uniform(three), three), 48000.0);

  const auto one = ids(1);
  NetLoadParams q{1.9, {{"c0", 10}}, 2};
  EXPECT_EQ(centralized_load(q, Topology::uniform(one, 3), one), 30.0);
  EXPECT_EQ(centralized_load(q, Topology::uniform(one), {}), 0.0);
}

TEST(CentralizedLoad, MissingEntries) {
  const auto two = ids(2);
  NetLoadParams p{1.9, {{"c0", 10}}, 2};
  EXPECT_THROW(centralized_load(p, Topology::uniform(two), two), ConfigError);
  NetLoadParams full{1.9, {{"c0", 10}, {"c1", 10}}, 2};
  EXPECT_THROW(centralized_load(full, Topology::uniform(ids(1)), two), ConfigError);
}

TEST(FederatedLoad, Examples) {
  const auto five = ids(5);
  NetLoadParams p{1.9, {}, 2};
  EXPECT_NEAR(federated_load(p, Topology::uniform(five), selections(20, 5)), 380.0, 1e-9);
  EXPECT_EQ(federated_load(p, Topology::uniform(five), {}), 0.0);

  NetLoadParams q{2.0, {}, 1};
  EXPECT_EQ(federated_load(q, Topology::uniform(ids(1), 4), selections(1, 1)), 8.0);
  EXPECT_THROW(federated_load(q, Topology::uniform(ids(1)), selections(1, 2)), ConfigError);
}

TEST(NetworkGain, ReferenceScenarios) {
  const auto clients = ids(180);
  const auto topo = Topology::uniform(clients);
  const auto p = NetLoadParams::with_total_data(1.9, 16000.0, clients);
  const double central = centralized_load(p, topo, clients);
  EXPECT_NEAR(central, 16000.0, 1e-9);
  const double g1 = network_gain(federated_load(p, topo, selections(20, 5)), central);
  const double g2 = network_gain(federated_load(p, topo, selections(20, 20)), central);
  EXPECT_NEAR(g1, 0.97625, 1e-12);
  EXPECT_NEAR(g2, 0.905, 1e-12);
  EXPECT_NEAR(g1, 0.976, 0.01);
  EXPECT_NEAR(g2, 0.905, 0.01);

  auto single = p;
  single.direction_multiplier = 1;
  EXPECT_NEAR(network_gain(federated_load(single, topo, selections(20, 5)), central), 0.988125, 1e-12);
}

TEST(NetworkGain, EdgeCases) {
  EXPECT_EQ(network_gain(500.0, 500.0), 0.0);
  EXPECT_THROW(network_gain(1.0, 0.0), UndefinedMetricError);
  // Not clamped when the model traffic exceeds the raw data.
  EXPECT_EQ(network_gain(300.0, 100.0), -2.0);
}

TEST(NetLoad, Linearity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> size(0.5, 50.0);
  std::uniform_int_distribution<int> hop(1, 5);
  const auto clients = ids(8);
  for (int trial = 0; trial < 30; ++trial) {
    Topology topo;
    NetLoadParams p{size(rng), {}, 2};
    for (const auto& c : clients) {
      topo.hops[c] = hop(rng);
      p.client_data_kb[c] = size(rng);
    }
    std::vector<std::vector<std::string>> sel{{"c0", "c3"}, {"c1"}, {"c3", "c5", "c7"}};
    const double lf = federated_load(p, topo, sel);
    const double lc = centralized_load(p, topo, clients);

    auto doubled = p;
    doubled.model_size_kb *= 3.0;
    ASSERT_NEAR(federated_load(doubled, topo, sel), 3.0 * lf, 1e-9 * lf);

    auto twice = sel;
    twice.insert(twice.end(), sel.begin(), sel.end());
    ASSERT_NEAR(federated_load(p, topo, twice), 2.0 * lf, 1e-9 * lf);

    auto bumped = p;
    bumped.client_data_kb["c2"] += 10.0;
    ASSERT_NEAR(centralized_load(bumped, topo, clients), lc + 10.0 * topo.hops["c2"], 1e-9 * lc);

    ASSERT_LE(network_gain(lf, lc), 1.0);
  }
}

TEST(NetLoad, Validation) {
  Topology bad{{{"c0", 0}}};
  EXPECT_THROW(bad.validate(), ConfigError);
  NetLoadParams p{1.9, {}, 3};
  EXPECT_THROW(p.validate(), ConfigError);
  NetLoadParams q{0.0, {}, 2};
  EXPECT_THROW(q.validate(), ConfigError);
}

}  // namespace
}  // namespace fedstlf::metrics
