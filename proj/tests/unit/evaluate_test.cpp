#include "fedstlf/evaluate.hpp"

#include <gtest/gtest.h>

#include "fedstlf/error.hpp"
#include "test_support.hpp"

namespace fedstlf::fed {
namespace {

data::ClientDataset ramp_client(const std::string& id, double offset) {
  std::vector<double> v(60);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = offset + 0.1 * static_cast<double>(i);
  return data::build_client_dataset(testing::make_series(id, v));
}

// Looks the window up among the client's test rows and answers the true target.
Predictor oracle_for(const data::ClientDataset& c) {
  return [&c](std::span<const double> w) {
    for (std::size_t i = 0; i < c.test_y.size(); ++i) {
      const auto row = c.test_x.row(i);
      if (std::equal(row.begin(), row.end(), w.begin(), w.end())) return c.test_y[i];
    }
    ADD_FAILURE() << "window not found";
    return 0.0;
  };
}

TEST(Evaluate, PerfectPredictorScoresZero) {
  const auto a = ramp_client("a", 1.0);
  const auto b = ramp_client("b", 2.0);
  for (const auto* c : {&a, &b}) {
    const std::vector<const data::ClientDataset*> one{c};
    const auto s = evaluate_predictor(oracle_for(*c), one);
    EXPECT_EQ(s.clients[0].rmse, 0.0);
    EXPECT_EQ(s.clients[0].mape, 0.0);
  }
}

TEST(Evaluate, SingleClientSummaryCollapses) {
  const auto a = ramp_client("a", 1.0);
  const std::vector<const data::ClientDataset*> one{&a};
  const auto s = evaluate_predictor([](std::span<const double>) { return 0.5; }, one);
  ASSERT_EQ(s.clients.size(), 1u);
  EXPECT_EQ(s.rmse.min, s.rmse.max);
  EXPECT_EQ(s.rmse.mean, s.rmse.min);
  EXPECT_EQ(s.mape.mean, s.mape.max);
  EXPECT_GT(s.rmse.mean, 0.0);
}

TEST(Evaluate, TwoClientSummary) {
  const auto s = summarize_clients({{"a", 1.0, 10.0}, {"b", 3.0, 30.0}});
  EXPECT_EQ(s.rmse.mean, 2.0);
  EXPECT_EQ(s.rmse.min, 1.0);
  EXPECT_EQ(s.rmse.max, 3.0);
  EXPECT_EQ(s.mape.mean, 20.0);
}

TEST(Evaluate, MetricsAreInKilowatts) {
  // A constant scaled offset of d maps to d * (max - min) kW.
  const auto a = ramp_client("a", 1.0);
  const double delta = 0.05;
  auto perfect = oracle_for(a);
  const std::vector<const data::ClientDataset*> one{&a};
  const auto s = evaluate_predictor([&](std::span<const double> w) { return perfect(w) + delta; }, one);
  EXPECT_NEAR(s.clients[0].rmse, delta * (a.scaler.max - a.scaler.min), 1e-12);
}

TEST(Evaluate, PredictionsClampedAtZero) {
  const auto a = ramp_client("a", 1.0);
  const auto kw = predict_kw([](std::span<const double>) { return -50.0; }, a);
  for (double v : kw) EXPECT_EQ(v, 0.0);
}

TEST(Evaluate, EmptySetAndEmptyClient) {
  const auto m = nn::init_params(std::vector<std::size_t>{1, 2}, 1);
  EXPECT_THROW(evaluate_global(m, std::span<const data::ClientDataset>{}), InsufficientDataError);
  data::ClientDataset empty;
  empty.client_id = "e";
  const std::vector<const data::ClientDataset*> one{&empty};
  EXPECT_THROW(evaluate_global(m, one), InsufficientDataError);
}

TEST(Evaluate, GlobalMatchesPredictorPath) {
  const auto a = ramp_client("a", 1.0);
  const auto b = ramp_client("b", 4.0);
  const std::vector<data::ClientDataset> both{a, b};
  const auto m = nn::init_params(std::vector<std::size_t>{1, 3}, 4);
  const auto s = evaluate_global(m, both);
  ASSERT_EQ(s.clients.size(), 2u);
  EXPECT_EQ(s.clients[1].client_id, "b");
  const std::vector<const data::ClientDataset*> pb{&both[1]};
  EXPECT_EQ(evaluate_predictor(model_predictor(m), pb).clients[0].rmse, s.clients[1].rmse);
}

}  // namespace
}  // namespace fedstlf::fed
