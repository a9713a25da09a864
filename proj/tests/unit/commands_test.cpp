#include "fedstlf/app/commands.hpp"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fedstlf/checkpoint.hpp"
#include "fedstlf/error.hpp"
#include "test_support.hpp"

namespace fedstlf::app {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> column(const std::vector<std::string>& rows, std::size_t col) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream in(rows[i]);
    std::string cell;
    for (std::size_t c = 0; c <= col; ++c) std::getline(in, cell, ',');
    out.push_back(cell);
  }
  return out;
}

RunConfig small_run(const std::filesystem::path& out_dir) {
  auto c = parse_config_text(
      "scenario: 1\nlayer_widths: [1, 4]\nlearning_rate: 0.01\nbatch_size: 16\nseed: 3\n"
      "participants: 20\nholdout: 5\n"
      "data:\n  synthetic:\n    clients: 25\n    days: 8\n");
  c.output_dir = out_dir;
  return c;
}

TEST(CmdNetload, ReferenceScenarios) {
  for (auto [scenario, gain] : {std::pair{1, "0.976250"}, std::pair{2, "0.905000"}}) {
    auto c = parse_config_text("scenario: " + std::to_string(scenario) +
                               "\nnetload:\n  model_size_kb: 1.9\n  total_data_kb: 16000\n");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_netload(c, out, err), kExitOk) << err.str();
    EXPECT_NE(out.str().find(std::string("gain: ") + gain), std::string::npos) << out.str();
  }
  auto single = parse_config_text(
      "scenario: 1\nnetload:\n  model_size_kb: 1.9\n  total_data_kb: 16000\n  direction_multiplier: 1\n");
  EXPECT_NEAR(compute_netload(single).gain, 0.988125, 1e-12);
}

TEST(CmdNetload, ScenariosOneAndThreeShareLoad) {
  const std::string sizes = "netload:\n  model_size_kb: 1.9\n  total_data_kb: 16000\n";
  const auto s1 = compute_netload(parse_config_text("scenario: 1\n" + sizes));
  const auto s3 = compute_netload(parse_config_text("scenario: 3\n" + sizes));
  EXPECT_EQ(s1.federated_kb, s3.federated_kb);
  EXPECT_EQ(s1.gain, s3.gain);
}

TEST(CmdNetload, MissingSizesIsConfigError) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_netload(parse_config_text("scenario: 1\n"), out, err), kExitConfigError);
  EXPECT_NE(err.str().find("model_size_kb"), std::string::npos);
}

TEST(EmitPredictions, RowCountAndPerfectStub) {
  testing::TempDir dir("emit");
  std::vector<double> v(112);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.5 * std::sin(0.3 * static_cast<double>(i));
  const auto client = data::build_client_dataset(testing::make_series("x", v));
  ASSERT_EQ(client.test_y.size(), 10u);

  const auto perfect = [&client](std::span<const double> w) {
    for (std::size_t i = 0; i < client.test_y.size(); ++i) {
      const auto row = client.test_x.row(i);
      if (std::equal(row.begin(), row.end(), w.begin(), w.end())) return client.test_y[i];
    }
    return -1.0;
  };
  emit_predictions(perfect, client, dir.path() / "p.csv");
  const auto rows = lines_of(slurp(dir.path() / "p.csv"));
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0], "timestamp,actual_kw,predicted_kw");
  EXPECT_EQ(column(rows, 1), column(rows, 2));
  EXPECT_EQ(column(rows, 0).front(), data::format_timestamp(client.test_times.front()));

  EXPECT_THROW(emit_predictions(perfect, client, dir.path() / "missing" / "p.csv"), IoError);
}

TEST(CmdRun, StructureOfReport) {
  testing::TempDir dir("run");
  const auto cfg = small_run(dir.path() / "out");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(cfg, out, err), kExitOk) << err.str();

  const auto report = nlohmann::json::parse(slurp(dir.path() / "out" / "report.json"));
  EXPECT_EQ(report["format"], "fedstlf-scenario-report");
  ASSERT_EQ(report["rounds"].size(), 20u);
  for (const auto& r : report["rounds"]) EXPECT_LE(r["selected"].size(), 5u);
  EXPECT_EQ(report["config"]["subset_size"], 5);
  EXPECT_EQ(report["evaluation"]["participants"]["client_count"], 20);
  EXPECT_EQ(report["evaluation"]["holdout"]["client_count"], 5);
  EXPECT_FALSE(report["evaluation"]["participants"]["personalized"].is_null());
  EXPECT_FALSE(report["evaluation"]["holdout"]["personalized"].is_null());
  EXPECT_EQ(report["evaluation"]["holdout"]["global"]["clients"].size(), 5u);

  const auto model = nn::load_checkpoint(dir.path() / "out" / "model.flsm");
  EXPECT_EQ(model.widths(), (std::vector<std::size_t>{1, 4}));

  // Holdout clients never trained: global and personalized predictions differ.
  const std::string h = report["evaluation"]["holdout"]["global"]["clients"][0]["client_id"];
  const auto g = lines_of(slurp(dir.path() / "out" / "predictions" / (h + ".global.csv")));
  const auto p = lines_of(slurp(dir.path() / "out" / "predictions" / (h + ".personalized.csv")));
  ASSERT_EQ(g.size(), p.size());
  EXPECT_EQ(column(g, 1), column(p, 1));
  EXPECT_NE(column(g, 2), column(p, 2));
}

TEST(CmdRun, ReportIsDeterministic) {
  testing::TempDir dir("run-det");
  const auto cfg = small_run(dir.path() / "out");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(cfg, out, err), kExitOk) << err.str();
  const auto first = slurp(dir.path() / "out" / "report.json");
  ASSERT_EQ(cmd_run(cfg, out, err), kExitOk) << err.str();
  EXPECT_EQ(slurp(dir.path() / "out" / "report.json"), first);
}

TEST(CmdRun, EmptyDataDirectoryIsDataError) {
  testing::TempDir dir("run-empty");
  std::filesystem::create_directories(dir.path() / "data");
  auto cfg = parse_config_text("data:\n  csv_dir: " + (dir.path() / "data").string() + "\n");
  cfg.output_dir = dir.path() / "out";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(cfg, out, err), kExitDataError);
  EXPECT_NE(err.str().find("no client CSVs"), std::string::npos) << err.str();
}

TEST(CmdSynthAndPredict, RoundTrip) {
  testing::TempDir dir("synth");
  auto cfg = parse_config_text("data:\n  synthetic:\n    clients: 3\n    days: 5\n");
  cfg.output_dir = dir.path() / "csv";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_synth(cfg, out, err), kExitOk) << err.str();
  const auto series = data::load_client_dir(dir.path() / "csv");
  ASSERT_EQ(series.size(), 3u);
  EXPECT_EQ(series[0].size(), 5u * 24u);

  nn::save_checkpoint(dir.path() / "m.flsm", nn::init_params(std::vector<std::size_t>{1, 3}, 1));
  ASSERT_EQ(cmd_predict(dir.path() / "m.flsm", dir.path() / "csv" / (series[0].client_id + ".csv"),
                        dir.path() / "pred.csv", {}, out, err),
            kExitOk)
      << err.str();
  // 120 readings -> 108 windows -> 11 test rows.
  EXPECT_EQ(lines_of(slurp(dir.path() / "pred.csv")).size(), 12u);

  EXPECT_EQ(cmd_predict(dir.path() / "nope.flsm", dir.path() / "csv" / (series[0].client_id + ".csv"),
                        dir.path() / "pred.csv", {}, out, err),
            kExitDataError);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), kExitConfigError);
  EXPECT_EQ(exit_code_for(GapError("x", 1)), kExitDataError);
  EXPECT_EQ(exit_code_for(IoError("x")), kExitDataError);
  EXPECT_EQ(exit_code_for(NumericError("x")), kExitRuntimeError);
  EXPECT_EQ(exit_code_for(NoEligibleClientsError("x")), kExitRuntimeError);
}

}  // namespace
}  // namespace fedstlf::app
