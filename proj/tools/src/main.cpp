#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fedstlf/app/commands.hpp"
#include "fedstlf/app/config.hpp"

namespace {

template <typename Fn>
int with_config(const std::string& path, Fn&& fn) {
  fedstlf::app::RunConfig config;
  try {
    config = fedstlf::app::parse_config(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fedstlf::app::exit_code_for(e);
  }
  return fn(config);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fedstlf::app;
  configure_logging();

  CLI::App app{"Federated short-term load forecasting simulator"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Train a scenario and write the report");
  run->add_option("config", config_path, "Scenario config (YAML)")->required();

  auto* netload = app.add_subcommand("netload", "Print centralized/federated network load and gain");
  netload->add_option("config", config_path, "Scenario config (YAML)")->required();

  auto* synth = app.add_subcommand("synth", "Write synthetic client CSVs to output_dir");
  synth->add_option("config", config_path, "Config with a data.synthetic source")->required();

  std::string checkpoint, client_csv, out_path;
  PredictOptions popts;
  auto* predict = app.add_subcommand("predict", "Write test-split predictions for one client");
  predict->add_option("checkpoint", checkpoint, "Model checkpoint (.flsm)")->required();
  predict->add_option("client_csv", client_csv, "Client CSV (timestamp,kw)")->required();
  predict->add_option("out", out_path, "Output CSV")->required();
  predict->add_option("--look-back", popts.look_back, "Window length")->capture_default_str();
  predict->add_option("--look-ahead", popts.look_ahead, "Forecast offset")->capture_default_str();
  predict->add_option("--train-frac", popts.train_frac, "Train share of windows")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (*run) return with_config(config_path, [](const RunConfig& c) { return cmd_run(c, std::cout, std::cerr); });
  if (*netload) {
    return with_config(config_path, [](const RunConfig& c) { return cmd_netload(c, std::cout, std::cerr); });
  }
  if (*synth) return with_config(config_path, [](const RunConfig& c) { return cmd_synth(c, std::cout, std::cerr); });
  return cmd_predict(checkpoint, client_csv, out_path, popts, std::cout, std::cerr);
}
