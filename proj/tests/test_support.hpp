#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "fedstlf/lstm.hpp"
#include "fedstlf/preprocess.hpp"
#include "fedstlf/timeseries.hpp"

namespace fedstlf::testing {

inline std::vector<double> random_window(std::mt19937_64& rng, std::size_t n = 12) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  for (auto& v : w) v = u(rng);
  return w;
}

inline nn::ModelParams random_model(std::vector<std::size_t> widths, std::uint64_t seed,
                                    double bias_scale = 0.5) {
  auto m = nn::init_params(widths, seed);
  std::mt19937_64 rng(seed ^ 0xABCDEFull);
  std::uniform_real_distribution<double> u(-bias_scale, bias_scale);
  for (auto& layer : m.lstm_layers) {
    for (double& b : layer.b.values()) b += u(rng);
  }
  m.dense_b = u(rng);
  return m;
}

// Central finite differences of mse(model(window), target) over every flat
// parameter. Uses only forward evaluation.
inline std::vector<double> finite_difference_gradient(const nn::ModelParams& m,
                                                      const std::vector<double>& window,
                                                      double target, double h = 1e-5) {
  const auto widths = m.widths();
  auto flat = nn::flatten(m);
  std::vector<double> grad(flat.size());
  auto loss_at = [&](const std::vector<double>& v) {
    const double p = nn::predict(nn::unflatten(v, widths), window);
    return (p - target) * (p - target);
  };
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double orig = flat[i];
    flat[i] = orig + h;
    const double up = loss_at(flat);
    flat[i] = orig - h;
    const double down = loss_at(flat);
    flat[i] = orig;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline data::TimeSeries make_series(std::string id, std::vector<double> values) {
  data::TimeSeries ts;
  ts.client_id = std::move(id);
  ts.start = std::chrono::sys_days{std::chrono::year{2019} / 1 / 1};
  ts.values = std::move(values);
  return ts;
}

// Daily sinusoid plus small deterministic noise; learnable in a few epochs.
inline data::TimeSeries learnable_series(const std::string& id, std::size_t hours, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.03);
  std::vector<double> v(hours);
  for (std::size_t t = 0; t < hours; ++t) {
    v[t] = 1.0 + 0.6 * std::sin(2.0 * 3.141592653589793 * static_cast<double>(t % 24) / 24.0) +
           noise(rng);
  }
  return make_series(id, std::move(v));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("fedstlf-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fedstlf::testing
