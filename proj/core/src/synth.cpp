#include "fedstlf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "fedstlf/error.hpp"
#include "fedstlf/seed.hpp"

namespace fedstlf::data {
namespace {

std::string client_name(std::size_t index, std::size_t total) {
  std::size_t digits = 3;
  for (std::size_t n = total; n >= 1000; n /= 10) ++digits;
  return fmt::format("client-{:0{}}", index, digits);
}

std::vector<double> household(std::size_t hours, std::mt19937_64& rng) {
  using std::numbers::pi;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a1 = 0.2 + 0.5 * u(rng);          // daily harmonic
  const double a2 = 0.2 + 0.6 * u(rng);          // half-day harmonic
  const double phi1 = 2.0 * pi * u(rng);
  const double phi2 = 2.0 * pi * u(rng);
  const double base = a1 + a2 + 0.2 + 0.6 * u(rng);
  const double weekly = 0.15 * u(rng);
  const double phi_w = 2.0 * pi * u(rng);
  const double sigma = 0.03 + 0.07 * u(rng);
  std::normal_distribution<double> noise(0.0, sigma);

  std::vector<double> v(hours);
  for (std::size_t t = 0; t < hours; ++t) {
    const double h = static_cast<double>(t % 24);
    const double d = static_cast<double>(t) / 24.0;
    const double daily = a1 * std::sin(2.0 * pi * h / 24.0 + phi1) +
                         a2 * std::sin(4.0 * pi * h / 24.0 + phi2);
    const double week = 1.0 + weekly * std::sin(2.0 * pi * d / 7.0 + phi_w);
    v[t] = std::max(0.0, (base + daily) * week + noise(rng));
  }
  return v;
}

std::vector<double> flat(std::size_t hours, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 0.6);
  const double level = u(rng);
  std::normal_distribution<double> noise(0.0, 0.001);
  std::vector<double> v(hours);
  for (auto& x : v) x = std::clamp(level + noise(rng), level - 0.004, level + 0.004);
  return v;
}

}  // namespace

std::vector<TimeSeries> synth_generate(const SynthOptions& opts) {
  if (opts.n_clients < 1) throw ConfigError("synthetic n_clients must be >= 1");
  if (opts.n_days < 2) throw ConfigError("synthetic n_days must be >= 2");
  if (!(opts.flat_fraction >= 0.0 && opts.flat_fraction <= 1.0)) {
    throw ConfigError("synthetic flat_fraction must be in [0, 1]");
  }
  const std::size_t hours = opts.n_days * 24;
  const auto n_flat = static_cast<std::size_t>(
      std::llround(opts.flat_fraction * static_cast<double>(opts.n_clients)));

  std::vector<std::size_t> order(opts.n_clients);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 pick(derive_seed(opts.seed, "synth-flat", 0));
  std::shuffle(order.begin(), order.end(), pick);
  std::vector<bool> is_flat(opts.n_clients, false);
  for (std::size_t i = 0; i < n_flat; ++i) is_flat[order[i]] = true;

  std::vector<TimeSeries> out;
  out.reserve(opts.n_clients);
  for (std::size_t i = 0; i < opts.n_clients; ++i) {
    std::mt19937_64 rng(derive_seed(opts.seed, "synth-client", i));
    TimeSeries ts;
    ts.client_id = client_name(i, opts.n_clients);
    ts.start = opts.start;
    ts.values = is_flat[i] ? flat(hours, rng) : household(hours, rng);
    out.push_back(std::move(ts));
  }
  return out;
}

}  // namespace fedstlf::data
