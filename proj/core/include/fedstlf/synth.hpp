#pragma once

#include <cstdint>
#include <vector>

#include "fedstlf/timeseries.hpp"

namespace fedstlf::data {

struct SynthOptions {
  std::size_t n_clients = 200;
  std::size_t n_days = 90;
  std::uint64_t seed = 1;
  // Share of clients with a near-constant load; round(flat_fraction * n_clients).
  double flat_fraction = 0.0;
  Timestamp start = std::chrono::sys_days{std::chrono::year{2019} / 1 / 1};
};

// Upper bound on load_std of a flat synthetic client.
inline constexpr double kFlatClientMaxStd = 0.005;

// Household-like hourly loads: base + two daily harmonics (morning and evening
// peaks) with weekly modulation and Gaussian noise, clamped at 0 kW.
std::vector<TimeSeries> synth_generate(const SynthOptions& opts);

}  // namespace fedstlf::data
