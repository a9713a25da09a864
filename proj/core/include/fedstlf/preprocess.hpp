#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedstlf/matrix.hpp"
#include "fedstlf/timeseries.hpp"

namespace fedstlf::data {

struct MinMaxScaler {
  double min = 0.0;
  double max = 1.0;

  double transform(double kw) const { return (kw - min) / (max - min); }
  double inverse(double scaled) const { return scaled * (max - min) + min; }
};

MinMaxScaler minmax_fit(std::span<const double> train_values);
std::vector<double> minmax_transform(const MinMaxScaler& s, std::span<const double> kw);
std::vector<double> minmax_inverse(const MinMaxScaler& s, std::span<const double> scaled);

// X row t holds values[t, t+look_back); y[t] = values[t+look_back+look_ahead-1].
struct Windows {
  Matrix x;
  std::vector<double> y;

  std::size_t count() const noexcept { return y.size(); }
};

std::size_t window_count(std::size_t length, std::size_t look_back, std::size_t look_ahead);
Windows make_windows(std::span<const double> series, std::size_t look_back = 12,
                     std::size_t look_ahead = 1);

// Index of the first test window: floor(train_frac * n).
std::size_t train_window_count(std::size_t n, double train_frac);

struct Split {
  Windows train;
  Windows test;
};

// Chronological, no shuffling.
Split split_train_test(const Windows& w, double train_frac = 0.9);

struct Partition {
  std::vector<std::string> participants;
  std::vector<std::string> holdout;
};

Partition partition_clients(std::span<const std::string> ids, std::size_t n_participants = 180,
                            std::size_t n_holdout = 20, std::uint64_t seed = 0);

// Population standard deviation.
double load_std(std::span<const double> values);
double load_std(const TimeSeries& series);

struct DatasetOptions {
  std::size_t look_back = 12;
  std::size_t look_ahead = 1;
  double train_frac = 0.9;
};

// One client's scaled, windowed data. The scaler and load_std are computed on
// the raw readings covered by the training windows only.
struct ClientDataset {
  std::string client_id;
  MinMaxScaler scaler;
  Matrix train_x;
  std::vector<double> train_y;
  Matrix test_x;
  std::vector<double> test_y;
  std::vector<Timestamp> train_times;  // timestamp of each training target
  std::vector<Timestamp> test_times;
  std::size_t n_k = 0;
  double load_std = 0.0;

  std::size_t look_back() const noexcept { return train_x.cols(); }
};

ClientDataset build_client_dataset(const TimeSeries& series, const DatasetOptions& opts = {});

}  // namespace fedstlf::data
