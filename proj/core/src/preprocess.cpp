#include "fedstlf/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fedstlf/error.hpp"

namespace fedstlf::data {
namespace {

Windows slice_windows(const Windows& w, std::size_t begin, std::size_t end) {
  const std::size_t cols = w.x.cols();
  std::vector<double> values(w.x.values().begin() + static_cast<std::ptrdiff_t>(begin * cols),
                             w.x.values().begin() + static_cast<std::ptrdiff_t>(end * cols));
  return Windows{Matrix(end - begin, cols, std::move(values)),
                 std::vector<double>(w.y.begin() + static_cast<std::ptrdiff_t>(begin),
                                     w.y.begin() + static_cast<std::ptrdiff_t>(end))};
}

}  // namespace

MinMaxScaler minmax_fit(std::span<const double> train_values) {
  if (train_values.empty()) throw InsufficientDataError("cannot fit a scaler on no values");
  const auto [lo, hi] = std::minmax_element(train_values.begin(), train_values.end());
  if (!(*hi > *lo)) {
    throw DegenerateSeriesError("constant series (min == max == " + std::to_string(*lo) +
                                ") cannot be min-max scaled");
  }
  return MinMaxScaler{*lo, *hi};
}

std::vector<double> minmax_transform(const MinMaxScaler& s, std::span<const double> kw) {
  std::vector<double> out(kw.size());
  std::transform(kw.begin(), kw.end(), out.begin(), [&](double v) { return s.transform(v); });
  return out;
}

std::vector<double> minmax_inverse(const MinMaxScaler& s, std::span<const double> scaled) {
  std::vector<double> out(scaled.size());
  std::transform(scaled.begin(), scaled.end(), out.begin(), [&](double v) { return s.inverse(v); });
  return out;
}

std::size_t window_count(std::size_t length, std::size_t look_back, std::size_t look_ahead) {
  if (look_back == 0 || look_ahead == 0) throw ConfigError("look_back and look_ahead must be >= 1");
  if (length < look_back + look_ahead) {
    throw InsufficientDataError("series of length " + std::to_string(length) +
                                " is too short for look-back " + std::to_string(look_back) +
                                " and look-ahead " + std::to_string(look_ahead));
  }
  return length - look_back - look_ahead + 1;
}

Windows make_windows(std::span<const double> series, std::size_t look_back,
                     std::size_t look_ahead) {
  const std::size_t n = window_count(series.size(), look_back, look_ahead);
  std::vector<double> x;
  x.reserve(n * look_back);
  std::vector<double> y;
  y.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    x.insert(x.end(), series.begin() + static_cast<std::ptrdiff_t>(t),
             series.begin() + static_cast<std::ptrdiff_t>(t + look_back));
    y.push_back(series[t + look_back + look_ahead - 1]);
  }
  return Windows{Matrix(n, look_back, std::move(x)), std::move(y)};
}

std::size_t train_window_count(std::size_t n, double train_frac) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw ConfigError("train_frac must be in (0, 1)");
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  const auto n_train =
      static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(n) + 1e-9));
  if (n_train < 1 || n_train >= n) {
    throw InsufficientDataError(std::to_string(n) + " windows cannot be split " +
                                std::to_string(train_frac) + " with both sides non-empty");
  }
  return n_train;
}

Split split_train_test(const Windows& w, double train_frac) {
  const std::size_t n = w.count();
  const std::size_t n_train = train_window_count(n, train_frac);
  return Split{slice_windows(w, 0, n_train), slice_windows(w, n_train, n)};
}

Partition partition_clients(std::span<const std::string> ids, std::size_t n_participants,
                            std::size_t n_holdout, std::uint64_t seed) {
  if (ids.size() < n_participants + n_holdout) {
    throw ConfigError("partition needs " + std::to_string(n_participants + n_holdout) +
                      " clients but only " + std::to_string(ids.size()) + " are available");
  }
  std::vector<std::string> order(ids.begin(), ids.end());
  std::sort(order.begin(), order.end());
  if (std::adjacent_find(order.begin(), order.end()) != order.end()) {
    throw ConfigError("duplicate client ids in partition input");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  Partition p;
  p.participants.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_participants));
  p.holdout.assign(order.begin() + static_cast<std::ptrdiff_t>(n_participants),
                   order.begin() + static_cast<std::ptrdiff_t>(n_participants + n_holdout));
  std::sort(p.participants.begin(), p.participants.end());
  std::sort(p.holdout.begin(), p.holdout.end());
  return p;
}

double load_std(std::span<const double> values) {
  if (values.size() < 2) throw InsufficientDataError("load_std needs at least two readings");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double load_std(const TimeSeries& series) { return load_std(std::span<const double>(series.values)); }

ClientDataset build_client_dataset(const TimeSeries& series, const DatasetOptions& opts) {
  const std::size_t n = window_count(series.size(), opts.look_back, opts.look_ahead);
  const std::size_t n_train = train_window_count(n, opts.train_frac);
  const std::size_t horizon = opts.look_back + opts.look_ahead - 1;

  // Raw readings touched by training windows: inputs and targets up to the
  // last training target.
  const std::span<const double> raw(series.values);
  const auto train_raw = raw.first(n_train + horizon);

  ClientDataset ds;
  ds.client_id = series.client_id;
  try {
    ds.scaler = minmax_fit(train_raw);
  } catch (const DegenerateSeriesError& e) {
    throw DegenerateSeriesError(series.client_id + ": " + e.what());
  }
  ds.load_std = load_std(train_raw);

  const auto scaled = minmax_transform(ds.scaler, raw);
  const Windows all = make_windows(scaled, opts.look_back, opts.look_ahead);
  Split split{slice_windows(all, 0, n_train), slice_windows(all, n_train, n)};
  ds.train_x = std::move(split.train.x);
  ds.train_y = std::move(split.train.y);
  ds.test_x = std::move(split.test.x);
  ds.test_y = std::move(split.test.y);
  for (std::size_t t = 0; t < n; ++t) {
    (t < n_train ? ds.train_times : ds.test_times).push_back(series.time_at(t + horizon));
  }
  ds.n_k = n_train;
  return ds;
}

}  // namespace fedstlf::data
