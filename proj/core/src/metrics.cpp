#include "fedstlf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedstlf/error.hpp"

namespace fedstlf::metrics {
namespace {

void check_pair(std::span<const double> a, std::span<const double> p, const char* what) {
  if (a.empty()) throw UsageError(std::string(what) + ": empty input");
  if (a.size() != p.size()) {
    throw UsageError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                     " vs " + std::to_string(p.size()) + ")");
  }
}

}  // namespace

double rmse(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "rmse");
  double ss = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = actual[i] - predicted[i];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(actual.size()));
}

double mape(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "mape");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) continue;
    sum += std::abs((actual[i] - predicted[i]) / actual[i]);
    ++count;
  }
  if (count == 0) throw UndefinedMetricError("mape: every actual value is zero");
  return 100.0 * sum / static_cast<double>(count);
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw UsageError("summarize: no values");
  Summary s{values.front(), values.front(), 0.0};
  double sum = 0.0;
  for (double v : values) {
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    sum += v;
  }
  // Clamp guards the min <= mean <= max invariant against rounding.
  s.mean = std::clamp(sum / static_cast<double>(values.size()), s.min, s.max);
  return s;
}

}  // namespace fedstlf::metrics
