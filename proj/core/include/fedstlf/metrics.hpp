#pragma once

#include <span>
#include <vector>

namespace fedstlf::metrics {

// sqrt(mean squared error), in the units of the inputs.
double rmse(std::span<const double> actual, std::span<const double> predicted);

// Mean absolute percentage error in percent. Indices with a zero actual are
// dropped from both the sum and the count.
double mape(std::span<const double> actual, std::span<const double> predicted);

struct Summary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

Summary summarize(std::span<const double> values);

}  // namespace fedstlf::metrics
