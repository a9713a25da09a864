#pragma once

#include <cstdint>

#include "fedstlf/lstm.hpp"

namespace fedstlf::nn {

enum class OptimizerKind { sgd, adam };

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  ModelParams m;  // first moment
  ModelParams v;  // second moment
  std::uint64_t t = 0;
  AdamHyper hyper;

  static AdamState fresh(const ModelParams& params, AdamHyper hyper = {});
};

// p <- p - lr * g
ModelParams sgd_step(const ModelParams& params, const Gradients& grad, double lr);

struct AdamResult {
  ModelParams params;
  AdamState state;
};

AdamResult adam_step(const ModelParams& params, const Gradients& grad, const AdamState& state,
                     double lr);

// In-place variants used by the training loop.
void sgd_update(ModelParams& params, const Gradients& grad, double lr);
void adam_update(ModelParams& params, const Gradients& grad, AdamState& state, double lr);

}  // namespace fedstlf::nn
