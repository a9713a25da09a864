#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedstlf/matrix.hpp"

namespace fedstlf::nn {

inline constexpr std::size_t kDefaultLookBack = 12;

// Block order along the 4H axis of every gate matrix. Forward, backward,
// flatten and checkpoint all rely on this order.
enum class Gate : std::size_t { input = 0, forget = 1, candidate = 2, output = 3 };
inline constexpr std::size_t kGateCount = 4;

struct LstmLayerParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Matrix w_x;  // 4H x I
  Matrix w_h;  // 4H x H
  Matrix b;    // 4H x 1

  static LstmLayerParams zeros(std::size_t input_dim, std::size_t hidden_dim);

  // Rows [gate*H, (gate+1)*H) of the bias.
  std::span<double> bias_block(Gate gate);
  std::span<const double> bias_block(Gate gate) const;

  void validate() const;
  friend bool operator==(const LstmLayerParams&, const LstmLayerParams&) = default;
};

// Stacked LSTM with a linear scalar head on the last hidden state.
// widths() is {1, H_1, ..., H_L}: the scalar input followed by layer widths.
struct ModelParams {
  std::vector<LstmLayerParams> lstm_layers;
  Matrix dense_w;  // 1 x H_L
  double dense_b = 0.0;

  static ModelParams zeros(std::span<const std::size_t> widths);

  std::vector<std::size_t> widths() const;
  std::size_t parameter_count() const;
  bool all_finite() const;
  void validate() const;

  // Parameter storage in canonical flatten order: per layer W_x, W_h, b,
  // then dense_w, then dense_b.
  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Gradient tree, shape-congruent with the ModelParams it was computed for.
struct Gradients {
  ModelParams values;

  static Gradients zeros_like(const ModelParams& m) { return {ModelParams::zeros(m.widths())}; }
  friend bool operator==(const Gradients&, const Gradients&) = default;
};

void check_widths(std::span<const std::size_t> widths);
std::size_t parameter_count(std::span<const std::size_t> widths);

// Glorot-uniform weights, zero biases except the forget-gate block (1.0).
ModelParams init_params(std::span<const std::size_t> widths, std::uint64_t seed);

struct CellCache {
  std::vector<double> x;
  std::vector<double> h_prev;
  std::vector<double> c_prev;
  std::vector<double> gates;  // activated i, f, g, o (4H)
  std::vector<double> c;
  std::vector<double> tanh_c;
};

struct CellOutput {
  std::vector<double> h;
  std::vector<double> c;
  CellCache cache;
};

CellOutput lstm_cell_forward(const LstmLayerParams& p, std::span<const double> x,
                             std::span<const double> h_prev, std::span<const double> c_prev);

struct ForwardCache {
  std::vector<std::size_t> widths;
  std::vector<std::vector<CellCache>> steps;  // [layer][time]
};

struct ForwardResult {
  double prediction = 0.0;
  ForwardCache cache;
};

// Unrolls every layer over the window from zero state and applies the head to
// the last top-layer hidden state.
ForwardResult model_forward(const ModelParams& m, std::span<const double> window,
                            std::size_t look_back = kDefaultLookBack);

// Same prediction as model_forward without recording caches.
double predict(const ModelParams& m, std::span<const double> window);

struct Loss {
  double value = 0.0;
  double dloss_dpred = 0.0;
};

Loss mse_loss(double pred, double target);

Gradients model_backward(const ModelParams& m, const ForwardCache& cache, double dloss_dpred);

// Adds the gradient of one example into `into` (shape-congruent with m).
void accumulate_backward(const ModelParams& m, const ForwardCache& cache, double dloss_dpred,
                         Gradients& into);

std::vector<double> flatten(const ModelParams& m);
ModelParams unflatten(std::span<const double> flat, std::span<const std::size_t> widths);

}  // namespace fedstlf::nn
