#include "fedstlf/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fedstlf/error.hpp"

namespace fedstlf::nn {
namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::size_t gate_offset(Gate g, std::size_t hidden) {
  return static_cast<std::size_t>(g) * hidden;
}

void fill_glorot(Matrix& w, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : w.values()) v = dist(rng);
}

// Runs one layer over the whole sequence. `record` may be null.
std::vector<std::vector<double>> run_layer(const LstmLayerParams& p,
                                           const std::vector<std::vector<double>>& inputs,
                                           std::vector<CellCache>* record) {
  const std::size_t hidden = p.hidden_dim;
  std::vector<double> h(hidden, 0.0);
  std::vector<double> c(hidden, 0.0);
  std::vector<std::vector<double>> outputs;
  outputs.reserve(inputs.size());
  for (const auto& x : inputs) {
    CellOutput step = lstm_cell_forward(p, x, h, c);
    h = step.h;
    c = std::move(step.c);
    outputs.push_back(std::move(step.h));
    if (record) record->push_back(std::move(step.cache));
  }
  return outputs;
}

double head(const ModelParams& m, std::span<const double> h_last) {
  double acc = m.dense_b;
  for (std::size_t j = 0; j < h_last.size(); ++j) acc += m.dense_w[j] * h_last[j];
  return acc;
}

// BPTT through one layer. dh_external[t] is the gradient arriving at h_t from
// above; returns the gradient w.r.t. each step's input when `want_dx`.
std::vector<std::vector<double>> backward_layer(const LstmLayerParams& p,
                                                const std::vector<CellCache>& steps,
                                                const std::vector<std::vector<double>>& dh_external,
                                                LstmLayerParams& grad, bool want_dx) {
  const std::size_t hidden = p.hidden_dim;
  const std::size_t T = steps.size();
  std::vector<std::vector<double>> dx(want_dx ? T : 0);
  std::vector<double> dh_next(hidden, 0.0);
  std::vector<double> dc_next(hidden, 0.0);
  std::vector<double> dz(kGateCount * hidden);

  const std::size_t oi = gate_offset(Gate::input, hidden);
  const std::size_t of = gate_offset(Gate::forget, hidden);
  const std::size_t og = gate_offset(Gate::candidate, hidden);
  const std::size_t oo = gate_offset(Gate::output, hidden);

  for (std::size_t t = T; t-- > 0;) {
    const CellCache& s = steps[t];
    for (std::size_t j = 0; j < hidden; ++j) {
      const double i = s.gates[oi + j];
      const double f = s.gates[of + j];
      const double g = s.gates[og + j];
      const double o = s.gates[oo + j];
      const double tc = s.tanh_c[j];
      const double dh = dh_external[t][j] + dh_next[j];
      const double d_o = dh * tc;
      const double dc = dc_next[j] + dh * o * (1.0 - tc * tc);
      dz[oi + j] = dc * g * i * (1.0 - i);
      dz[of + j] = dc * s.c_prev[j] * f * (1.0 - f);
      dz[og + j] = dc * i * (1.0 - g * g);
      dz[oo + j] = d_o * o * (1.0 - o);
      dc_next[j] = dc * f;
    }
    outer_add(grad.w_x, dz, s.x);
    outer_add(grad.w_h, dz, s.h_prev);
    auto gb = grad.b.values();
    for (std::size_t k = 0; k < dz.size(); ++k) gb[k] += dz[k];

    if (want_dx) {
      dx[t].assign(p.input_dim, 0.0);
      matvec_transposed_add(p.w_x, dz, dx[t]);
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    matvec_transposed_add(p.w_h, dz, dh_next);
  }
  return dx;
}

}  // namespace

LstmLayerParams LstmLayerParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  if (input_dim == 0 || hidden_dim == 0) throw ConfigError("layer dimensions must be positive");
  return LstmLayerParams{input_dim, hidden_dim, Matrix(kGateCount * hidden_dim, input_dim),
                         Matrix(kGateCount * hidden_dim, hidden_dim),
                         Matrix(kGateCount * hidden_dim, 1)};
}

std::span<double> LstmLayerParams::bias_block(Gate gate) {
  return b.values().subspan(gate_offset(gate, hidden_dim), hidden_dim);
}

std::span<const double> LstmLayerParams::bias_block(Gate gate) const {
  return b.values().subspan(gate_offset(gate, hidden_dim), hidden_dim);
}

void LstmLayerParams::validate() const {
  const std::size_t g = kGateCount * hidden_dim;
  if (w_x.rows() != g || w_x.cols() != input_dim || w_h.rows() != g || w_h.cols() != hidden_dim ||
      b.rows() != g || b.cols() != 1) {
    throw ShapeError("LSTM layer " + std::to_string(input_dim) + "->" +
                     std::to_string(hidden_dim) + " has inconsistent matrix shapes");
  }
}

void check_widths(std::span<const std::size_t> widths) {
  if (widths.size() < 2) {
    throw ConfigError("layer widths need the input width and at least one LSTM layer");
  }
  if (widths.front() != 1) throw ConfigError("input width must be 1 (scalar load feature)");
  for (std::size_t w : widths) {
    if (w == 0) throw ConfigError("layer widths must be positive");
  }
}

std::size_t parameter_count(std::span<const std::size_t> widths) {
  check_widths(widths);
  std::size_t n = 0;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    const std::size_t in = widths[l - 1];
    const std::size_t h = widths[l];
    n += kGateCount * h * (in + h + 1);
  }
  return n + widths.back() + 1;
}

ModelParams ModelParams::zeros(std::span<const std::size_t> widths) {
  check_widths(widths);
  ModelParams m;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    m.lstm_layers.push_back(LstmLayerParams::zeros(widths[l - 1], widths[l]));
  }
  m.dense_w = Matrix(1, widths.back());
  return m;
}

std::vector<std::size_t> ModelParams::widths() const {
  std::vector<std::size_t> w;
  if (lstm_layers.empty()) return w;
  w.push_back(lstm_layers.front().input_dim);
  for (const auto& layer : lstm_layers) w.push_back(layer.hidden_dim);
  return w;
}

std::size_t ModelParams::parameter_count() const { return nn::parameter_count(widths()); }

bool ModelParams::all_finite() const {
  for (const auto& layer : lstm_layers) {
    if (!layer.w_x.all_finite() || !layer.w_h.all_finite() || !layer.b.all_finite()) return false;
  }
  return dense_w.all_finite() && std::isfinite(dense_b);
}

void ModelParams::validate() const {
  if (lstm_layers.empty()) throw ShapeError("model has no LSTM layers");
  if (lstm_layers.front().input_dim != 1) throw ShapeError("first layer input must be scalar");
  for (std::size_t l = 0; l < lstm_layers.size(); ++l) {
    lstm_layers[l].validate();
    if (l > 0 && lstm_layers[l].input_dim != lstm_layers[l - 1].hidden_dim) {
      throw ShapeError("layer " + std::to_string(l) + " input does not match previous width");
    }
  }
  if (dense_w.rows() != 1 || dense_w.cols() != lstm_layers.back().hidden_dim) {
    throw ShapeError("dense head does not match last layer width");
  }
}

std::vector<std::span<double>> ModelParams::blocks() {
  std::vector<std::span<double>> out;
  out.reserve(3 * lstm_layers.size() + 2);
  for (auto& layer : lstm_layers) {
    out.push_back(layer.w_x.values());
    out.push_back(layer.w_h.values());
    out.push_back(layer.b.values());
  }
  out.push_back(dense_w.values());
  out.push_back(std::span<double>(&dense_b, 1));
  return out;
}

std::vector<std::span<const double>> ModelParams::blocks() const {
  std::vector<std::span<const double>> out;
  out.reserve(3 * lstm_layers.size() + 2);
  for (const auto& layer : lstm_layers) {
    out.push_back(layer.w_x.values());
    out.push_back(layer.w_h.values());
    out.push_back(layer.b.values());
  }
  out.push_back(dense_w.values());
  out.push_back(std::span<const double>(&dense_b, 1));
  return out;
}

ModelParams init_params(std::span<const std::size_t> widths, std::uint64_t seed) {
  ModelParams m = ModelParams::zeros(widths);
  std::mt19937_64 rng(seed);
  for (auto& layer : m.lstm_layers) {
    fill_glorot(layer.w_x, rng);
    fill_glorot(layer.w_h, rng);
    auto forget = layer.bias_block(Gate::forget);
    std::fill(forget.begin(), forget.end(), 1.0);
  }
  fill_glorot(m.dense_w, rng);
  return m;
}

CellOutput lstm_cell_forward(const LstmLayerParams& p, std::span<const double> x,
                             std::span<const double> h_prev, std::span<const double> c_prev) {
  const std::size_t hidden = p.hidden_dim;
  if (x.size() != p.input_dim || h_prev.size() != hidden || c_prev.size() != hidden) {
    throw ShapeError("lstm_cell_forward: expected x of " + std::to_string(p.input_dim) +
                     " and state of " + std::to_string(hidden) + ", got " +
                     std::to_string(x.size()) + "/" + std::to_string(h_prev.size()) + "/" +
                     std::to_string(c_prev.size()));
  }
  CellOutput out;
  CellCache& cache = out.cache;
  cache.x.assign(x.begin(), x.end());
  cache.h_prev.assign(h_prev.begin(), h_prev.end());
  cache.c_prev.assign(c_prev.begin(), c_prev.end());

  std::vector<double> z(kGateCount * hidden);
  std::vector<double> zh(kGateCount * hidden);
  matvec(p.w_x, x, z);
  matvec(p.w_h, h_prev, zh);
  const auto bias = p.b.values();
  for (std::size_t k = 0; k < z.size(); ++k) z[k] += zh[k] + bias[k];

  cache.gates.resize(z.size());
  const std::size_t oi = gate_offset(Gate::input, hidden);
  const std::size_t of = gate_offset(Gate::forget, hidden);
  const std::size_t og = gate_offset(Gate::candidate, hidden);
  const std::size_t oo = gate_offset(Gate::output, hidden);
  out.c.resize(hidden);
  out.h.resize(hidden);
  cache.tanh_c.resize(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    const double i = sigmoid(z[oi + j]);
    const double f = sigmoid(z[of + j]);
    const double g = std::tanh(z[og + j]);
    const double o = sigmoid(z[oo + j]);
    cache.gates[oi + j] = i;
    cache.gates[of + j] = f;
    cache.gates[og + j] = g;
    cache.gates[oo + j] = o;
    const double c = f * c_prev[j] + i * g;
    const double tc = std::tanh(c);
    out.c[j] = c;
    cache.tanh_c[j] = tc;
    out.h[j] = o * tc;
  }
  cache.c = out.c;
  return out;
}

ForwardResult model_forward(const ModelParams& m, std::span<const double> window,
                            std::size_t look_back) {
  if (window.size() != look_back) {
    throw ShapeError("window has " + std::to_string(window.size()) + " values, expected " +
                     std::to_string(look_back));
  }
  if (window.empty()) throw ShapeError("window must not be empty");
  ForwardResult result;
  result.cache.widths = m.widths();
  result.cache.steps.resize(m.lstm_layers.size());

  std::vector<std::vector<double>> seq;
  seq.reserve(window.size());
  for (double v : window) seq.push_back({v});
  for (std::size_t l = 0; l < m.lstm_layers.size(); ++l) {
    result.cache.steps[l].reserve(window.size());
    seq = run_layer(m.lstm_layers[l], seq, &result.cache.steps[l]);
  }
  result.prediction = head(m, seq.back());
  return result;
}

double predict(const ModelParams& m, std::span<const double> window) {
  if (window.empty()) throw ShapeError("window must not be empty");
  std::vector<std::vector<double>> seq;
  seq.reserve(window.size());
  for (double v : window) seq.push_back({v});
  for (const auto& layer : m.lstm_layers) seq = run_layer(layer, seq, nullptr);
  return head(m, seq.back());
}

Loss mse_loss(double pred, double target) {
  const double diff = pred - target;
  return {diff * diff, 2.0 * diff};
}

void accumulate_backward(const ModelParams& m, const ForwardCache& cache, double dloss_dpred,
                         Gradients& into) {
  if (cache.steps.empty() || cache.steps.front().empty()) {
    throw UsageError("model_backward: cache is empty; run model_forward first");
  }
  if (cache.widths != m.widths() || cache.steps.size() != m.lstm_layers.size()) {
    throw UsageError("model_backward: cache was produced by a model with different widths");
  }
  if (into.values.widths() != m.widths()) {
    throw ShapeError("model_backward: gradient tree does not match model");
  }
  const std::size_t T = cache.steps.front().size();
  for (const auto& layer_steps : cache.steps) {
    if (layer_steps.size() != T) throw UsageError("model_backward: ragged cache");
  }

  const CellCache& last = cache.steps.back().back();
  const std::size_t top_hidden = m.lstm_layers.back().hidden_dim;
  std::vector<double> h_last(top_hidden);
  for (std::size_t j = 0; j < top_hidden; ++j) {
    h_last[j] = last.gates[gate_offset(Gate::output, top_hidden) + j] * last.tanh_c[j];
  }
  const double dpred = dloss_dpred;
  for (std::size_t j = 0; j < top_hidden; ++j) into.values.dense_w[j] += dpred * h_last[j];
  into.values.dense_b += dpred;

  std::vector<std::vector<double>> dh(T, std::vector<double>(top_hidden, 0.0));
  for (std::size_t j = 0; j < top_hidden; ++j) dh[T - 1][j] = m.dense_w[j] * dpred;

  for (std::size_t l = m.lstm_layers.size(); l-- > 0;) {
    dh = backward_layer(m.lstm_layers[l], cache.steps[l], dh, into.values.lstm_layers[l], l > 0);
  }
}

Gradients model_backward(const ModelParams& m, const ForwardCache& cache, double dloss_dpred) {
  Gradients g = Gradients::zeros_like(m);
  accumulate_backward(m, cache, dloss_dpred, g);
  return g;
}

std::vector<double> flatten(const ModelParams& m) {
  std::vector<double> flat;
  flat.reserve(m.parameter_count());
  for (auto block : m.blocks()) flat.insert(flat.end(), block.begin(), block.end());
  return flat;
}

ModelParams unflatten(std::span<const double> flat, std::span<const std::size_t> widths) {
  ModelParams m = ModelParams::zeros(widths);
  const std::size_t expected = m.parameter_count();
  if (flat.size() != expected) {
    throw ShapeError("unflatten: vector has " + std::to_string(flat.size()) +
                     " values, widths require " + std::to_string(expected));
  }
  std::size_t pos = 0;
  for (auto block : m.blocks()) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), block.size(), block.begin());
    pos += block.size();
  }
  return m;
}

}  // namespace fedstlf::nn
