#include "fedstlf/optim.hpp"

#include <cmath>
#include <string>

#include "fedstlf/error.hpp"

namespace fedstlf::nn {
namespace {

void require_congruent(const ModelParams& a, const ModelParams& b, const char* what) {
  if (a.widths() != b.widths()) throw ShapeError(std::string(what) + ": shape mismatch");
}

}  // namespace

AdamState AdamState::fresh(const ModelParams& params, AdamHyper hyper) {
  return AdamState{ModelParams::zeros(params.widths()), ModelParams::zeros(params.widths()), 0,
                   hyper};
}

void sgd_update(ModelParams& params, const Gradients& grad, double lr) {
  require_congruent(params, grad.values, "sgd_step");
  auto p_blocks = params.blocks();
  const auto g_blocks = grad.values.blocks();
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    auto p = p_blocks[b];
    auto g = g_blocks[b];
    for (std::size_t k = 0; k < p.size(); ++k) p[k] -= lr * g[k];
  }
  if (!params.all_finite()) throw NumericError("sgd_step produced a non-finite parameter");
}

void adam_update(ModelParams& params, const Gradients& grad, AdamState& state, double lr) {
  require_congruent(params, grad.values, "adam_step");
  require_congruent(params, state.m, "adam_step");
  require_congruent(params, state.v, "adam_step");
  state.t += 1;
  const auto& h = state.hyper;
  const double t = static_cast<double>(state.t);
  const double m_corr = 1.0 - std::pow(h.beta1, t);
  const double v_corr = 1.0 - std::pow(h.beta2, t);

  auto p_blocks = params.blocks();
  const auto g_blocks = grad.values.blocks();
  auto m_blocks = state.m.blocks();
  auto v_blocks = state.v.blocks();
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    auto p = p_blocks[b];
    auto g = g_blocks[b];
    auto m = m_blocks[b];
    auto v = v_blocks[b];
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = h.beta1 * m[k] + (1.0 - h.beta1) * g[k];
      v[k] = h.beta2 * v[k] + (1.0 - h.beta2) * g[k] * g[k];
      const double m_hat = m[k] / m_corr;
      const double v_hat = v[k] / v_corr;
      p[k] -= lr * m_hat / (std::sqrt(v_hat) + h.epsilon);
    }
  }
  if (!params.all_finite()) throw NumericError("adam_step produced a non-finite parameter");
}

ModelParams sgd_step(const ModelParams& params, const Gradients& grad, double lr) {
  ModelParams next = params;
  sgd_update(next, grad, lr);
  return next;
}

AdamResult adam_step(const ModelParams& params, const Gradients& grad, const AdamState& state,
                     double lr) {
  AdamResult r{params, state};
  adam_update(r.params, grad, r.state, lr);
  return r;
}

}  // namespace fedstlf::nn
