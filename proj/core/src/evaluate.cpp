#include "fedstlf/evaluate.hpp"

#include <algorithm>

#include "fedstlf/error.hpp"

namespace fedstlf::fed {
namespace {

const Matrix& split_x(const data::ClientDataset& c, bool use_test) {
  return use_test ? c.test_x : c.train_x;
}

const std::vector<double>& split_y(const data::ClientDataset& c, bool use_test) {
  return use_test ? c.test_y : c.train_y;
}

}  // namespace

Predictor model_predictor(const nn::ModelParams& m) {
  return [m](std::span<const double> window) { return nn::predict(m, window); };
}

std::vector<double> predict_kw(const Predictor& predictor, const data::ClientDataset& client,
                               bool use_test) {
  const Matrix& x = split_x(client, use_test);
  const std::size_t n = split_y(client, use_test).size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::max(0.0, client.scaler.inverse(predictor(x.row(i))));
  }
  return out;
}

std::vector<double> actual_kw(const data::ClientDataset& client, bool use_test) {
  return data::minmax_inverse(client.scaler, split_y(client, use_test));
}

EvaluationSummary summarize_clients(std::vector<ClientMetrics> clients) {
  if (clients.empty()) throw InsufficientDataError("evaluation set is empty");
  std::vector<double> r;
  std::vector<double> p;
  for (const auto& c : clients) {
    r.push_back(c.rmse);
    p.push_back(c.mape);
  }
  EvaluationSummary s;
  s.rmse = metrics::summarize(r);
  s.mape = metrics::summarize(p);
  s.clients = std::move(clients);
  return s;
}

EvaluationSummary evaluate_predictor(const Predictor& predictor,
                                     std::span<const data::ClientDataset* const> clients,
                                     bool use_test) {
  std::vector<ClientMetrics> rows;
  rows.reserve(clients.size());
  for (const auto* c : clients) {
    if (split_y(*c, use_test).empty()) {
      throw InsufficientDataError("client " + c->client_id + " has no evaluation windows");
    }
    const auto actual = actual_kw(*c, use_test);
    const auto predicted = predict_kw(predictor, *c, use_test);
    rows.push_back({c->client_id, metrics::rmse(actual, predicted),
                    metrics::mape(actual, predicted)});
  }
  return summarize_clients(std::move(rows));
}

EvaluationSummary evaluate_global(const nn::ModelParams& m,
                                  std::span<const data::ClientDataset* const> clients,
                                  bool use_test) {
  return evaluate_predictor(model_predictor(m), clients, use_test);
}

EvaluationSummary evaluate_global(const nn::ModelParams& m,
                                  std::span<const data::ClientDataset> clients, bool use_test) {
  std::vector<const data::ClientDataset*> ptrs;
  ptrs.reserve(clients.size());
  for (const auto& c : clients) ptrs.push_back(&c);
  return evaluate_global(m, ptrs, use_test);
}

double train_mse(const nn::ModelParams& m, const data::ClientDataset& client) {
  if (client.train_y.empty()) throw InsufficientDataError("client has no training windows");
  double sum = 0.0;
  for (std::size_t i = 0; i < client.train_y.size(); ++i) {
    sum += nn::mse_loss(nn::predict(m, client.train_x.row(i)), client.train_y[i]).value;
  }
  return sum / static_cast<double>(client.train_y.size());
}

}  // namespace fedstlf::fed
