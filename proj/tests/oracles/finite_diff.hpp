#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wdp/gnn.hpp"
#include "wdp/rng.hpp"

namespace wdp::testing {

/// Central differences of `f` with respect to every weight and bias, keyed by tensor
/// name ("<layer>.weights" / "<layer>.bias").
inline std::map<std::string, std::vector<double>> numeric_gradients(
    GnnModel model, const std::function<double(const GnnModel&)>& f, double step = 1e-5) {
  std::map<std::string, std::vector<double>> out;
  std::vector<std::pair<std::string, std::vector<double>*>> tensors;
  for_each_layer(model, [&](const std::string& name, Dense& d) {
    tensors.emplace_back(name + ".weights", &d.weights);
    tensors.emplace_back(name + ".bias", &d.bias);
  });
  for (auto& [name, values] : tensors) {
    auto& g = out[name];
    g.resize(values->size());
    for (std::size_t i = 0; i < values->size(); ++i) {
      const double keep = (*values)[i];
      (*values)[i] = keep + step;
      const double up = f(model);
      (*values)[i] = keep - step;
      const double down = f(model);
      (*values)[i] = keep;
      g[i] = (up - down) / (2.0 * step);
    }
  }
  return out;
}

inline std::map<std::string, std::vector<double>> tensors_of(const GnnModel& model) {
  std::map<std::string, std::vector<double>> out;
  for_each_layer(model, [&](const std::string& name, const Dense& d) {
    out[name + ".weights"] = d.weights;
    out[name + ".bias"] = d.bias;
  });
  return out;
}

/// ||a - b|| / max(||a||, ||b||, 1e-6). The floor matters for tensors whose true gradient
/// is zero (a bias shared by every bid's score cancels in the softmax); there both sides
/// are rounding noise around 1e-11.
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-6});
}

/// Worst per-tensor relative error between analytic and numeric gradients.
inline double worst_gradient_error(const GnnModel& model, const BidItemGraph& graph,
                                   std::size_t label, std::string* worst_name = nullptr) {
  const auto analytic = tensors_of(loss_and_gradients(model, graph, label, ExecPolicy::serial).gradients);
  const auto numeric = numeric_gradients(
      model, [&](const GnnModel& m) { return loss(m, graph, label, ExecPolicy::serial); });
  double worst = 0.0;
  for (const auto& [name, g] : analytic) {
    const double e = relative_error(g, numeric.at(name));
    if (e > worst) {
      worst = e;
      if (worst_name) *worst_name = name;
    }
  }
  return worst;
}

/// Model with random biases too, so no hidden unit sits exactly on a ReLU kink.
inline GnnModel random_model(std::size_t q, std::uint64_t seed) {
  GnnModel m = init_model(q, seed);
  Rng rng(seed ^ 0xabcdefULL);
  for_each_layer(m, [&](const std::string&, Dense& d) {
    for (double& b : d.bias) b = 0.2 * (2.0 * rng.uniform() - 1.0);
  });
  return m;
}

}  // namespace wdp::testing
