#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wdp/graph.hpp"
#include "wdp/kernels.hpp"

namespace wdp {

/// Affine layer, weights stored row-major (out x in).
struct Dense {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  Dense() = default;
  Dense(std::size_t in_dim, std::size_t out_dim)
      : in(in_dim), out(out_dim), weights(in_dim * out_dim, 0.0), bias(out_dim, 0.0) {}
  bool operator==(const Dense&) const = default;
};

/// affine -> ReLU -> affine
struct Mlp2 {
  Dense hidden;
  Dense output;

  Mlp2() = default;
  Mlp2(std::size_t in, std::size_t width, std::size_t out) : hidden(in, width), output(width, out) {}
  bool operator==(const Mlp2&) const = default;
};

/// Half-convolution GNN over the bid-item graph. Every network has hidden width q.
///   embed_*      raw features -> q
///   item_message [x_bid, x_item, x_edge] (3q) -> q, summed per item
///   item_output  [x_item, h_item] (2q) -> q
///   bid_message  [o_item, x_bid, x_edge] (3q) -> q, summed per bid
///   bid_output   [x_bid, h_bid] (2q) -> q
///   score        q -> 1, then softmax over all bids of the graph
struct GnnModel {
  std::size_t q = 16;
  Mlp2 embed_bid;
  Mlp2 embed_item;
  Mlp2 embed_edge;
  Mlp2 item_message;
  Mlp2 item_output;
  Mlp2 bid_message;
  Mlp2 bid_output;
  Mlp2 score;

  /// All-zero model with the shapes implied by q.
  static GnnModel zeros(std::size_t q);
  bool operator==(const GnnModel&) const = default;
};

/// Visits every layer in a fixed order with its serialized name ("embed_bid.0", ...).
void for_each_layer(GnnModel& model, const std::function<void(const std::string&, Dense&)>& fn);
void for_each_layer(const GnnModel& model,
                    const std::function<void(const std::string&, const Dense&)>& fn);
std::size_t parameter_count(const GnnModel& model);
bool all_finite(const GnnModel& model);

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
GnnModel init_model(std::size_t q, std::uint64_t seed);

/// Per-bid probabilities (softmax over the graph's bids). The graph must be normalized
/// and contain at least one bid; ContractError otherwise.
std::vector<double> forward(const GnnModel& model, const BidItemGraph& graph,
                            ExecPolicy policy = ExecPolicy::parallel);
/// Pre-softmax scores.
std::vector<double> logits(const GnnModel& model, const BidItemGraph& graph,
                           ExecPolicy policy = ExecPolicy::parallel);

struct LossAndGradients {
  double loss = 0.0;
  GnnModel gradients;
};

/// Cross entropy -log p[label] and its exact gradient with respect to every parameter.
LossAndGradients loss_and_gradients(const GnnModel& model, const BidItemGraph& graph,
                                    std::size_t label_index,
                                    ExecPolicy policy = ExecPolicy::parallel);
double loss(const GnnModel& model, const BidItemGraph& graph, std::size_t label_index,
            ExecPolicy policy = ExecPolicy::parallel);

/// A normalized graph with its single positive bid.
struct LabeledGraph {
  BidItemGraph graph;
  std::size_t label = 0;
};

enum class Optimizer { sgd, adam };

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  Optimizer optimizer = Optimizer::adam;
  std::uint64_t seed = 0;
  /// Early stopping on mean validation loss; only used when a validation set is given.
  std::size_t patience = 20;
  ExecPolicy policy = ExecPolicy::parallel;
  /// Called after every epoch with (epoch, train loss, validation loss or NaN).
  std::function<void(std::size_t, double, double)> on_epoch;
};

struct TrainResult {
  GnnModel model;
  std::vector<double> train_loss;       // mean per epoch
  std::vector<double> validation_loss;  // mean per epoch, empty without validation
  std::size_t best_epoch = 0;
  bool early_stopped = false;
};

/// Minibatch training on shuffled samples, gradients averaged per batch. With a
/// validation set the returned model is the one with the lowest validation loss.
/// Throws DivergenceError on a non-finite loss, ContractError on an empty dataset.
TrainResult train(GnnModel model, std::span<const LabeledGraph> dataset, const TrainConfig& cfg,
                  std::span<const LabeledGraph> validation = {});

double mean_loss(const GnnModel& model, std::span<const LabeledGraph> dataset,
                 ExecPolicy policy = ExecPolicy::parallel);

inline constexpr int kModelVersion = 1;

/// { "version": 1, "q": int, "layers": [{"name","rows","cols","weights","bias"}] }
std::string save_model(const GnnModel& model);
/// Throws FormatError on parse failure, wrong version, or inconsistent layer shapes.
GnnModel load_model(std::string_view blob);

void save_model_file(const std::string& path, const GnnModel& model);
GnnModel load_model_file(const std::string& path);

}  // namespace wdp
