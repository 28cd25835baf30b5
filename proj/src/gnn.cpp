#include "wdp/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wdp/errors.hpp"
#include "wdp/rng.hpp"

namespace wdp {

namespace {

using kernels::ConstView;
using kernels::MutView;
using kernels::Segments;

struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  void resize(std::size_t r, std::size_t c) {
    rows = r;
    cols = c;
    data.assign(r * c, 0.0);
  }
  ConstView cview() const { return {data.data(), rows, cols}; }
  MutView view() { return {data.data(), rows, cols}; }
};

ConstView weight_view(const Dense& d) { return {d.weights.data(), d.out, d.in}; }
MutView weight_view(Dense& d) { return {d.weights.data(), d.out, d.in}; }

// Dispatches to the serial or OpenMP kernel family.
struct Ops {
  ExecPolicy policy;

  void affine(ConstView x, const Dense& d, MutView y) const {
    policy == ExecPolicy::serial ? kernels::serial::affine(x, weight_view(d), d.bias, y)
                                 : kernels::parallel::affine(x, weight_view(d), d.bias, y);
  }
  void grad_params(ConstView x, ConstView dy, Dense& g) const {
    policy == ExecPolicy::serial ? kernels::serial::affine_grad_params(x, dy, weight_view(g), g.bias)
                                 : kernels::parallel::affine_grad_params(x, dy, weight_view(g), g.bias);
  }
  void grad_input(ConstView dy, const Dense& d, MutView dx) const {
    policy == ExecPolicy::serial ? kernels::serial::affine_grad_input(dy, weight_view(d), dx)
                                 : kernels::parallel::affine_grad_input(dy, weight_view(d), dx);
  }
  void relu(MutView x) const {
    policy == ExecPolicy::serial ? kernels::serial::relu(x) : kernels::parallel::relu(x);
  }
  void relu_grad(ConstView pre, MutView dy) const {
    policy == ExecPolicy::serial ? kernels::serial::relu_grad(pre, dy)
                                 : kernels::parallel::relu_grad(pre, dy);
  }
  void gather(ConstView src, std::span<const std::size_t> index, MutView dst, std::size_t col) const {
    policy == ExecPolicy::serial ? kernels::serial::gather_rows(src, index, dst, col)
                                 : kernels::parallel::gather_rows(src, index, dst, col);
  }
  void segment_sum(ConstView src, std::size_t col, Segments seg, MutView dst, bool acc) const {
    policy == ExecPolicy::serial ? kernels::serial::segment_sum(src, col, seg, dst, acc)
                                 : kernels::parallel::segment_sum(src, col, seg, dst, acc);
  }
};

struct MlpCache {
  Mat input;
  Mat pre;  // hidden pre-activation
  Mat act;  // hidden after ReLU
  Mat out;
};

void mlp_forward(const Ops& ops, const Mlp2& net, MlpCache& c) {
  const std::size_t rows = c.input.rows;
  c.pre.resize(rows, net.hidden.out);
  ops.affine(c.input.cview(), net.hidden, c.pre.view());
  c.act = c.pre;
  ops.relu(c.act.view());
  c.out.resize(rows, net.output.out);
  ops.affine(c.act.cview(), net.output, c.out.view());
}

// Accumulates parameter gradients into `grad`; writes the input gradient when asked.
void mlp_backward(const Ops& ops, const Mlp2& net, const MlpCache& c, const Mat& d_out, Mlp2& grad,
                  Mat* d_input) {
  ops.grad_params(c.act.cview(), d_out.cview(), grad.output);
  Mat d_act;
  d_act.resize(c.input.rows, net.hidden.out);
  ops.grad_input(d_out.cview(), net.output, d_act.view());
  ops.relu_grad(c.pre.cview(), d_act.view());
  ops.grad_params(c.input.cview(), d_act.cview(), grad.hidden);
  if (d_input) {
    d_input->resize(c.input.rows, net.hidden.in);
    ops.grad_input(d_act.cview(), net.hidden, d_input->view());
  }
}

// Edge lists grouped by item and by bid, plus singleton groupings used to read a
// column block of a per-node matrix out onto edges.
struct Topology {
  std::vector<std::size_t> edge_bid;
  std::vector<std::size_t> edge_item;
  std::vector<std::size_t> edge_ids;
  std::vector<std::size_t> item_offset, item_edges;
  std::vector<std::size_t> bid_offset, bid_edges;
  std::vector<std::size_t> singleton_offset;
  std::vector<std::size_t> node_ids_bid, node_ids_item;
  std::vector<std::size_t> bid_singleton_offset, item_singleton_offset;

  explicit Topology(const BidItemGraph& g) {
    const std::size_t e = g.num_edges();
    edge_bid.resize(e);
    edge_item.resize(e);
    edge_ids.resize(e);
    for (std::size_t k = 0; k < e; ++k) {
      edge_bid[k] = g.edges[k].bid;
      edge_item[k] = g.edges[k].item;
      edge_ids[k] = k;
    }
    group(edge_item, g.num_items(), item_offset, item_edges);
    group(edge_bid, g.num_bids(), bid_offset, bid_edges);
    singleton_offset.resize(e + 1);
    std::iota(singleton_offset.begin(), singleton_offset.end(), 0);
    node_ids_bid.resize(g.num_bids());
    std::iota(node_ids_bid.begin(), node_ids_bid.end(), 0);
    node_ids_item.resize(g.num_items());
    std::iota(node_ids_item.begin(), node_ids_item.end(), 0);
    bid_singleton_offset.resize(g.num_bids() + 1);
    std::iota(bid_singleton_offset.begin(), bid_singleton_offset.end(), 0);
    item_singleton_offset.resize(g.num_items() + 1);
    std::iota(item_singleton_offset.begin(), item_singleton_offset.end(), 0);
  }

  static void group(const std::vector<std::size_t>& key, std::size_t groups,
                    std::vector<std::size_t>& offset, std::vector<std::size_t>& members) {
    offset.assign(groups + 1, 0);
    for (std::size_t k : key) ++offset[k + 1];
    for (std::size_t g = 0; g < groups; ++g) offset[g + 1] += offset[g];
    members.resize(key.size());
    std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
    for (std::size_t k = 0; k < key.size(); ++k) members[cursor[key[k]]++] = k;
  }

  Segments by_item() const { return {item_offset, item_edges}; }
  Segments by_bid() const { return {bid_offset, bid_edges}; }
  // Per-edge view of a bid-indexed / item-indexed matrix.
  Segments edge_to_bid() const { return {singleton_offset, edge_bid}; }
  Segments edge_to_item() const { return {singleton_offset, edge_item}; }
  Segments edge_identity() const { return {singleton_offset, edge_ids}; }
  Segments bid_identity() const { return {bid_singleton_offset, node_ids_bid}; }
  Segments item_identity() const { return {item_singleton_offset, node_ids_item}; }
};

struct Pass {
  explicit Pass(const BidItemGraph& g) : topo(g) {}

  Topology topo;
  MlpCache embed_bid, embed_item, embed_edge;
  MlpCache item_message, item_output, bid_message, bid_output, score;
  Mat item_sum, bid_sum;
  std::vector<double> logits;
};

void check_graph(const BidItemGraph& g) {
  if (!g.normalized) throw ContractError("GNN input graph must be normalized");
  if (g.num_bids() == 0) throw ContractError("GNN input graph has no bid nodes");
}

void run_forward(const GnnModel& model, const BidItemGraph& g, const Ops& ops, Pass& p) {
  check_graph(g);
  const std::size_t q = model.q;
  const std::size_t num_bids = g.num_bids();
  const std::size_t num_items = g.num_items();
  const std::size_t num_edges = g.num_edges();
  const Topology& t = p.topo;

  p.embed_bid.input.resize(num_bids, 2);
  for (std::size_t m = 0; m < num_bids; ++m)
    std::copy(g.bid_features[m].begin(), g.bid_features[m].end(), p.embed_bid.input.data.begin() + 2 * m);
  p.embed_item.input.resize(num_items, 2);
  for (std::size_t n = 0; n < num_items; ++n)
    std::copy(g.item_features[n].begin(), g.item_features[n].end(), p.embed_item.input.data.begin() + 2 * n);
  p.embed_edge.input.resize(num_edges, 1);
  for (std::size_t k = 0; k < num_edges; ++k) p.embed_edge.input.data[k] = g.edges[k].feature;
  mlp_forward(ops, model.embed_bid, p.embed_bid);
  mlp_forward(ops, model.embed_item, p.embed_item);
  mlp_forward(ops, model.embed_edge, p.embed_edge);
  const Mat& xb = p.embed_bid.out;
  const Mat& xi = p.embed_item.out;
  const Mat& xe = p.embed_edge.out;

  // Item side: h_item = sum over requesting bids of g([x_bid, x_item, x_edge]).
  p.item_message.input.resize(num_edges, 3 * q);
  ops.gather(xb.cview(), t.edge_bid, p.item_message.input.view(), 0);
  ops.gather(xi.cview(), t.edge_item, p.item_message.input.view(), q);
  ops.gather(xe.cview(), t.edge_ids, p.item_message.input.view(), 2 * q);
  mlp_forward(ops, model.item_message, p.item_message);
  p.item_sum.resize(num_items, q);
  ops.segment_sum(p.item_message.out.cview(), 0, t.by_item(), p.item_sum.view(), false);

  p.item_output.input.resize(num_items, 2 * q);
  ops.gather(xi.cview(), t.node_ids_item, p.item_output.input.view(), 0);
  ops.gather(p.item_sum.cview(), t.node_ids_item, p.item_output.input.view(), q);
  mlp_forward(ops, model.item_output, p.item_output);
  const Mat& oi = p.item_output.out;

  // Bid side: h_bid = sum over requested items of g([o_item, x_bid, x_edge]).
  p.bid_message.input.resize(num_edges, 3 * q);
  ops.gather(oi.cview(), t.edge_item, p.bid_message.input.view(), 0);
  ops.gather(xb.cview(), t.edge_bid, p.bid_message.input.view(), q);
  ops.gather(xe.cview(), t.edge_ids, p.bid_message.input.view(), 2 * q);
  mlp_forward(ops, model.bid_message, p.bid_message);
  p.bid_sum.resize(num_bids, q);
  ops.segment_sum(p.bid_message.out.cview(), 0, t.by_bid(), p.bid_sum.view(), false);

  p.bid_output.input.resize(num_bids, 2 * q);
  ops.gather(xb.cview(), t.node_ids_bid, p.bid_output.input.view(), 0);
  ops.gather(p.bid_sum.cview(), t.node_ids_bid, p.bid_output.input.view(), q);
  mlp_forward(ops, model.bid_output, p.bid_output);

  p.score.input = p.bid_output.out;
  mlp_forward(ops, model.score, p.score);
  p.logits = p.score.out.data;
}

std::vector<double> softmax(const std::vector<double>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - top);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

double cross_entropy(const std::vector<double>& z, std::size_t label) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - top);
  return -(z[label] - top - std::log(sum));
}

std::vector<Dense*> layers(GnnModel& m) {
  std::vector<Dense*> out;
  for (Mlp2* net : {&m.embed_bid, &m.embed_item, &m.embed_edge, &m.item_message, &m.item_output,
                    &m.bid_message, &m.bid_output, &m.score}) {
    out.push_back(&net->hidden);
    out.push_back(&net->output);
  }
  return out;
}

const char* const kNetworkNames[] = {"embed_bid",   "embed_item",  "embed_edge", "item_message",
                                     "item_output", "bid_message", "bid_output", "score"};

void add_into(GnnModel& acc, const GnnModel& g) {
  auto a = layers(acc);
  auto b = layers(const_cast<GnnModel&>(g));
  for (std::size_t l = 0; l < a.size(); ++l) {
    for (std::size_t i = 0; i < a[l]->weights.size(); ++i) a[l]->weights[i] += b[l]->weights[i];
    for (std::size_t i = 0; i < a[l]->bias.size(); ++i) a[l]->bias[i] += b[l]->bias[i];
  }
}

}  // namespace

GnnModel GnnModel::zeros(std::size_t q) {
  if (q < 1) throw ContractError("embedding width q must be >= 1");
  GnnModel m;
  m.q = q;
  m.embed_bid = Mlp2(2, q, q);
  m.embed_item = Mlp2(2, q, q);
  m.embed_edge = Mlp2(1, q, q);
  m.item_message = Mlp2(3 * q, q, q);
  m.item_output = Mlp2(2 * q, q, q);
  m.bid_message = Mlp2(3 * q, q, q);
  m.bid_output = Mlp2(2 * q, q, q);
  m.score = Mlp2(q, q, 1);
  return m;
}

void for_each_layer(GnnModel& model, const std::function<void(const std::string&, Dense&)>& fn) {
  auto ls = layers(model);
  for (std::size_t l = 0; l < ls.size(); ++l)
    fn(std::string(kNetworkNames[l / 2]) + "." + std::to_string(l % 2), *ls[l]);
}

void for_each_layer(const GnnModel& model,
                    const std::function<void(const std::string&, const Dense&)>& fn) {
  for_each_layer(const_cast<GnnModel&>(model),
                 [&](const std::string& name, Dense& d) { fn(name, d); });
}

std::size_t parameter_count(const GnnModel& model) {
  std::size_t total = 0;
  for_each_layer(model, [&](const std::string&, const Dense& d) {
    total += d.weights.size() + d.bias.size();
  });
  return total;
}

bool all_finite(const GnnModel& model) {
  bool ok = true;
  for_each_layer(model, [&](const std::string&, const Dense& d) {
    for (double w : d.weights) ok = ok && std::isfinite(w);
    for (double b : d.bias) ok = ok && std::isfinite(b);
  });
  return ok;
}

GnnModel init_model(std::size_t q, std::uint64_t seed) {
  GnnModel m = GnnModel::zeros(q);
  Rng rng(seed);
  for_each_layer(m, [&](const std::string&, Dense& d) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(d.in));
    for (double& w : d.weights) w = scale * (2.0 * rng.uniform() - 1.0);
  });
  return m;
}

std::vector<double> logits(const GnnModel& model, const BidItemGraph& graph, ExecPolicy policy) {
  Pass p(graph);
  run_forward(model, graph, Ops{policy}, p);
  return p.logits;
}

std::vector<double> forward(const GnnModel& model, const BidItemGraph& graph, ExecPolicy policy) {
  return softmax(logits(model, graph, policy));
}

double loss(const GnnModel& model, const BidItemGraph& graph, std::size_t label_index,
            ExecPolicy policy) {
  if (label_index >= graph.num_bids()) throw ContractError("label index out of range");
  return cross_entropy(logits(model, graph, policy), label_index);
}

LossAndGradients loss_and_gradients(const GnnModel& model, const BidItemGraph& graph,
                                    std::size_t label_index, ExecPolicy policy) {
  if (label_index >= graph.num_bids()) throw ContractError("label index out of range");
  const Ops ops{policy};
  Pass p(graph);
  run_forward(model, graph, ops, p);
  const Topology& t = p.topo;
  const std::size_t q = model.q;
  const std::size_t num_bids = graph.num_bids();
  const std::size_t num_items = graph.num_items();
  const std::size_t num_edges = graph.num_edges();

  LossAndGradients out;
  out.loss = cross_entropy(p.logits, label_index);
  GnnModel& g = out.gradients;
  g = GnnModel::zeros(q);

  // d loss / d logits = softmax - onehot
  Mat d_logit;
  d_logit.resize(num_bids, 1);
  d_logit.data = softmax(p.logits);
  d_logit.data[label_index] -= 1.0;

  Mat d_bid_out;
  mlp_backward(ops, model.score, p.score, d_logit, g.score, &d_bid_out);
  Mat d_bid_out_in;
  mlp_backward(ops, model.bid_output, p.bid_output, d_bid_out, g.bid_output, &d_bid_out_in);

  Mat d_xb, d_xi, d_xe;
  d_xb.resize(num_bids, q);
  ops.segment_sum(d_bid_out_in.cview(), 0, t.bid_identity(), d_xb.view(), false);
  Mat d_bid_msg;
  d_bid_msg.resize(num_edges, q);
  ops.segment_sum(d_bid_out_in.cview(), q, t.edge_to_bid(), d_bid_msg.view(), false);

  Mat d_bid_msg_in;
  mlp_backward(ops, model.bid_message, p.bid_message, d_bid_msg, g.bid_message, &d_bid_msg_in);
  Mat d_oi;
  d_oi.resize(num_items, q);
  ops.segment_sum(d_bid_msg_in.cview(), 0, t.by_item(), d_oi.view(), false);
  ops.segment_sum(d_bid_msg_in.cview(), q, t.by_bid(), d_xb.view(), true);
  d_xe.resize(num_edges, q);
  ops.segment_sum(d_bid_msg_in.cview(), 2 * q, t.edge_identity(), d_xe.view(), false);

  Mat d_item_out_in;
  mlp_backward(ops, model.item_output, p.item_output, d_oi, g.item_output, &d_item_out_in);
  d_xi.resize(num_items, q);
  ops.segment_sum(d_item_out_in.cview(), 0, t.item_identity(), d_xi.view(), false);
  Mat d_item_msg;
  d_item_msg.resize(num_edges, q);
  ops.segment_sum(d_item_out_in.cview(), q, t.edge_to_item(), d_item_msg.view(), false);

  Mat d_item_msg_in;
  mlp_backward(ops, model.item_message, p.item_message, d_item_msg, g.item_message, &d_item_msg_in);
  ops.segment_sum(d_item_msg_in.cview(), 0, t.by_bid(), d_xb.view(), true);
  ops.segment_sum(d_item_msg_in.cview(), q, t.by_item(), d_xi.view(), true);
  ops.segment_sum(d_item_msg_in.cview(), 2 * q, t.edge_identity(), d_xe.view(), true);

  mlp_backward(ops, model.embed_bid, p.embed_bid, d_xb, g.embed_bid, nullptr);
  mlp_backward(ops, model.embed_item, p.embed_item, d_xi, g.embed_item, nullptr);
  mlp_backward(ops, model.embed_edge, p.embed_edge, d_xe, g.embed_edge, nullptr);
  return out;
}

double mean_loss(const GnnModel& model, std::span<const LabeledGraph> dataset, ExecPolicy policy) {
  if (dataset.empty()) return 0.0;
  std::vector<double> losses(dataset.size());
  const auto count = static_cast<long>(dataset.size());
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      const auto& s = dataset[static_cast<std::size_t>(i)];
      losses[static_cast<std::size_t>(i)] = loss(model, s.graph, s.label, ExecPolicy::serial);
    }
  } else {
    for (long i = 0; i < count; ++i) {
      const auto& s = dataset[static_cast<std::size_t>(i)];
      losses[static_cast<std::size_t>(i)] = loss(model, s.graph, s.label, ExecPolicy::serial);
    }
  }
  return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
}

namespace {

class Updater {
 public:
  Updater(const GnnModel& shape, const TrainConfig& cfg)
      : cfg_(cfg), m_(GnnModel::zeros(shape.q)), v_(GnnModel::zeros(shape.q)) {}

  void apply(GnnModel& model, GnnModel& grad) {
    ++step_;
    auto params = layers(model);
    auto grads = layers(grad);
    auto ms = layers(m_);
    auto vs = layers(v_);
    const double lr = cfg_.learning_rate;
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
    auto update = [&](std::vector<double>& w, const std::vector<double>& gw, std::vector<double>& mw,
                      std::vector<double>& vw) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (cfg_.optimizer == Optimizer::sgd) {
          w[i] -= lr * gw[i];
          continue;
        }
        mw[i] = b1 * mw[i] + (1.0 - b1) * gw[i];
        vw[i] = b2 * vw[i] + (1.0 - b2) * gw[i] * gw[i];
        w[i] -= lr * (mw[i] / c1) / (std::sqrt(vw[i] / c2) + eps);
      }
    };
    for (std::size_t l = 0; l < params.size(); ++l) {
      update(params[l]->weights, grads[l]->weights, ms[l]->weights, vs[l]->weights);
      update(params[l]->bias, grads[l]->bias, ms[l]->bias, vs[l]->bias);
    }
  }

 private:
  const TrainConfig& cfg_;
  GnnModel m_;
  GnnModel v_;
  std::size_t step_ = 0;
};

void scale(GnnModel& g, double factor) {
  for (Dense* d : layers(g)) {
    for (double& w : d->weights) w *= factor;
    for (double& b : d->bias) b *= factor;
  }
}

}  // namespace

TrainResult train(GnnModel model, std::span<const LabeledGraph> dataset, const TrainConfig& cfg,
                  std::span<const LabeledGraph> validation) {
  if (dataset.empty()) throw ContractError("training set is empty");
  if (!(cfg.learning_rate > 0.0)) throw ContractError("learning rate must be positive");
  if (cfg.batch_size < 1) throw ContractError("batch size must be >= 1");
  for (const auto& s : dataset) {
    if (!s.graph.normalized || s.label >= s.graph.num_bids())
      throw ContractError("training sample must be a normalized graph with a valid label");
  }

  Rng rng(cfg.seed);
  Updater updater(model, cfg);
  TrainResult result;
  result.model = model;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<LossAndGradients> per_sample(cfg.batch_size);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, order.size() - start);
      const auto n = static_cast<long>(count);
      // One graph per task with serial kernels inside; the reduction below runs in
      // sample order so the result does not depend on the thread count.
#pragma omp parallel for schedule(dynamic) if (cfg.policy == ExecPolicy::parallel)
      for (long i = 0; i < n; ++i) {
        const auto& s = dataset[order[start + static_cast<std::size_t>(i)]];
        per_sample[static_cast<std::size_t>(i)] =
            loss_and_gradients(model, s.graph, s.label, ExecPolicy::serial);
      }
      GnnModel grad = GnnModel::zeros(model.q);
      for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(per_sample[i].loss))
          throw DivergenceError(epoch, "non-finite training loss in epoch " + std::to_string(epoch));
        epoch_loss += per_sample[i].loss;
        add_into(grad, per_sample[i].gradients);
      }
      scale(grad, 1.0 / static_cast<double>(count));
      updater.apply(model, grad);
    }
    epoch_loss /= static_cast<double>(dataset.size());
    result.train_loss.push_back(epoch_loss);

    double val = std::numeric_limits<double>::quiet_NaN();
    if (!validation.empty()) {
      val = mean_loss(model, validation, cfg.policy);
      if (!std::isfinite(val))
        throw DivergenceError(epoch, "non-finite validation loss in epoch " + std::to_string(epoch));
      result.validation_loss.push_back(val);
    }
    if (cfg.on_epoch) cfg.on_epoch(epoch, epoch_loss, val);

    if (validation.empty()) {
      result.model = model;
      result.best_epoch = epoch;
      continue;
    }
    if (val < best_val) {
      best_val = val;
      result.model = model;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      result.early_stopped = true;
      break;
    }
  }
  return result;
}

std::string save_model(const GnnModel& model) {
  nlohmann::json layers_json = nlohmann::json::array();
  for_each_layer(model, [&](const std::string& name, const Dense& d) {
    layers_json.push_back({{"name", name},
                           {"rows", d.out},
                           {"cols", d.in},
                           {"weights", d.weights},
                           {"bias", d.bias}});
  });
  const nlohmann::json j = {{"version", kModelVersion}, {"q", model.q}, {"layers", layers_json}};
  return j.dump();
}

GnnModel load_model(std::string_view blob) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(blob);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("model parse error: ") + e.what());
  }
  try {
    const int version = j.at("version").get<int>();
    if (version != kModelVersion)
      throw FormatError("unsupported model version " + std::to_string(version) + " (expected " +
                        std::to_string(kModelVersion) + ")");
    GnnModel model = GnnModel::zeros(j.at("q").get<std::size_t>());
    const auto& entries = j.at("layers");
    std::size_t filled = 0;
    for_each_layer(model, [&](const std::string& name, Dense& d) {
      const auto it = std::find_if(entries.begin(), entries.end(),
                                   [&](const nlohmann::json& e) { return e.at("name") == name; });
      if (it == entries.end()) throw FormatError("model is missing layer " + name);
      const auto rows = it->at("rows").get<std::size_t>();
      const auto cols = it->at("cols").get<std::size_t>();
      auto weights = it->at("weights").get<std::vector<double>>();
      auto bias = it->at("bias").get<std::vector<double>>();
      if (rows != d.out || cols != d.in || weights.size() != rows * cols || bias.size() != rows)
        throw FormatError("layer " + name + " has inconsistent shape");
      d.weights = std::move(weights);
      d.bias = std::move(bias);
      ++filled;
    });
    if (entries.size() != filled) throw FormatError("model has unexpected extra layers");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model structure error: ") + e.what());
  }
}

void save_model_file(const std::string& path, const GnnModel& model) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write model file " + path);
  out << save_model(model) << '\n';
}

GnnModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

}  // namespace wdp
