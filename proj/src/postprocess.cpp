#include "wdp/postprocess.hpp"

#include <algorithm>
#include <numeric>

#include "wdp/errors.hpp"

namespace wdp {

namespace {

// Node positions by score desc, original index asc.
std::vector<std::size_t> ranking(const BidScorer& scorer, const BidItemGraph& graph) {
  const auto scores = scorer(normalize_features(graph));
  if (scores.size() != graph.num_bids()) throw DimensionError("scorer returned wrong length");
  std::vector<std::size_t> order(graph.num_bids());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return graph.bid_ids[a] < graph.bid_ids[b];
  });
  return order;
}

// Applies one iteration's labels and records them. Returns the next residual graph.
BidItemGraph advance(const BidItemGraph& graph, std::vector<std::size_t> accepted,
                     std::vector<std::size_t> rejected, SolveTrace& trace) {
  auto residual = residual_graph(graph, accepted, rejected);
  for (std::size_t id : accepted) trace.allocation.decisions[id] = 1;
  rejected.insert(rejected.end(), residual.conflicting.begin(), residual.conflicting.end());
  // With no items left nothing can be satisfied; close out without another call.
  if (residual.graph.num_items() == 0) {
    rejected.insert(rejected.end(), residual.graph.bid_ids.begin(), residual.graph.bid_ids.end());
    residual.graph = residual_graph(residual.graph, {}, residual.graph.bid_ids).graph;
  }
  trace.iterations.push_back({std::move(accepted), std::move(rejected)});
  return std::move(residual.graph);
}

}  // namespace

BidScorer model_scorer(const GnnModel& model, ExecPolicy policy) {
  return [&model, policy](const BidItemGraph& g) { return forward(model, g, policy); };
}

SolveTrace basic_solve(const BidScorer& scorer, const AuctionInstance& instance) {
  return basic_solve(scorer, build_graph(instance));
}

SolveTrace basic_solve(const BidScorer& scorer, const BidItemGraph& initial) {
  SolveTrace trace;
  trace.allocation = Allocation(initial.num_bids());
  BidItemGraph graph = initial;
  if (graph.num_items() == 0 && graph.num_bids() > 0)
    graph = advance(graph, {}, {}, trace);
  while (graph.num_bids() > 0) {
    const auto order = ranking(scorer, graph);
    ++trace.gnn_calls;
    graph = advance(graph, {graph.bid_ids[order.front()]}, {}, trace);
  }
  return trace;
}

SolveTrace traversal_solve(const BidScorer& scorer, const AuctionInstance& instance) {
  return traversal_solve(scorer, build_graph(instance));
}

SolveTrace traversal_solve(const BidScorer& scorer, const BidItemGraph& initial) {
  SolveTrace trace;
  trace.allocation = Allocation(initial.num_bids());
  BidItemGraph graph = initial;
  if (graph.num_items() == 0 && graph.num_bids() > 0)
    graph = advance(graph, {}, {}, trace);
  while (graph.num_bids() > 0) {
    const auto order = ranking(scorer, graph);
    ++trace.gnn_calls;
    std::vector<int> remaining = graph.state.capacities();
    std::vector<std::size_t> accepted, rejected;
    bool blocked = false;
    for (std::size_t pos : order) {
      const auto& demand = graph.state.bids[pos].demand;
      const bool ok = fits(demand, remaining);
      if (!blocked && ok) {
        accepted.push_back(graph.bid_ids[pos]);
        deduct(demand, remaining);
      } else if (!ok) {
        blocked = true;
        rejected.push_back(graph.bid_ids[pos]);
      }
    }
    graph = advance(graph, std::move(accepted), std::move(rejected), trace);
  }
  return trace;
}

SolveTrace basic_solve(const GnnModel& model, const AuctionInstance& instance, ExecPolicy policy) {
  return basic_solve(model_scorer(model, policy), instance);
}

SolveTrace traversal_solve(const GnnModel& model, const AuctionInstance& instance,
                           ExecPolicy policy) {
  return traversal_solve(model_scorer(model, policy), instance);
}

}  // namespace wdp
