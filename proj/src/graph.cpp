#include "wdp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "wdp/errors.hpp"

namespace wdp {

namespace {

BidItemGraph encode(AuctionInstance state, std::vector<std::size_t> bid_ids,
                    std::vector<std::size_t> item_ids) {
  BidItemGraph g;
  g.bid_features.resize(state.num_bids());
  g.item_features.resize(state.num_items());
  for (std::size_t n = 0; n < state.num_items(); ++n)
    g.item_features[n] = {static_cast<double>(state.items[n].units), 0.0};
  for (std::size_t m = 0; m < state.num_bids(); ++m) {
    const Bid& bid = state.bids[m];
    double total = 0.0;
    for (std::size_t n = 0; n < bid.demand.size(); ++n) {
      if (bid.demand[n] <= 0) continue;
      g.edges.push_back({m, n, static_cast<double>(bid.demand[n])});
      total += bid.demand[n];
      g.item_features[n][1] += 1.0;
    }
    g.bid_features[m] = {bid.price, total};
  }
  g.state = std::move(state);
  g.bid_ids = std::move(bid_ids);
  g.item_ids = std::move(item_ids);
  return g;
}

// Population mean/std standardization in place; near-constant columns are zeroed.
template <typename Get>
void standardize(std::size_t count, Get&& get) {
  if (count == 0) return;
  double mean = 0.0;
  for (std::size_t i = 0; i < count; ++i) mean += get(i);
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double d = get(i) - mean;
    var += d * d;
  }
  const double sd = std::sqrt(var / static_cast<double>(count));
  for (std::size_t i = 0; i < count; ++i) get(i) = sd < 1e-12 ? 0.0 : (get(i) - mean) / sd;
}

}  // namespace

BidItemGraph build_graph(const AuctionInstance& instance) {
  std::vector<std::size_t> bid_ids(instance.num_bids());
  std::vector<std::size_t> item_ids(instance.num_items());
  std::iota(bid_ids.begin(), bid_ids.end(), 0);
  std::iota(item_ids.begin(), item_ids.end(), 0);
  return encode(instance, std::move(bid_ids), std::move(item_ids));
}

BidItemGraph normalize_features(const BidItemGraph& graph) {
  BidItemGraph g = graph;
  for (std::size_t c = 0; c < 2; ++c) {
    standardize(g.num_bids(), [&](std::size_t i) -> double& { return g.bid_features[i][c]; });
    standardize(g.num_items(), [&](std::size_t i) -> double& { return g.item_features[i][c]; });
  }
  standardize(g.num_edges(), [&](std::size_t i) -> double& { return g.edges[i].feature; });
  g.normalized = true;
  return g;
}

ResidualResult residual_graph(const BidItemGraph& graph, std::span<const std::size_t> accepted,
                              std::span<const std::size_t> rejected) {
  std::unordered_map<std::size_t, std::size_t> position;
  for (std::size_t m = 0; m < graph.bid_ids.size(); ++m) position[graph.bid_ids[m]] = m;
  auto locate = [&](std::size_t id) {
    const auto it = position.find(id);
    if (it == position.end())
      throw ContractError("residual graph: bid " + std::to_string(id) + " is not in the graph");
    return it->second;
  };

  const AuctionInstance& state = graph.state;
  std::vector<int> remaining = state.capacities();
  std::vector<bool> drop(state.num_bids(), false);
  for (std::size_t id : accepted) {
    const std::size_t m = locate(id);
    deduct(state.bids[m].demand, remaining);
    drop[m] = true;
  }
  for (int r : remaining)
    if (r < 0) throw ContractError("residual graph: accepted bids exceed available units");
  for (std::size_t id : rejected) drop[locate(id)] = true;

  ResidualResult out;
  std::vector<std::size_t> keep_items;
  for (std::size_t n = 0; n < remaining.size(); ++n) {
    if (remaining[n] > 0) {
      keep_items.push_back(n);
    } else {
      out.removed_items.push_back(graph.item_ids[n]);
    }
  }

  AuctionInstance next;
  next.name = state.name;
  std::vector<std::size_t> item_ids;
  for (std::size_t n : keep_items) {
    next.items.push_back(Item{remaining[n]});
    item_ids.push_back(graph.item_ids[n]);
  }
  std::vector<std::size_t> bid_ids;
  for (std::size_t m = 0; m < state.num_bids(); ++m) {
    if (drop[m]) continue;
    const Bid& bid = state.bids[m];
    if (!fits(bid.demand, remaining)) {
      out.conflicting.push_back(graph.bid_ids[m]);
      continue;
    }
    Bid reduced;
    reduced.price = bid.price;
    reduced.demand.reserve(keep_items.size());
    for (std::size_t n : keep_items) reduced.demand.push_back(bid.demand[n]);
    next.bids.push_back(std::move(reduced));
    bid_ids.push_back(graph.bid_ids[m]);
  }
  out.graph = encode(std::move(next), std::move(bid_ids), std::move(item_ids));
  return out;
}

}  // namespace wdp
