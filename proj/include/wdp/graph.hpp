#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "wdp/core.hpp"

namespace wdp {

struct GraphEdge {
  std::size_t bid = 0;   // bid node position
  std::size_t item = 0;  // item node position
  double feature = 0.0;  // requested units
};

/// Augmented bid-item graph. Bid node features are [price, total requested units],
/// item node features [remaining units, degree], edge feature [requested units].
/// `state` is the residual auction the graph encodes; `bid_ids`/`item_ids` map node
/// positions back to the original instance.
struct BidItemGraph {
  AuctionInstance state;
  std::vector<std::size_t> bid_ids;
  std::vector<std::size_t> item_ids;

  std::vector<std::array<double, 2>> bid_features;
  std::vector<std::array<double, 2>> item_features;
  std::vector<GraphEdge> edges;  // sorted by (bid, item)
  bool normalized = false;

  std::size_t num_bids() const { return bid_features.size(); }
  std::size_t num_items() const { return item_features.size(); }
  std::size_t num_edges() const { return edges.size(); }
};

BidItemGraph build_graph(const AuctionInstance& instance);

/// Per-graph standardization of every feature column; columns with standard deviation
/// below 1e-12 become zero.
BidItemGraph normalize_features(const BidItemGraph& graph);

struct ResidualResult {
  BidItemGraph graph;
  std::vector<std::size_t> conflicting;  // original bid ids removed as unsatisfiable
  std::vector<std::size_t> removed_items;  // original item ids that ran out of units
};

/// Deducts the accepted bids (original ids), drops accepted and rejected bids, then
/// drops bids that no longer fit and items with no units left. Features are recomputed
/// on the survivors. Throws ContractError if the accepted set does not fit.
ResidualResult residual_graph(const BidItemGraph& graph, std::span<const std::size_t> accepted,
                              std::span<const std::size_t> rejected);

}  // namespace wdp
