#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wdp/core.hpp"
#include "wdp/gnn.hpp"
#include "wdp/graph.hpp"

namespace wdp {

/// Per-bid scores for a normalized graph, in node order. A trained GNN is the usual
/// scorer; tests plug in fixed rankings.
using BidScorer = std::function<std::vector<double>(const BidItemGraph&)>;

BidScorer model_scorer(const GnnModel& model, ExecPolicy policy = ExecPolicy::parallel);

struct SolveIteration {
  std::vector<std::size_t> accepted;  // original bid indices
  std::vector<std::size_t> rejected;
};

struct SolveTrace {
  Allocation allocation;
  std::size_t gnn_calls = 0;
  std::vector<SolveIteration> iterations;
};

/// One acceptance per scorer call: the top-ranked unlabeled bid is accepted and every
/// bid it makes unsatisfiable is rejected. Ties go to the lower original index.
SolveTrace basic_solve(const BidScorer& scorer, const AuctionInstance& instance);
/// Same, starting from an already encoded (unnormalized) graph of the full instance.
SolveTrace basic_solve(const BidScorer& scorer, const BidItemGraph& initial);
SolveTrace basic_solve(const GnnModel& model, const AuctionInstance& instance,
                       ExecPolicy policy = ExecPolicy::parallel);

/// Per scorer call, walks the ranking accepting bids until one does not fit; that bid and
/// every later bid that no longer fits are rejected, the rest wait for the next call.
SolveTrace traversal_solve(const BidScorer& scorer, const AuctionInstance& instance);
SolveTrace traversal_solve(const BidScorer& scorer, const BidItemGraph& initial);
SolveTrace traversal_solve(const GnnModel& model, const AuctionInstance& instance,
                           ExecPolicy policy = ExecPolicy::parallel);

}  // namespace wdp
