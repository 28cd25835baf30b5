#include "wdp/exact.hpp"

#include <algorithm>
#include <string>

#include "wdp/errors.hpp"
#include "wdp/heuristics.hpp"
#include "wdp/lp.hpp"

namespace wdp {

namespace {

using Clock = std::chrono::steady_clock;

// Include-first DFS visits feasible allocations in decreasing lexicographic order of
// the decision vector, so keeping the first strict improvement implements the tie-break.
class Enumerator {
 public:
  explicit Enumerator(const AuctionInstance& inst)
      : inst_(inst), current_(inst.num_bids()), remaining_(inst.capacities()) {}

  void run() { visit(0, 0.0); }

  Allocation best;
  double best_revenue = -1.0;
  std::size_t visited = 0;

 private:
  void visit(std::size_t m, double revenue) {
    if (m == inst_.num_bids()) {
      ++visited;
      if (revenue > best_revenue + kRevenueTol) {
        best_revenue = revenue;
        best = current_;
      }
      return;
    }
    const auto& demand = inst_.bids[m].demand;
    if (fits(demand, remaining_)) {
      deduct(demand, remaining_);
      current_.decisions[m] = 1;
      visit(m + 1, revenue + inst_.bids[m].price);
      current_.decisions[m] = 0;
      for (std::size_t n = 0; n < demand.size(); ++n) remaining_[n] += demand[n];
    }
    visit(m + 1, revenue);
  }

  const AuctionInstance& inst_;
  Allocation current_;
  std::vector<int> remaining_;
};

class BranchAndBound {
 public:
  BranchAndBound(const AuctionInstance& inst, const BranchAndBoundOptions& opt)
      : inst_(inst),
        opt_(opt),
        order_(density_order(inst)),
        current_(inst.num_bids()),
        remaining_(inst.capacities()),
        start_(Clock::now()) {}

  ExactResult solve() {
    incumbent_ = greedy_density(inst_);
    incumbent_revenue_ = evaluate_allocation(inst_, incumbent_).revenue;
    ExactResult result;
    if (opt_.time_limit.count() > 0.0) {
      visit(0, 0.0, kInf);
      result.proven_optimal = !timed_out_;
    }
    result.allocation = incumbent_;
    // Re-summed in bid order so equal allocations report bit-identical revenue.
    result.revenue = evaluate_allocation(inst_, incumbent_).revenue;
    result.nodes_explored = nodes_;
    result.elapsed = Clock::now() - start_;
    return result;
  }

 private:
  bool out_of_time() {
    if (timed_out_) return true;
    if ((nodes_ & 63) == 0 && Clock::now() - start_ >= opt_.time_limit) timed_out_ = true;
    return timed_out_;
  }

  void visit(std::size_t depth, double revenue, double parent_bound) {
    if (out_of_time()) return;
    ++nodes_;
    if (revenue > incumbent_revenue_ + kRevenueTol) {
      incumbent_revenue_ = revenue;
      incumbent_ = current_;
    }
    // Bids that no longer fit are forced to zero; skip straight to the next one that fits.
    while (depth < order_.size() && !fits(inst_.bids[order_[depth]].demand, remaining_)) ++depth;
    if (depth == order_.size()) return;

    candidates_.clear();
    double trivial = revenue;
    for (std::size_t k = depth; k < order_.size(); ++k) {
      const std::size_t m = order_[k];
      if (!fits(inst_.bids[m].demand, remaining_)) continue;
      candidates_.push_back(m);
      trivial += inst_.bids[m].price;
    }
    double bound = trivial;
    if (opt_.bound == BoundKind::lp) {
      const std::size_t stride = std::max<std::size_t>(1, opt_.lp_stride);
      if (depth % stride == 0) {
        const LpSolution lp = solve_lp_relaxation(inst_, candidates_, remaining_);
        if (lp.status == LpStatus::optimal) bound = std::min(bound, revenue + lp.objective);
      } else {
        bound = std::min(bound, parent_bound);
      }
    }
    if (bound <= incumbent_revenue_ + kRevenueTol) return;

    const std::size_t m = order_[depth];
    const auto& demand = inst_.bids[m].demand;
    deduct(demand, remaining_);
    current_.decisions[m] = 1;
    visit(depth + 1, revenue + inst_.bids[m].price, bound);
    current_.decisions[m] = 0;
    for (std::size_t n = 0; n < demand.size(); ++n) remaining_[n] += demand[n];
    visit(depth + 1, revenue, bound);
  }

  const AuctionInstance& inst_;
  BranchAndBoundOptions opt_;
  std::vector<std::size_t> order_;
  Allocation current_;
  std::vector<int> remaining_;
  std::vector<std::size_t> candidates_;
  Allocation incumbent_;
  double incumbent_revenue_ = 0.0;
  std::size_t nodes_ = 0;
  bool timed_out_ = false;
  Clock::time_point start_;
};

}  // namespace

ExactResult brute_force(const AuctionInstance& instance) {
  if (instance.num_bids() > kBruteForceMaxBids)
    throw SizeGuardError("brute force limited to " + std::to_string(kBruteForceMaxBids) +
                         " bids, got " + std::to_string(instance.num_bids()));
  const auto start = Clock::now();
  Enumerator e(instance);
  e.run();
  ExactResult r;
  r.allocation = e.best;
  r.revenue = evaluate_allocation(instance, e.best).revenue;
  r.proven_optimal = true;
  r.nodes_explored = e.visited;
  r.elapsed = Clock::now() - start;
  return r;
}

ExactResult branch_and_bound(const AuctionInstance& instance, const BranchAndBoundOptions& options) {
  return BranchAndBound(instance, options).solve();
}

ExactResult branch_and_bound(const AuctionInstance& instance,
                             std::chrono::duration<double> time_limit) {
  BranchAndBoundOptions opt;
  opt.time_limit = time_limit;
  return branch_and_bound(instance, opt);
}

}  // namespace wdp
