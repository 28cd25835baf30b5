#pragma once

#include <chrono>
#include <cstddef>

#include "wdp/core.hpp"

namespace wdp {

struct ExactResult {
  Allocation allocation;
  double revenue = 0.0;
  bool proven_optimal = false;
  std::size_t nodes_explored = 0;
  std::chrono::duration<double, std::milli> elapsed{0};
};

inline constexpr std::size_t kBruteForceMaxBids = 25;

/// Exhaustive search over every feasible allocation. Equal-revenue (1e-9) ties go to
/// the allocation whose first differing decision is a 1, so lower-index winners are
/// preferred. Throws SizeGuardError when M > 25.
ExactResult brute_force(const AuctionInstance& instance);

enum class BoundKind {
  lp,       // LP relaxation on the residual subproblem
  trivial,  // sum of prices of the remaining bids that still fit
};

struct BranchAndBoundOptions {
  std::chrono::duration<double> time_limit{1800.0};
  BoundKind bound = BoundKind::lp;
  /// Solve the LP only at depths that are multiples of this stride; other nodes reuse
  /// the parent's bound.
  std::size_t lp_stride = 1;
};

/// Depth-first branch-and-bound over bids in density order, accept branch first,
/// seeded with the greedy incumbent. On time-limit expiry returns the incumbent with
/// proven_optimal = false.
ExactResult branch_and_bound(const AuctionInstance& instance, const BranchAndBoundOptions& options);
ExactResult branch_and_bound(const AuctionInstance& instance,
                             std::chrono::duration<double> time_limit);

}  // namespace wdp
