#pragma once

#include <cstddef>
#include <vector>

#include "wdp/core.hpp"
#include "wdp/rng.hpp"

namespace wdp {

/// Accepts bids in price-density order (ties: price desc, index asc) whenever they fit.
Allocation greedy_density(const AuctionInstance& instance);

/// Relaxed-LP rounding: sort bids by fractional LP value (desc, index asc), draw a
/// temporary label 1 with probability equal to that value, keep it if it still fits.
/// One draw is consumed per bid in sorted order.
Allocation rlp(const AuctionInstance& instance, Rng& rng);

/// Shadow-surplus scores p_m / sum_n dual_n * lambda_m^n; +inf when the dual-weighted
/// bundle cost is below 1e-12.
std::vector<double> shadow_surplus_scores(const AuctionInstance& instance,
                                          const std::vector<double>& duals);
/// Bid order for SS: score desc, price desc, index asc.
std::vector<std::size_t> shadow_surplus_order(const AuctionInstance& instance,
                                              const std::vector<double>& duals);
Allocation ss(const AuctionInstance& instance);

struct CasanovaParams {
  double walk_prob = 0.8;
  double novelty_prob = 0.5;
  std::size_t stagnation_steps = 5000;
  std::size_t restarts = 5;
  /// Steps per restart; 0 means 50*M.
  std::size_t step_cap = 0;
  /// Keep the best-so-far revenue after every step (tests, diagnostics).
  bool record_trace = false;
};

struct CasanovaResult {
  Allocation allocation;
  double revenue = 0.0;
  std::size_t steps = 0;
  /// Per restart, best-so-far revenue after each step (only with record_trace).
  std::vector<std::vector<double>> trace;
};

void validate_params(const CasanovaParams& params);

/// Stochastic local search. Each step adds one unallocated bid (random walk with
/// probability walk_prob, otherwise greedy by normalized price with the age/novelty
/// rule) and evicts accepted bids that no longer fit.
CasanovaResult casanova_search(const AuctionInstance& instance, const CasanovaParams& params,
                               Rng& rng);
Allocation casanova(const AuctionInstance& instance, const CasanovaParams& params, Rng& rng);

}  // namespace wdp
