#include "wdp/heuristics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "wdp/errors.hpp"
#include "wdp/lp.hpp"

namespace wdp {

namespace {

Allocation greedy_in_order(const AuctionInstance& instance, const std::vector<std::size_t>& order) {
  Allocation alloc(instance.num_bids());
  std::vector<int> remaining = instance.capacities();
  for (std::size_t m : order) {
    const auto& demand = instance.bids[m].demand;
    if (!fits(demand, remaining)) continue;
    deduct(demand, remaining);
    alloc.decisions[m] = 1;
  }
  return alloc;
}

LpSolution checked_relaxation(const AuctionInstance& instance) {
  LpSolution lp = solve_lp_relaxation(instance);
  if (lp.status != LpStatus::optimal)
    throw std::runtime_error("LP relaxation of '" + instance.name + "' ended with status " +
                             std::string(to_string(lp.status)));
  return lp;
}

}  // namespace

Allocation greedy_density(const AuctionInstance& instance) {
  return greedy_in_order(instance, density_order(instance));
}

Allocation rlp(const AuctionInstance& instance, Rng& rng) {
  const LpSolution lp = checked_relaxation(instance);
  std::vector<double> frac = lp.primal;
  for (double& a : frac) {
    if (a >= 1.0 - 1e-9) a = 1.0;
    if (a <= 1e-9) a = 0.0;
  }
  std::vector<std::size_t> order(instance.num_bids());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });

  Allocation alloc(instance.num_bids());
  std::vector<int> remaining = instance.capacities();
  for (std::size_t m : order) {
    const bool temp = rng.bernoulli(frac[m]);
    const auto& demand = instance.bids[m].demand;
    if (!temp || !fits(demand, remaining)) continue;
    deduct(demand, remaining);
    alloc.decisions[m] = 1;
  }
  return alloc;
}

std::vector<double> shadow_surplus_scores(const AuctionInstance& instance,
                                          const std::vector<double>& duals) {
  if (duals.size() != instance.num_items()) throw DimensionError("shadow surplus: dual length");
  std::vector<double> score(instance.num_bids());
  for (std::size_t m = 0; m < score.size(); ++m) {
    const Bid& bid = instance.bids[m];
    double cost = 0.0;
    for (std::size_t n = 0; n < duals.size(); ++n) cost += std::max(0.0, duals[n]) * bid.demand[n];
    score[m] = cost < 1e-12 ? std::numeric_limits<double>::infinity() : bid.price / cost;
  }
  return score;
}

std::vector<std::size_t> shadow_surplus_order(const AuctionInstance& instance,
                                              const std::vector<double>& duals) {
  const std::vector<double> score = shadow_surplus_scores(instance, duals);
  std::vector<std::size_t> order(instance.num_bids());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] > score[b];
    if (instance.bids[a].price != instance.bids[b].price)
      return instance.bids[a].price > instance.bids[b].price;
    return a < b;
  });
  return order;
}

Allocation ss(const AuctionInstance& instance) {
  const LpSolution lp = checked_relaxation(instance);
  return greedy_in_order(instance, shadow_surplus_order(instance, lp.duals));
}

void validate_params(const CasanovaParams& params) {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(params.walk_prob) || !prob(params.novelty_prob))
    throw ContractError("casanova: probabilities must lie in [0, 1]");
  if (params.restarts < 1) throw ContractError("casanova: at least one restart required");
}

namespace {

struct CasanovaRun {
  Allocation best;
  double best_revenue = 0.0;
  std::size_t steps = 0;
  std::vector<double> trace;
};

CasanovaRun casanova_restart(const AuctionInstance& instance, const CasanovaParams& params,
                             std::size_t step_cap, Rng rng) {
  const std::size_t num_bids = instance.num_bids();
  std::vector<double> density(num_bids);
  for (std::size_t m = 0; m < num_bids; ++m) density[m] = price_density(instance.bids[m]);

  Allocation current(num_bids);
  std::vector<int> remaining = instance.capacities();
  std::vector<std::size_t> last_added(num_bids, 0);
  double revenue = 0.0;

  CasanovaRun run;
  run.best = current;
  std::size_t last_improvement = 0;
  std::vector<std::size_t> unallocated;
  unallocated.reserve(num_bids);

  for (std::size_t step = 1; step <= step_cap; ++step) {
    unallocated.clear();
    for (std::size_t m = 0; m < num_bids; ++m)
      if (!current.accepted(m)) unallocated.push_back(m);
    if (unallocated.empty()) break;

    std::size_t pick;
    if (rng.bernoulli(params.walk_prob)) {
      pick = unallocated[rng.index(unallocated.size())];
    } else {
      // Top two unallocated bids by normalized price (ties: lower index).
      std::size_t first = unallocated[0];
      std::size_t second = num_bids;
      for (std::size_t k = 1; k < unallocated.size(); ++k) {
        const std::size_t m = unallocated[k];
        if (density[m] > density[first]) {
          second = first;
          first = m;
        } else if (second == num_bids || density[m] > density[second]) {
          second = m;
        }
      }
      if (second == num_bids) {
        pick = first;
      } else {
        const std::size_t age_first = step - last_added[first];
        const std::size_t age_second = step - last_added[second];
        if (age_first < age_second) {
          pick = first;
        } else {
          pick = rng.bernoulli(params.novelty_prob) ? first : second;
        }
      }
    }

    // Evict the cheapest (by normalized price) accepted bids on overloaded items until
    // the new bid fits.
    const auto& demand = instance.bids[pick].demand;
    while (!fits(demand, remaining)) {
      std::size_t victim = num_bids;
      for (std::size_t m = 0; m < num_bids; ++m) {
        if (!current.accepted(m)) continue;
        const auto& dm = instance.bids[m].demand;
        bool touches = false;
        for (std::size_t n = 0; n < dm.size() && !touches; ++n)
          touches = dm[n] > 0 && demand[n] > remaining[n];
        if (!touches) continue;
        if (victim == num_bids || density[m] <= density[victim]) victim = m;
      }
      const auto& dv = instance.bids[victim].demand;
      for (std::size_t n = 0; n < dv.size(); ++n) remaining[n] += dv[n];
      current.decisions[victim] = 0;
      revenue -= instance.bids[victim].price;
    }
    deduct(demand, remaining);
    current.decisions[pick] = 1;
    revenue += instance.bids[pick].price;
    last_added[pick] = step;
    run.steps = step;

    if (revenue > run.best_revenue + kRevenueTol) {
      run.best_revenue = revenue;
      run.best = current;
      last_improvement = step;
    }
    if (params.record_trace) run.trace.push_back(run.best_revenue);
    if (step - last_improvement >= params.stagnation_steps) break;
  }
  return run;
}

}  // namespace

CasanovaResult casanova_search(const AuctionInstance& instance, const CasanovaParams& params,
                               Rng& rng) {
  validate_params(params);
  const std::size_t step_cap = params.step_cap > 0 ? params.step_cap : 50 * instance.num_bids();
  const Rng base(rng.next_u64());
  std::vector<CasanovaRun> runs(params.restarts);
  const auto restarts = static_cast<long>(params.restarts);
#pragma omp parallel for schedule(dynamic)
  for (long r = 0; r < restarts; ++r)
    runs[static_cast<std::size_t>(r)] =
        casanova_restart(instance, params, step_cap, base.derive(static_cast<std::uint64_t>(r)));

  CasanovaResult result;
  result.allocation = Allocation(instance.num_bids());
  for (auto& run : runs) {
    result.steps += run.steps;
    if (run.best_revenue > result.revenue + kRevenueTol) {
      result.revenue = run.best_revenue;
      result.allocation = run.best;
    }
    if (params.record_trace) result.trace.push_back(std::move(run.trace));
  }
  return result;
}

Allocation casanova(const AuctionInstance& instance, const CasanovaParams& params, Rng& rng) {
  return casanova_search(instance, params, rng).allocation;
}

}  // namespace wdp
