#include "wdp/instgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wdp/errors.hpp"
#include "wdp/rng.hpp"

namespace wdp {

namespace {

// Per-item unit count for a bid: one unit, then keep adding with probability unit_prob
// until a draw fails or the cap is reached.
int decay_units(Rng& rng, double unit_prob, int cap) {
  int units = 1;
  while (units < cap && rng.bernoulli(unit_prob)) ++units;
  return units;
}

// Bundle from the decay distribution. Empty bundles are returned as all-zero and
// rejected by the caller.
std::vector<int> decay_bundle(Rng& rng, double item_prob, double unit_prob,
                              std::span<const int> caps) {
  std::vector<int> demand(caps.size(), 0);
  for (std::size_t n = 0; n < caps.size(); ++n)
    if (rng.bernoulli(item_prob)) demand[n] = decay_units(rng, unit_prob, caps[n]);
  return demand;
}

bool empty_bundle(const std::vector<int>& demand) {
  return std::all_of(demand.begin(), demand.end(), [](int d) { return d == 0; });
}

struct Tagged {
  Bid bid;
  int type = 0;
};

// Inserts `candidate` unless an existing bid dominates it; evicts existing bids the
// candidate dominates. Returns false when the candidate was discarded.
bool insert_non_dominated(std::vector<Tagged>& pool, Tagged candidate, std::vector<int>& counts) {
  for (const auto& e : pool)
    if (dominates(candidate.bid, e.bid)) return false;
  std::erase_if(pool, [&](const Tagged& e) {
    if (!dominates(e.bid, candidate.bid)) return false;
    --counts[static_cast<std::size_t>(e.type)];
    return true;
  });
  ++counts[static_cast<std::size_t>(candidate.type)];
  pool.push_back(std::move(candidate));
  return true;
}

}  // namespace

void validate_config(const SynthConfig& cfg) {
  if (cfg.num_bids < 1 || cfg.num_items < 1 || cfg.max_units < 1)
    throw ContractError("synthetic config: bids, items and max units must be >= 1");
  if (!(cfg.item_prob > 0.0 && cfg.item_prob <= 1.0))
    throw ContractError("synthetic config: item probability must be in (0, 1]");
  if (!(cfg.unit_prob > 0.0 && cfg.unit_prob < 1.0))
    throw ContractError("synthetic config: unit probability must be in (0, 1)");
}

void validate_config(const VmConfig& cfg) {
  if (cfg.num_users < 1 || cfg.num_vm_types < 1 || cfg.units_per_type < 1 || cfg.unit_cap < 1)
    throw ContractError("vm config: counts must be >= 1");
  if (cfg.type_fractions.empty() || cfg.type_fractions.size() != cfg.type_factors.size())
    throw ContractError("vm config: type fractions and factors must be non-empty and equal length");
  const double total = std::accumulate(cfg.type_fractions.begin(), cfg.type_fractions.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw ContractError("vm config: type fractions must sum to 1");
  for (double f : cfg.type_fractions)
    if (f < 0.0) throw ContractError("vm config: negative type fraction");
  for (double rho : cfg.type_factors)
    if (!(rho > 0.0)) throw ContractError("vm config: type factors must be positive");
  if (!(cfg.item_prob > 0.0 && cfg.item_prob <= 1.0) || !(cfg.unit_prob > 0.0 && cfg.unit_prob < 1.0))
    throw ContractError("vm config: probabilities out of range");
}

bool dominates(const Bid& candidate, const Bid& other) {
  if (candidate.demand.size() != other.demand.size())
    throw DimensionError("dominates: demand lengths differ");
  for (std::size_t n = 0; n < candidate.demand.size(); ++n)
    if (candidate.demand[n] < other.demand[n]) return false;
  return candidate.price <= other.price;
}

std::vector<Bid> prune_dominated(std::span<const Bid> bids) {
  std::vector<Bid> kept;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    bool removed = false;
    for (std::size_t j = 0; j < bids.size() && !removed; ++j) {
      if (i == j || !dominates(bids[i], bids[j])) continue;
      // Mutual domination means identical bundles and prices; the earlier one survives.
      const bool mutual = dominates(bids[j], bids[i]);
      removed = !mutual || j < i;
    }
    if (!removed) kept.push_back(bids[i]);
  }
  return kept;
}

AuctionInstance gen_synthetic(const SynthConfig& cfg) {
  validate_config(cfg);
  Rng rng(cfg.seed);
  AuctionInstance inst;
  inst.name = "synth-M" + std::to_string(cfg.num_bids) + "-N" + std::to_string(cfg.num_items) +
              "-u" + std::to_string(cfg.max_units) + "-s" + std::to_string(cfg.seed);
  inst.items.resize(static_cast<std::size_t>(cfg.num_items));
  for (auto& it : inst.items) it.units = static_cast<int>(rng.uniform_int(1, cfg.max_units));
  const std::vector<int> caps = inst.capacities();

  std::vector<Tagged> pool;
  std::vector<int> counts(1, 0);
  const long long budget = 100LL * cfg.num_bids;
  long long attempts = 0;
  while (static_cast<int>(pool.size()) < cfg.num_bids) {
    if (attempts++ >= budget)
      throw GenerationExhausted("synthetic generator: only " + std::to_string(pool.size()) + " of " +
                                std::to_string(cfg.num_bids) + " non-dominated bids after " +
                                std::to_string(budget) + " draws");
    Bid bid;
    bid.demand = decay_bundle(rng, cfg.item_prob, cfg.unit_prob, caps);
    if (empty_bundle(bid.demand)) continue;
    bid.price = rng.uniform_open_closed(static_cast<double>(bid.total_units()));
    insert_non_dominated(pool, Tagged{std::move(bid), 0}, counts);
  }
  inst.bids.reserve(pool.size());
  for (auto& t : pool) inst.bids.push_back(std::move(t.bid));
  return inst;
}

std::vector<int> user_type_counts(int num_users, std::span<const double> fractions) {
  std::vector<int> counts(fractions.size(), 0);
  int assigned = 0;
  for (std::size_t t = 0; t + 1 < fractions.size(); ++t) {
    counts[t] = static_cast<int>(std::floor(fractions[t] * num_users + 1e-9));
    assigned += counts[t];
  }
  counts.back() = num_users - assigned;
  return counts;
}

int scale_demand(int base_units, double factor) {
  return static_cast<int>(std::ceil(static_cast<double>(base_units) * factor - 1e-9));
}

VmInstance gen_vm_typed(const VmConfig& cfg) {
  validate_config(cfg);
  Rng rng(cfg.seed);
  VmInstance out;
  AuctionInstance& inst = out.instance;
  inst.name = "vm-K" + std::to_string(cfg.num_users) + "-T" + std::to_string(cfg.num_vm_types) +
              "-s" + std::to_string(cfg.seed);
  inst.items.assign(static_cast<std::size_t>(cfg.num_vm_types), Item{cfg.units_per_type});
  const std::vector<int> base_caps(inst.items.size(), std::min(cfg.unit_cap, cfg.units_per_type));

  const std::vector<int> quota = user_type_counts(cfg.num_users, cfg.type_fractions);
  std::vector<int> counts(quota.size(), 0);
  std::vector<Tagged> pool;
  const long long budget = 100LL * cfg.num_users;
  long long attempts = 0;
  while (static_cast<int>(pool.size()) < cfg.num_users) {
    if (attempts++ >= budget)
      throw GenerationExhausted("vm generator: retry budget of " + std::to_string(budget) +
                                " draws exhausted");
    int type = 0;
    while (counts[static_cast<std::size_t>(type)] >= quota[static_cast<std::size_t>(type)]) ++type;
    const double rho = cfg.type_factors[static_cast<std::size_t>(type)];

    Bid bid;
    bid.demand = decay_bundle(rng, cfg.item_prob, cfg.unit_prob, base_caps);
    if (empty_bundle(bid.demand)) continue;
    for (int& d : bid.demand)
      if (d > 0) d = std::min(scale_demand(d, rho), cfg.units_per_type);
    bid.price = rng.uniform_open_closed(static_cast<double>(bid.total_units()));
    insert_non_dominated(pool, Tagged{std::move(bid), type}, counts);
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Tagged& a, const Tagged& b) { return a.type < b.type; });
  for (auto& t : pool) {
    inst.bids.push_back(std::move(t.bid));
    out.user_types.push_back(t.type);
  }
  return out;
}

AuctionInstance gen_vm(const VmConfig& cfg) { return gen_vm_typed(cfg).instance; }

}  // namespace wdp
