#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wdp/core.hpp"

namespace wdp {

/// Decay-distribution generator settings.
struct SynthConfig {
  int num_bids = 500;
  int num_items = 50;
  int max_units = 10;
  double item_prob = 0.8;
  double unit_prob = 0.65;
  std::uint64_t seed = 0;
};

/// Cloud VM-allocation generator settings. Defaults follow the 90-type EC2-like setting
/// with heavy/medium/light users.
struct VmConfig {
  int num_users = 5000;
  int num_vm_types = 90;
  int units_per_type = 500;
  int unit_cap = 5;
  std::vector<double> type_fractions{0.10, 0.40, 0.50};
  std::vector<double> type_factors{2.0, 1.5, 1.0};
  double item_prob = 0.8;
  double unit_prob = 0.65;
  std::uint64_t seed = 0;
};

void validate_config(const SynthConfig& cfg);
void validate_config(const VmConfig& cfg);

/// True iff `candidate` is dominated by `other`: it demands componentwise at least as
/// much and pays no more. Throws DimensionError on demand length mismatch.
bool dominates(const Bid& candidate, const Bid& other);

/// Removes every bid dominated by another retained bid. Among identical bids the
/// earliest is kept. Relative order of survivors is preserved.
std::vector<Bid> prune_dominated(std::span<const Bid> bids);

/// Throws GenerationExhausted if M distinct non-dominated bids are not reached
/// within 100*M candidate draws.
AuctionInstance gen_synthetic(const SynthConfig& cfg);

struct VmInstance {
  AuctionInstance instance;
  std::vector<int> user_types;  // per bid, 0-based type index
};

/// Users per type: floor(fraction * K) for all but the last type, remainder to the last.
std::vector<int> user_type_counts(int num_users, std::span<const double> fractions);

/// ceil(base * factor), guarding against binary round-off just above an integer.
int scale_demand(int base_units, double factor);

VmInstance gen_vm_typed(const VmConfig& cfg);
AuctionInstance gen_vm(const VmConfig& cfg);

}  // namespace wdp
