#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wdp {

/// Revenue comparisons throughout the library use this absolute tolerance.
inline constexpr double kRevenueTol = 1e-9;

struct Item {
  int units = 1;
};

/// A single-minded bid: an all-or-nothing bundle with a valuation.
struct Bid {
  std::vector<int> demand;  // units requested per item, length N
  double price = 0.0;

  int total_units() const;
  bool operator==(const Bid&) const = default;
};

struct AuctionInstance {
  std::string name;
  std::vector<Item> items;
  std::vector<Bid> bids;

  std::size_t num_items() const { return items.size(); }
  std::size_t num_bids() const { return bids.size(); }
  std::vector<int> capacities() const;
  int total_units() const;
};

struct Allocation {
  std::vector<std::uint8_t> decisions;

  Allocation() = default;
  explicit Allocation(std::size_t num_bids) : decisions(num_bids, 0) {}
  explicit Allocation(std::vector<std::uint8_t> d) : decisions(std::move(d)) {}

  std::size_t size() const { return decisions.size(); }
  bool accepted(std::size_t m) const { return decisions[m] != 0; }
  std::size_t num_accepted() const;
  std::vector<std::size_t> winners() const;
  bool operator==(const Allocation&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const AuctionInstance& instance);

struct Evaluation {
  double revenue = 0.0;
  bool feasible = true;
  std::vector<int> used_units;
};

/// Revenue, feasibility and per-item usage. Throws DimensionError on length mismatch.
Evaluation evaluate_allocation(const AuctionInstance& instance, const Allocation& alloc);

struct MetricsRow {
  double revenue = 0.0;
  double gap = 0.0;
  double utilization = 0.0;
  double satisfaction = 0.0;
  std::size_t iterations = 0;
  std::chrono::duration<double, std::milli> elapsed{0};
};

/// Gap, utilization, and satisfaction of a feasible allocation against a reference revenue.
MetricsRow metrics(const AuctionInstance& instance, const Allocation& alloc,
                   double reference_revenue);

// Helpers shared by the solvers.

/// True iff `demand` fits inside `remaining` componentwise.
bool fits(std::span<const int> demand, std::span<const int> remaining);
void deduct(std::span<const int> demand, std::span<int> remaining);

/// p_m / sum_n lambda_m^n.
double price_density(const Bid& bid);

/// Bid order used by greedy seeding and branching: density desc, price desc, index asc.
std::vector<std::size_t> density_order(const AuctionInstance& instance);

}  // namespace wdp
