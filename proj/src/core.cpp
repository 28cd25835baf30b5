#include "wdp/core.hpp"

#include <algorithm>
#include <numeric>

#include "wdp/errors.hpp"

namespace wdp {

int Bid::total_units() const { return std::accumulate(demand.begin(), demand.end(), 0); }

std::vector<int> AuctionInstance::capacities() const {
  std::vector<int> caps(items.size());
  std::transform(items.begin(), items.end(), caps.begin(), [](const Item& it) { return it.units; });
  return caps;
}

int AuctionInstance::total_units() const {
  int total = 0;
  for (const auto& it : items) total += it.units;
  return total;
}

std::size_t Allocation::num_accepted() const {
  return static_cast<std::size_t>(std::count_if(decisions.begin(), decisions.end(),
                                                [](std::uint8_t a) { return a != 0; }));
}

std::vector<std::size_t> Allocation::winners() const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < decisions.size(); ++m)
    if (decisions[m]) out.push_back(m);
  return out;
}

ValidationReport validate_instance(const AuctionInstance& instance) {
  ValidationReport report;
  auto& v = report.violations;
  if (instance.items.empty()) v.push_back("instance: no items");
  if (instance.bids.empty()) v.push_back("instance: no bids");
  for (std::size_t n = 0; n < instance.items.size(); ++n) {
    if (instance.items[n].units < 1) v.push_back("item " + std::to_string(n) + ": units < 1");
  }
  const std::size_t num_items = instance.items.size();
  for (std::size_t m = 0; m < instance.bids.size(); ++m) {
    const Bid& bid = instance.bids[m];
    const std::string tag = "bid " + std::to_string(m) + ": ";
    if (!(bid.price > 0.0)) v.push_back(tag + "price must be positive");
    if (bid.demand.size() != num_items) {
      v.push_back(tag + "demand length " + std::to_string(bid.demand.size()) + " != " +
                  std::to_string(num_items) + " items");
      continue;
    }
    bool any_positive = false;
    for (std::size_t n = 0; n < num_items; ++n) {
      const int d = bid.demand[n];
      if (d < 0) v.push_back(tag + "negative demand on item " + std::to_string(n));
      if (d > 0) any_positive = true;
      if (d > instance.items[n].units)
        v.push_back(tag + "demand on item " + std::to_string(n) + " exceeds its units");
    }
    if (!any_positive) v.push_back(tag + "empty bundle");
  }
  return report;
}

Evaluation evaluate_allocation(const AuctionInstance& instance, const Allocation& alloc) {
  if (alloc.size() != instance.num_bids())
    throw DimensionError("allocation length " + std::to_string(alloc.size()) +
                         " != number of bids " + std::to_string(instance.num_bids()));
  Evaluation ev;
  ev.used_units.assign(instance.num_items(), 0);
  for (std::size_t m = 0; m < alloc.size(); ++m) {
    if (!alloc.accepted(m)) continue;
    const Bid& bid = instance.bids[m];
    ev.revenue += bid.price;
    for (std::size_t n = 0; n < bid.demand.size(); ++n) ev.used_units[n] += bid.demand[n];
  }
  for (std::size_t n = 0; n < instance.num_items(); ++n)
    if (ev.used_units[n] > instance.items[n].units) ev.feasible = false;
  return ev;
}

MetricsRow metrics(const AuctionInstance& instance, const Allocation& alloc,
                   double reference_revenue) {
  if (!(reference_revenue > 0.0)) throw DivisionError("reference revenue must be positive");
  const Evaluation ev = evaluate_allocation(instance, alloc);
  if (!ev.feasible) throw ContractError("metrics requires a feasible allocation");
  MetricsRow row;
  row.revenue = ev.revenue;
  row.gap = (reference_revenue - ev.revenue) / reference_revenue;
  const int used = std::accumulate(ev.used_units.begin(), ev.used_units.end(), 0);
  row.utilization = static_cast<double>(used) / static_cast<double>(instance.total_units());
  row.satisfaction =
      static_cast<double>(alloc.num_accepted()) / static_cast<double>(instance.num_bids());
  return row;
}

bool fits(std::span<const int> demand, std::span<const int> remaining) {
  for (std::size_t n = 0; n < demand.size(); ++n)
    if (demand[n] > remaining[n]) return false;
  return true;
}

void deduct(std::span<const int> demand, std::span<int> remaining) {
  for (std::size_t n = 0; n < demand.size(); ++n) remaining[n] -= demand[n];
}

double price_density(const Bid& bid) {
  return bid.price / static_cast<double>(bid.total_units());
}

std::vector<std::size_t> density_order(const AuctionInstance& instance) {
  std::vector<std::size_t> order(instance.num_bids());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> density(instance.num_bids());
  for (std::size_t m = 0; m < density.size(); ++m) density[m] = price_density(instance.bids[m]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (density[a] != density[b]) return density[a] > density[b];
    if (instance.bids[a].price != instance.bids[b].price)
      return instance.bids[a].price > instance.bids[b].price;
    return a < b;
  });
  return order;
}

}  // namespace wdp
