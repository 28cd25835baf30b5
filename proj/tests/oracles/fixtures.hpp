#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "wdp/core.hpp"
#include "wdp/rng.hpp"

namespace wdp::testing {

/// Four bidders, three items with (6, 3, 4) units.
inline AuctionInstance four_bid() {
  AuctionInstance inst;
  inst.name = "four-bid";
  inst.items = {Item{6}, Item{3}, Item{4}};
  inst.bids = {Bid{{2, 0, 0}, 1.0}, Bid{{2, 2, 1}, 5.0}, Bid{{0, 1, 1}, 2.0}, Bid{{0, 1, 4}, 3.0}};
  return inst;
}

/// Small valid instance with no structure beyond the validation rules: each bid asks for
/// at least one unit of some item and never more than an item has.
inline AuctionInstance random_instance(Rng& rng, std::size_t bids, std::size_t items, int max_units,
                                       const std::string& name = "rand") {
  AuctionInstance inst;
  inst.name = name;
  for (std::size_t n = 0; n < items; ++n)
    inst.items.push_back(Item{static_cast<int>(rng.uniform_int(1, max_units))});
  for (std::size_t m = 0; m < bids; ++m) {
    Bid b;
    b.demand.assign(items, 0);
    while (std::all_of(b.demand.begin(), b.demand.end(), [](int d) { return d == 0; })) {
      for (std::size_t n = 0; n < items; ++n)
        if (rng.bernoulli(0.5)) b.demand[n] = static_cast<int>(rng.uniform_int(1, inst.items[n].units));
    }
    b.price = rng.uniform_open_closed(static_cast<double>(b.total_units()));
    inst.bids.push_back(std::move(b));
  }
  return inst;
}

/// Random size in the ranges used by the oracle-equivalence checks.
inline AuctionInstance random_small_instance(std::uint64_t seed, std::size_t max_bids = 20,
                                             std::size_t max_items = 6, int max_units = 5) {
  Rng rng(seed);
  const auto m = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_bids)));
  const auto n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_items)));
  const int u = static_cast<int>(rng.uniform_int(1, max_units));
  return random_instance(rng, m, n, u, "rand-" + std::to_string(seed));
}

}  // namespace wdp::testing
