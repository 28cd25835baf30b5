#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "oracles/fixtures.hpp"
#include "wdp/errors.hpp"
#include "wdp/exact.hpp"
#include "wdp/heuristics.hpp"
#include "wdp/lp.hpp"

using namespace wdp;
using namespace wdp::testing;
using namespace std::chrono_literals;

namespace {

Allocation alloc(std::vector<std::uint8_t> v) { return Allocation(std::move(v)); }

double revenue(const AuctionInstance& inst, const Allocation& a) {
  return evaluate_allocation(inst, a).revenue;
}

CasanovaParams quick_casanova() {
  CasanovaParams p;
  p.stagnation_steps = 200;
  p.restarts = 2;
  p.step_cap = 400;
  return p;
}

}  // namespace

TEST(Greedy, FourBid) {
  const auto inst = four_bid();
  EXPECT_EQ(density_order(inst), (std::vector<std::size_t>{1, 2, 3, 0}));
  const auto a = greedy_density(inst);
  EXPECT_EQ(a, alloc({1, 1, 1, 0}));
  EXPECT_EQ(revenue(inst, a), 8.0);
}

TEST(Greedy, NothingFitsAfterFirst) {
  AuctionInstance inst{"tight", {Item{1}}, {Bid{{1}, 1.0}, Bid{{1}, 3.0}, Bid{{1}, 2.0}}};
  EXPECT_EQ(greedy_density(inst), alloc({0, 1, 0}));
}

TEST(ShadowSurplus, FourBidScoresAndAllocation) {
  const auto inst = four_bid();
  const std::vector<double> duals{0.0, 5.0 / 3.0, 1.0 / 3.0};
  const auto s = shadow_surplus_scores(inst, duals);
  EXPECT_TRUE(std::isinf(s[0]) && s[0] > 0);
  EXPECT_NEAR(s[1], 15.0 / 11.0, 1e-12);
  EXPECT_NEAR(s[2], 1.0, 1e-12);
  EXPECT_NEAR(s[3], 1.0, 1e-12);
  // b3 and b4 tie on score; b4 goes first on price
  EXPECT_EQ(shadow_surplus_order(inst, duals), (std::vector<std::size_t>{0, 1, 3, 2}));
  const auto a = ss(inst);
  EXPECT_EQ(a, alloc({1, 1, 1, 0}));
  EXPECT_EQ(revenue(inst, a), 8.0);
}

TEST(ShadowSurplus, DualLengthChecked) {
  EXPECT_THROW(shadow_surplus_scores(four_bid(), {1.0}), DimensionError);
}

TEST(Rlp, IntegralLpIsReproduced) {
  // Capacity for everything: LP sets every bid to 1.
  AuctionInstance roomy{"roomy", {Item{10}, Item{10}},
                        {Bid{{1, 2}, 1.0}, Bid{{3, 0}, 2.0}, Bid{{2, 2}, 1.5}}};
  // One unit, the pricier bid takes it.
  AuctionInstance single{"single", {Item{1}}, {Bid{{1}, 1.0}, Bid{{1}, 3.0}}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r1(seed), r2(seed);
    EXPECT_EQ(rlp(roomy, r1), alloc({1, 1, 1}));
    EXPECT_EQ(rlp(single, r2), alloc({0, 1}));
  }
}

TEST(Rlp, IntegralLpOnRandomInstances) {
  std::size_t integral = 0;
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto inst = random_small_instance(s, 10, 4, 5);
    const auto lp = solve_lp_relaxation(inst);
    ASSERT_EQ(lp.status, LpStatus::optimal);
    bool is_int = true;
    Allocation rounded(inst.num_bids());
    for (std::size_t m = 0; m < inst.num_bids(); ++m) {
      if (std::abs(lp.primal[m] - std::round(lp.primal[m])) > 1e-9) is_int = false;
      rounded.decisions[m] = lp.primal[m] > 0.5;
    }
    if (!is_int) continue;
    ++integral;
    Rng rng(s);
    EXPECT_EQ(rlp(inst, rng), rounded) << inst.name;
    EXPECT_NEAR(revenue(inst, rounded), brute_force(inst).revenue, 1e-9);
  }
  EXPECT_GT(integral, 20u);
}

TEST(Casanova, ParamsValidated) {
  CasanovaParams p;
  p.walk_prob = 1.5;
  EXPECT_THROW(validate_params(p), ContractError);
  p = CasanovaParams{};
  p.restarts = 0;
  EXPECT_THROW(validate_params(p), ContractError);
}

TEST(Casanova, FourBidFindsOptimum) {
  Rng rng(7);
  const auto r = casanova_search(four_bid(), quick_casanova(), rng);
  EXPECT_EQ(r.revenue, 8.0);
  EXPECT_EQ(r.allocation, alloc({1, 1, 1, 0}));
}

TEST(Casanova, DeterministicGivenSeed) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto inst = random_small_instance(s, 20, 6, 5);
    Rng a(s), b(s);
    EXPECT_EQ(casanova(inst, quick_casanova(), a), casanova(inst, quick_casanova(), b));
  }
}

TEST(Casanova, BestSoFarMonotone) {
  auto p = quick_casanova();
  p.record_trace = true;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto inst = random_small_instance(s, 20, 6, 5);
    Rng rng(s);
    const auto r = casanova_search(inst, p, rng);
    ASSERT_EQ(r.trace.size(), p.restarts);
    double overall = 0.0;
    for (const auto& run : r.trace) {
      for (std::size_t i = 1; i < run.size(); ++i) ASSERT_GE(run[i], run[i - 1]);
      if (!run.empty()) overall = std::max(overall, run.back());
    }
    EXPECT_NEAR(r.revenue, overall, 1e-9);
    EXPECT_NEAR(r.revenue, revenue(inst, r.allocation), 1e-9);
  }
}

// All heuristics feasible and never above a proven optimum.
TEST(Heuristics, FeasibleAndBoundedByOptimum) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto inst = random_small_instance(s);
    const auto opt = branch_and_bound(inst, 10s);
    ASSERT_TRUE(opt.proven_optimal);
    Rng r1(s), r2(s);
    const Allocation outs[] = {greedy_density(inst), ss(inst), rlp(inst, r1),
                               casanova(inst, quick_casanova(), r2)};
    for (const auto& a : outs) {
      const auto ev = evaluate_allocation(inst, a);
      ASSERT_TRUE(ev.feasible) << inst.name;
      ASSERT_LE(ev.revenue, opt.revenue + 1e-9) << inst.name;
    }
  }
}

TEST(Heuristics, DeterministicWithoutSeed) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto inst = random_small_instance(s);
    EXPECT_EQ(ss(inst), ss(inst));
    EXPECT_EQ(greedy_density(inst), greedy_density(inst));
    Rng a(s), b(s);
    EXPECT_EQ(rlp(inst, a), rlp(inst, b));
  }
}
