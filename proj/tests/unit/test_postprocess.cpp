#include <gtest/gtest.h>

#include <map>
#include <set>

#include "oracles/fixtures.hpp"
#include "wdp/exact.hpp"
#include "wdp/gnn.hpp"
#include "wdp/postprocess.hpp"

using namespace wdp;
using namespace wdp::testing;

namespace {

// Fixed ranking over original bid ids; earlier in the list scores higher.
BidScorer ranked(std::vector<std::size_t> ids) {
  return [ids](const BidItemGraph& g) {
    std::vector<double> s(g.num_bids(), -1e9);
    for (std::size_t m = 0; m < g.num_bids(); ++m)
      for (std::size_t r = 0; r < ids.size(); ++r)
        if (ids[r] == g.bid_ids[m]) s[m] = -static_cast<double>(r);
    return s;
  };
}

BidScorer uniform() {
  return [](const BidItemGraph& g) { return std::vector<double>(g.num_bids(), 1.0 / g.num_bids()); };
}

BidScorer random_scorer(std::uint64_t seed) {
  return [seed](const BidItemGraph& g) {
    std::vector<double> s(g.num_bids());
    for (std::size_t m = 0; m < s.size(); ++m) s[m] = Rng(seed).derive(g.bid_ids[m]).uniform();
    return s;
  };
}

void expect_labels_partition(const SolveTrace& t, std::size_t num_bids) {
  std::set<std::size_t> seen;
  for (const auto& it : t.iterations) {
    for (auto id : it.accepted) {
      EXPECT_TRUE(seen.insert(id).second);
      EXPECT_TRUE(t.allocation.accepted(id));
    }
    for (auto id : it.rejected) {
      EXPECT_TRUE(seen.insert(id).second);
      EXPECT_FALSE(t.allocation.accepted(id));
    }
  }
  EXPECT_EQ(seen.size(), num_bids);
}

}  // namespace

TEST(Basic, FourBidOracleRanking) {
  const auto t = basic_solve(ranked({1, 2, 0, 3}), four_bid());
  EXPECT_EQ(t.allocation, Allocation(std::vector<std::uint8_t>{1, 1, 1, 0}));
  EXPECT_EQ(t.gnn_calls, 3u);
  ASSERT_EQ(t.iterations.size(), 3u);
  EXPECT_EQ(t.iterations[0].accepted, (std::vector<std::size_t>{1}));
  EXPECT_EQ(t.iterations[0].rejected, (std::vector<std::size_t>{3}));
  EXPECT_EQ(t.iterations[1].accepted, (std::vector<std::size_t>{2}));
  EXPECT_EQ(t.iterations[2].accepted, (std::vector<std::size_t>{0}));
  expect_labels_partition(t, 4);
}

TEST(Traversal, FourBidOracleRanking) {
  const auto t = traversal_solve(ranked({1, 3, 2, 0}), four_bid());
  EXPECT_EQ(t.allocation, Allocation(std::vector<std::uint8_t>{1, 1, 1, 0}));
  EXPECT_EQ(t.gnn_calls, 2u);
  EXPECT_EQ(t.iterations[0].accepted, (std::vector<std::size_t>{1}));
  EXPECT_EQ(t.iterations[0].rejected, (std::vector<std::size_t>{3}));
  EXPECT_EQ(t.iterations[1].accepted, (std::vector<std::size_t>{2, 0}));
  expect_labels_partition(t, 4);
}

TEST(Traversal, AllJointlyFeasibleOneCall) {
  AuctionInstance inst{"roomy", {Item{10}, Item{10}},
                       {Bid{{1, 2}, 1.0}, Bid{{3, 0}, 2.0}, Bid{{2, 2}, 1.5}}};
  const auto t = traversal_solve(uniform(), inst);
  EXPECT_EQ(t.gnn_calls, 1u);
  EXPECT_EQ(t.allocation.num_accepted(), 3u);
}

TEST(Solvers, UniformScoresUseIndexOrder) {
  const auto b = basic_solve(uniform(), four_bid());
  // b1, b2, b3 taken in index order; b4 conflicts once b2 is in
  EXPECT_EQ(b.allocation, Allocation(std::vector<std::uint8_t>{1, 1, 1, 0}));
  EXPECT_EQ(b.iterations[0].accepted, (std::vector<std::size_t>{0}));
}

TEST(Solvers, PerfectOracleReproducesOptimum) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto inst = random_small_instance(s);
    const auto opt = brute_force(inst).allocation;
    BidScorer oracle = [&opt](const BidItemGraph& g) {
      std::vector<double> v(g.num_bids());
      for (std::size_t m = 0; m < v.size(); ++m) v[m] = opt.accepted(g.bid_ids[m]) ? 1.0 : 0.0;
      return v;
    };
    EXPECT_EQ(basic_solve(oracle, inst).allocation, opt) << inst.name;
    EXPECT_EQ(traversal_solve(oracle, inst).allocation, opt) << inst.name;
  }
}

// Feasibility, termination within M calls, M_t <= M_b and M_b = accepted count.
TEST(Solvers, IterationAccountingProperty) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto inst = random_small_instance(s);
    const auto scorer = random_scorer(s);
    const auto b = basic_solve(scorer, inst);
    const auto t = traversal_solve(scorer, inst);
    for (const auto* tr : {&b, &t}) {
      ASSERT_TRUE(evaluate_allocation(inst, tr->allocation).feasible);
      ASSERT_GE(tr->gnn_calls, 1u);
      ASSERT_LE(tr->gnn_calls, inst.num_bids());
      expect_labels_partition(*tr, inst.num_bids());
    }
    EXPECT_EQ(b.gnn_calls, b.allocation.num_accepted());
    EXPECT_LE(t.gnn_calls, b.gnn_calls) << inst.name;
  }
}

TEST(Solvers, ModelOverloadMatchesScorer) {
  const auto model = init_model(8, 3);
  const auto inst = random_small_instance(9);
  const auto a = basic_solve(model, inst, ExecPolicy::serial);
  const auto b = basic_solve(model_scorer(model, ExecPolicy::parallel), inst);
  EXPECT_EQ(a.allocation, b.allocation);
  EXPECT_EQ(a.gnn_calls, b.gnn_calls);
  EXPECT_TRUE(evaluate_allocation(inst, traversal_solve(model, inst).allocation).feasible);
}
