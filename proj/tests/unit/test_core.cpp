#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>

#include "oracles/fixtures.hpp"
#include "wdp/core.hpp"
#include "wdp/errors.hpp"
#include "wdp/io.hpp"
#include "wdp/rng.hpp"

using namespace wdp;
using namespace wdp::testing;

namespace {

bool has_violation(const ValidationReport& r, const std::string& text) {
  return std::find(r.violations.begin(), r.violations.end(), text) != r.violations.end();
}

// Every subset of bids, for exhaustive property checks on small instances.
std::vector<Allocation> all_allocations(std::size_t m) {
  std::vector<Allocation> out;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    Allocation a(m);
    for (std::size_t i = 0; i < m; ++i) a.decisions[i] = (mask >> i) & 1u;
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST(Validate, FourBidIsOk) { EXPECT_TRUE(validate_instance(four_bid()).ok()); }

TEST(Validate, ReportsEachViolationWithIndex) {
  AuctionInstance inst = four_bid();
  inst.items[0].units = 0;
  inst.bids[0].price = 0.0;
  const auto r = validate_instance(inst);
  EXPECT_TRUE(has_violation(r, "item 0: units < 1"));
  EXPECT_TRUE(has_violation(r, "bid 0: price must be positive"));
  // bid 0 asks for 2 units of item 0, which now has none
  EXPECT_TRUE(has_violation(r, "bid 0: demand on item 0 exceeds its units"));
}

TEST(Validate, StructuralViolations) {
  AuctionInstance inst = four_bid();
  inst.bids[1].demand = {1, 1};
  inst.bids[2].demand = {0, 0, 0};
  inst.bids[3].demand[0] = -1;
  const auto r = validate_instance(inst);
  EXPECT_TRUE(has_violation(r, "bid 1: demand length 2 != 3 items"));
  EXPECT_TRUE(has_violation(r, "bid 3: negative demand on item 0"));
  EXPECT_EQ(r.violations.size(), 3u);
  EXPECT_TRUE(has_violation(validate_instance(AuctionInstance{}), "instance: no items"));
  EXPECT_TRUE(has_violation(validate_instance(AuctionInstance{}), "instance: no bids"));
}

TEST(Evaluate, FourBidOptimum) {
  const auto e = evaluate_allocation(four_bid(), Allocation({1, 1, 1, 0}));
  EXPECT_EQ(e.revenue, 8.0);
  EXPECT_TRUE(e.feasible);
  EXPECT_EQ(e.used_units, (std::vector<int>{4, 3, 2}));
}

TEST(Evaluate, EmptyAndInfeasible) {
  const auto empty = evaluate_allocation(four_bid(), Allocation(4));
  EXPECT_EQ(empty.revenue, 0.0);
  EXPECT_TRUE(empty.feasible);
  EXPECT_FALSE(evaluate_allocation(four_bid(), Allocation({1, 1, 1, 1})).feasible);
  EXPECT_THROW(evaluate_allocation(four_bid(), Allocation(3)), DimensionError);
}

TEST(Metrics, FourBidAgainstItsOptimum) {
  const auto m = metrics(four_bid(), Allocation({1, 1, 1, 0}), 8.0);
  EXPECT_EQ(m.gap, 0.0);
  EXPECT_DOUBLE_EQ(m.satisfaction, 0.75);
  EXPECT_DOUBLE_EQ(m.utilization, 9.0 / 13.0);
}

TEST(Metrics, Errors) {
  EXPECT_THROW(metrics(four_bid(), Allocation({1, 1, 1, 0}), 0.0), DivisionError);
  EXPECT_THROW(metrics(four_bid(), Allocation({1, 1, 1, 1}), 8.0), ContractError);
}

TEST(CoreProperties, RevenueBoundsAndGapIdentity) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto inst = random_small_instance(s, 8, 4, 4);
    double total = 0.0;
    for (const auto& b : inst.bids) total += b.price;
    for (const auto& a : all_allocations(inst.num_bids())) {
      const auto e = evaluate_allocation(inst, a);
      EXPECT_EQ(e.revenue, evaluate_allocation(inst, a).revenue);
      if (!e.feasible) continue;
      EXPECT_GE(e.revenue, 0.0);
      EXPECT_LE(e.revenue, total + 1e-12);
      if (e.revenue > 0.0) {
        EXPECT_EQ(metrics(inst, a, e.revenue).gap, 0.0);
        EXPECT_GT(metrics(inst, a, e.revenue + 1.0).gap, 0.0);
      }
    }
  }
}

TEST(CoreProperties, UtilizationAndSatisfactionMonotoneUnderAddingBids) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto inst = random_small_instance(1000 + s, 8, 4, 4);
    for (const auto& a : all_allocations(inst.num_bids())) {
      if (!evaluate_allocation(inst, a).feasible) continue;
      const auto base = metrics(inst, a, 1.0);
      EXPECT_GE(base.utilization, 0.0);
      EXPECT_LE(base.utilization, 1.0);
      for (std::size_t m = 0; m < inst.num_bids(); ++m) {
        if (a.accepted(m)) continue;
        Allocation more = a;
        more.decisions[m] = 1;
        if (!evaluate_allocation(inst, more).feasible) continue;
        const auto next = metrics(inst, more, 1.0);
        EXPECT_GE(next.utilization, base.utilization);
        EXPECT_GT(next.satisfaction, base.satisfaction);
      }
    }
  }
}

TEST(Helpers, DensityOrderOnFourBid) {
  // densities 1/2, 1, 1, 3/5; b2 and b3 tie, b2 wins on price
  EXPECT_EQ(density_order(four_bid()), (std::vector<std::size_t>{1, 2, 3, 0}));
  EXPECT_DOUBLE_EQ(price_density(four_bid().bids[3]), 0.6);
  std::vector<int> rem{1, 1};
  EXPECT_TRUE(fits(std::vector<int>{1, 0}, rem));
  deduct(std::vector<int>{1, 0}, rem);
  EXPECT_FALSE(fits(std::vector<int>{1, 0}, rem));
}

TEST(Rng, StreamsAreReproducibleAndIndependent) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
  const Rng parent(7);
  Rng d1 = parent.derive(1), d1b = parent.derive(1), d2 = parent.derive(2);
  EXPECT_EQ(d1.next_u64(), d1b.next_u64());
  EXPECT_NE(parent.derive(1).next_u64(), d2.next_u64());
}

TEST(Rng, DistributionsStayInRange) {
  Rng r(1);
  std::map<std::int64_t, int> counts;
  for (int i = 0; i < 60000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = r.uniform_open_closed(3.0);
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 3.0);
    ++counts[r.uniform_int(-2, 3)];
  }
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [k, n] : counts) EXPECT_NEAR(n, 10000, 500) << k;
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng r(3);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  r.shuffle(std::span<int>(v));
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Io, InstanceRoundTrip) {
  const auto inst = four_bid();
  const auto back = instance_from_json(to_json(inst));
  EXPECT_EQ(back.name, inst.name);
  EXPECT_EQ(back.bids, inst.bids);
  EXPECT_EQ(back.capacities(), inst.capacities());
  const auto dir = std::filesystem::temp_directory_path() / "wdp_io_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "four_bid.json";
  save_instance(path, inst);
  EXPECT_EQ(load_instance(path).bids, inst.bids);
  EXPECT_EQ(list_json_files(path.parent_path()).size(), 1u);
}

TEST(Io, SchemaMatchesFileFormat) {
  const Json j = to_json(four_bid());
  EXPECT_EQ(j.at("items")[0].at("units"), 6);
  EXPECT_EQ(j.at("bids")[1].at("demand"), Json::array({2, 2, 1}));
  EXPECT_EQ(j.at("bids")[1].at("price"), 5.0);
  const Json a = allocation_to_json(four_bid(), Allocation({1, 1, 1, 0}));
  EXPECT_EQ(a.at("revenue"), 8.0);
  EXPECT_EQ(allocation_from_json(a), Allocation({1, 1, 1, 0}));
}

TEST(Io, MalformedInputIsAFormatError) {
  EXPECT_THROW(instance_from_json(Json::parse(R"({"name":"x","items":[{"units":"a"}],"bids":[]})")),
               FormatError);
  EXPECT_THROW(instance_from_json(Json::parse(R"({"items":[]})")), FormatError);
  EXPECT_THROW(allocation_from_json(Json::parse(R"({"decisions":[0,2],"revenue":0})")), FormatError);
  EXPECT_THROW(read_json_file("/nonexistent/file.json"), FormatError);
}

TEST(Io, DoublesRoundTripThroughText) {
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = r.uniform_open_closed(100.0);
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}
