#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "wdp/core.hpp"

namespace wdp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(LpStatus s);

/// maximize c^T x  s.t.  A x <= b,  0 <= x <= upper.
/// A is dense row-major (rows x cols). Entries of `upper` may be kInf.
struct LpProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> objective;
  std::vector<double> matrix;
  std::vector<double> rhs;
  std::vector<double> upper;

  double& at(std::size_t r, std::size_t c) { return matrix[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return matrix[r * cols + c]; }
};

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  std::vector<double> primal;
  double objective = 0.0;
  std::vector<double> duals;  // one per row of A
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 100000;
};

/// Two-phase bounded-variable primal simplex. Rows with negative right-hand side go
/// through an artificial phase. Pricing is Dantzig's rule until a run of
/// 5*(rows+cols) degenerate pivots, after which Bland's rule is used for the rest of the
/// solve. Throws DimensionError on inconsistent sizes.
LpSolution simplex(const LpProblem& problem, const SimplexOptions& options = {});

/// LP relaxation of the winner determination problem: a in [0,1]^M, one row per item.
LpProblem relaxation_problem(const AuctionInstance& instance);
LpSolution solve_lp_relaxation(const AuctionInstance& instance);

/// Relaxation restricted to a subset of bids against residual capacities; used by
/// branch-and-bound. `bids` are indices into instance.bids.
LpSolution solve_lp_relaxation(const AuctionInstance& instance, std::span<const std::size_t> bids,
                               std::span<const int> capacity);

}  // namespace wdp
