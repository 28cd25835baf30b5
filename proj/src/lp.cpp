#include "wdp/lp.hpp"

#include <algorithm>
#include <cmath>

#include "wdp/errors.hpp"

namespace wdp {

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-11;

// Dense tableau over structural, slack, and artificial columns. The tableau holds
// B^-1 A for the current basis; nonbasic columns sit at their lower (0) or upper bound.
class Tableau {
 public:
  Tableau(const LpProblem& p, const SimplexOptions& opt)
      : m_(p.rows), n_(p.cols), opt_(opt) {
    for (std::size_t i = 0; i < m_; ++i)
      if (p.rhs[i] < 0.0) artificial_rows_.push_back(i);
    width_ = n_ + m_ + artificial_rows_.size();
    t_.assign(m_ * width_, 0.0);
    upper_.assign(width_, kInf);
    std::copy(p.upper.begin(), p.upper.end(), upper_.begin());
    at_upper_.assign(width_, false);
    basis_.resize(m_);
    xb_.resize(m_);
    row_of_.assign(width_, kNonbasic);

    std::size_t next_art = n_ + m_;
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = p.rhs[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) cell(i, j) = sign * p.at(i, j);
      cell(i, n_ + i) = sign;
      xb_[i] = sign * p.rhs[i];
      if (sign < 0.0) {
        cell(i, next_art) = 1.0;
        set_basic(i, next_art++);
      } else {
        set_basic(i, n_ + i);
      }
    }
  }

  LpSolution run(const LpProblem& p) {
    LpSolution sol;
    if (!artificial_rows_.empty()) {
      std::vector<double> phase1(width_, 0.0);
      for (std::size_t j = n_ + m_; j < width_; ++j) phase1[j] = -1.0;
      const LpStatus s = optimize(phase1);
      sol.iterations = iterations_;
      if (s == LpStatus::iteration_limit) {
        sol.status = s;
        return sol;
      }
      double infeasibility = 0.0;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= n_ + m_) infeasibility += std::max(0.0, xb_[i]);
      double scale = 1.0;
      for (double b : p.rhs) scale = std::max(scale, std::abs(b));
      if (infeasibility > 1e-7 * scale) {
        sol.status = LpStatus::infeasible;
        return sol;
      }
      for (std::size_t j = n_ + m_; j < width_; ++j) {
        upper_[j] = 0.0;
        at_upper_[j] = false;
      }
    }
    std::vector<double> cost(width_, 0.0);
    std::copy(p.objective.begin(), p.objective.end(), cost.begin());
    sol.status = optimize(cost);
    sol.iterations = iterations_;
    if (sol.status != LpStatus::optimal) return sol;

    sol.primal.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (row_of_[j] != kNonbasic) {
        sol.primal[j] = xb_[row_of_[j]];
      } else if (at_upper_[j]) {
        sol.primal[j] = upper_[j];
      }
      sol.primal[j] = std::clamp(sol.primal[j], 0.0, upper_[j]);
    }
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.objective += p.objective[j] * sol.primal[j];
    // Reduced cost of slack i equals minus the row's dual, whatever the row's sign flip.
    sol.duals.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) sol.duals[i] = -reduced_[n_ + i];
    return sol;
  }

 private:
  static constexpr std::size_t kNonbasic = static_cast<std::size_t>(-1);

  double& cell(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double cell(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }

  void set_basic(std::size_t row, std::size_t var) {
    basis_[row] = var;
    row_of_[var] = row;
  }

  bool fixed(std::size_t j) const { return upper_[j] <= 0.0; }

  void price(const std::vector<double>& cost) {
    reduced_ = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) reduced_[j] -= cb * cell(i, j);
    }
    for (std::size_t i = 0; i < m_; ++i) reduced_[basis_[i]] = 0.0;
  }

  std::size_t choose_entering(bool bland) const {
    std::size_t best = kNonbasic;
    double best_score = 0.0;
    for (std::size_t j = 0; j < width_; ++j) {
      if (row_of_[j] != kNonbasic || fixed(j)) continue;
      const double d = reduced_[j];
      const bool improving = at_upper_[j] ? d < -opt_.tolerance : d > opt_.tolerance;
      if (!improving) continue;
      if (bland) return j;
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = j;
      }
    }
    return best;
  }

  LpStatus optimize(const std::vector<double>& cost) {
    price(cost);
    std::size_t degenerate_run = 0;
    bool bland = false;
    const std::size_t bland_after = 5 * (m_ + n_);
    while (true) {
      if (iterations_ >= opt_.max_iterations) return LpStatus::iteration_limit;
      const std::size_t q = choose_entering(bland);
      if (q == kNonbasic) return LpStatus::optimal;
      ++iterations_;
      const double dir = at_upper_[q] ? -1.0 : 1.0;

      // Ratio test: the entering variable moves by t in direction `dir`; basic row i
      // changes at rate rate_i = -dir * T[i][q].
      double step = upper_[q];  // bound flip distance
      std::size_t leave_row = kNonbasic;
      bool leave_to_upper = false;
      double leave_pivot = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = cell(i, q);
        if (std::abs(alpha) <= kPivotTol) continue;
        const double rate = -dir * alpha;
        const std::size_t var = basis_[i];
        double limit;
        bool to_upper;
        if (rate < 0.0) {
          limit = std::max(0.0, xb_[i]) / -rate;
          to_upper = false;
        } else if (upper_[var] < kInf) {
          limit = std::max(0.0, upper_[var] - xb_[i]) / rate;
          to_upper = true;
        } else {
          continue;
        }
        // Near-ties between rows: Bland takes the lowest variable index, otherwise the
        // largest pivot. A tie with the bound flip keeps the flip.
        bool take = false;
        if (limit < step - opt_.tolerance) {
          take = true;
        } else if (limit <= step + opt_.tolerance && leave_row != kNonbasic) {
          take = bland ? var < basis_[leave_row] : std::abs(alpha) > std::abs(leave_pivot);
        }
        if (take) {
          step = std::min(step, limit);
          leave_row = i;
          leave_to_upper = to_upper;
          leave_pivot = alpha;
        }
      }
      if (leave_row == kNonbasic && step == kInf) return LpStatus::unbounded;

      degenerate_run = step <= opt_.tolerance ? degenerate_run + 1 : 0;
      if (degenerate_run > bland_after) bland = true;

      for (std::size_t i = 0; i < m_; ++i) xb_[i] -= dir * cell(i, q) * step;

      if (leave_row == kNonbasic) {
        at_upper_[q] = !at_upper_[q];
        continue;
      }
      const double entering_value = (at_upper_[q] ? upper_[q] : 0.0) + dir * step;
      const std::size_t leaving = basis_[leave_row];
      row_of_[leaving] = kNonbasic;
      at_upper_[leaving] = leave_to_upper;
      at_upper_[q] = false;
      set_basic(leave_row, q);
      xb_[leave_row] = entering_value;
      pivot(leave_row, q);
    }
  }

  void pivot(std::size_t r, std::size_t q) {
    double* prow = &t_[r * width_];
    const double inv = 1.0 / prow[q];
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * width_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double dq = reduced_[q];
    if (dq != 0.0) {
      for (std::size_t j = 0; j < width_; ++j) reduced_[j] -= dq * prow[j];
      reduced_[q] = 0.0;
    }
  }

  std::size_t m_, n_, width_ = 0;
  SimplexOptions opt_;
  std::vector<std::size_t> artificial_rows_;
  std::vector<double> t_;
  std::vector<double> upper_;
  std::vector<bool> at_upper_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> row_of_;
  std::vector<double> xb_;
  std::vector<double> reduced_;
  std::size_t iterations_ = 0;
};

}  // namespace

LpSolution simplex(const LpProblem& problem, const SimplexOptions& options) {
  const auto& p = problem;
  if (p.objective.size() != p.cols || p.upper.size() != p.cols || p.rhs.size() != p.rows ||
      p.matrix.size() != p.rows * p.cols)
    throw DimensionError("simplex: inconsistent problem dimensions");
  for (double u : p.upper)
    if (u < 0.0) throw ContractError("simplex: variable upper bounds must be non-negative");
  Tableau tableau(p, options);
  return tableau.run(p);
}

LpProblem relaxation_problem(const AuctionInstance& instance) {
  LpProblem p;
  p.rows = instance.num_items();
  p.cols = instance.num_bids();
  p.objective.resize(p.cols);
  p.matrix.assign(p.rows * p.cols, 0.0);
  p.rhs.resize(p.rows);
  p.upper.assign(p.cols, 1.0);
  for (std::size_t m = 0; m < p.cols; ++m) {
    p.objective[m] = instance.bids[m].price;
    for (std::size_t n = 0; n < p.rows; ++n) p.at(n, m) = instance.bids[m].demand[n];
  }
  for (std::size_t n = 0; n < p.rows; ++n) p.rhs[n] = instance.items[n].units;
  return p;
}

LpSolution solve_lp_relaxation(const AuctionInstance& instance) {
  return simplex(relaxation_problem(instance));
}

LpSolution solve_lp_relaxation(const AuctionInstance& instance, std::span<const std::size_t> bids,
                               std::span<const int> capacity) {
  LpProblem p;
  p.rows = instance.num_items();
  p.cols = bids.size();
  p.objective.resize(p.cols);
  p.matrix.assign(p.rows * p.cols, 0.0);
  p.rhs.assign(capacity.begin(), capacity.end());
  p.upper.assign(p.cols, 1.0);
  for (std::size_t k = 0; k < bids.size(); ++k) {
    const Bid& bid = instance.bids[bids[k]];
    p.objective[k] = bid.price;
    for (std::size_t n = 0; n < p.rows; ++n) p.at(n, k) = bid.demand[n];
  }
  return simplex(p);
}

}  // namespace wdp
