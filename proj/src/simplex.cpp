/*
Copyright 2026 the mmsched authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "mmsched/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmsched {

namespace {

// Dense inverse by Gauss-Jordan with partial pivoting. a is column-major
// m x m and left untouched; returns row-major inverse. Throws on pivots
// smaller than `tiny` relative to the matrix scale.
std::vector<double> invert(const std::vector<double>& a, int m) {
  double scale = 0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0) throw Error(ErrorCode::SingularBasis, "zero basis");
  const double tiny = 1e-12 * scale;

  // work = [A | I] as rows.
  std::vector<double> work(m * 2 * m, 0.0);
  auto at = [&](int r, int c) -> double& { return work[r * 2 * m + c]; };
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) at(r, c) = a[c * m + r];
    at(r, m + r) = 1.0;
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
    if (std::abs(at(piv, col)) < tiny)
      throw Error(ErrorCode::SingularBasis,
                  "pivot " + std::to_string(col) + " below tolerance");
    if (piv != col)
      for (int c = 0; c < 2 * m; ++c) std::swap(at(piv, c), at(col, c));
    double inv = 1.0 / at(col, col);
    for (int c = 0; c < 2 * m; ++c) at(col, c) *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      double f = at(r, col);
      if (f == 0) continue;
      for (int c = 0; c < 2 * m; ++c) at(r, c) -= f * at(col, c);
    }
  }
  std::vector<double> out(m * m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) out[r * m + c] = at(r, m + c);
  return out;
}

}  // namespace

SimplexState::SimplexState(std::vector<ColumnDescriptor> cols,
                           std::vector<std::vector<double>> basis_columns,
                           std::vector<double> costs, std::vector<double> rhs,
                           SimplexTolerances tol)
    : m_((int)rhs.size()),
      tol_(tol),
      cols_(std::move(cols)),
      fb_(std::move(costs)),
      g_(std::move(rhs)) {
  if ((int)cols_.size() != m_ || (int)basis_columns.size() != m_ ||
      (int)fb_.size() != m_)
    throw Error(ErrorCode::BadInput, "basis pieces disagree on size");
  if (tol_.bland_after <= 0) tol_.bland_after = 3 * m_;
  b_.assign(m_ * m_, 0.0);
  for (int c = 0; c < m_; ++c) {
    if ((int)basis_columns[c].size() != m_)
      throw Error(ErrorCode::BadInput, "basis column has wrong length");
    for (int r = 0; r < m_; ++r) b_[c * m_ + r] = basis_columns[c][r];
  }
  serial_.resize(m_);
  for (int c = 0; c < m_; ++c) serial_[c] = next_serial_++;
  refactorize();
  --refactorizations_;  // the constructor's factorization is not an event
}

double SimplexState::objective() const {
  double s = 0;
  for (int i = 0; i < m_; ++i) s += fb_[i] * xb_[i];
  return s;
}

std::vector<double> SimplexState::dual_variables() const {
  std::vector<double> p(m_, 0.0);
  for (int j = 0; j < m_; ++j) {
    double s = 0;
    for (int i = 0; i < m_; ++i) s += fb_[i] * binv_[i * m_ + j];
    p[j] = s;
  }
  return p;
}

std::vector<double> SimplexState::ftran(const std::vector<double>& u) const {
  if ((int)u.size() != m_)
    throw Error(ErrorCode::BadInput, "column has wrong length");
  std::vector<double> d(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    double s = 0;
    for (int j = 0; j < m_; ++j) s += binv_[i * m_ + j] * u[j];
    d[i] = s;
  }
  return d;
}

double SimplexState::residual() const {
  double worst = 0;
  for (int r = 0; r < m_; ++r) {
    double s = 0;
    for (int c = 0; c < m_; ++c) s += b_[c * m_ + r] * xb_[c];
    worst = std::max(worst, std::abs(s - g_[r]));
  }
  return worst;
}

void SimplexState::recompute_xb() {
  xb_.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    double s = 0;
    for (int j = 0; j < m_; ++j) s += binv_[i * m_ + j] * g_[j];
    xb_[i] = s;
  }
}

void SimplexState::refactorize() {
  binv_ = invert(b_, m_);
  recompute_xb();
  pivots_since_refactor_ = 0;
  ++refactorizations_;
}

void SimplexState::set_costs(std::vector<double> costs) {
  if ((int)costs.size() != m_)
    throw Error(ErrorCode::BadInput, "costs have wrong length");
  fb_ = std::move(costs);
}

void SimplexState::set_rhs(std::vector<double> rhs) {
  if ((int)rhs.size() != m_)
    throw Error(ErrorCode::BadInput, "rhs has wrong length");
  g_ = std::move(rhs);
  recompute_xb();
}

void SimplexState::retag(int pos, const ColumnDescriptor& desc, double cost) {
  if (pos < 0 || pos >= m_) throw Error(ErrorCode::BadInput, "bad position");
  cols_[pos] = desc;
  fb_[pos] = cost;
}

SimplexState::PivotResult SimplexState::pivot(
    const ColumnDescriptor& desc, const std::vector<double>& column,
    double cost) {
  if (pivots_ >= tol_.max_pivots)
    throw Error(ErrorCode::Cycling,
                "pivot cap " + std::to_string(tol_.max_pivots));
  std::vector<double> d = ftran(column);

  // Min-ratio test over rows with a meaningfully positive pivot entry. Ties
  // go to the lowest basis position, or -- once a long degenerate streak
  // flips bland_active_ -- to the column that entered the basis earliest.
  int leave = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m_; ++i) {
    if (d[i] <= tol_.feas) continue;
    double ratio = std::max(xb_[i], 0.0) / d[i];
    bool better = ratio < best - 1e-15;
    bool tie = !better && ratio <= best + 1e-15;
    if (better || (tie && bland_active_ && leave >= 0 &&
                   serial_[i] < serial_[leave])) {
      best = ratio;
      leave = i;
    }
  }
  if (leave < 0)
    throw Error(ErrorCode::Unbounded, "no blocking row in ratio test");

  double step = best;
  for (int i = 0; i < m_; ++i) xb_[i] -= step * d[i];
  xb_[leave] = step;

  // Product-form update of the explicit inverse.
  double piv = d[leave];
  double inv = 1.0 / piv;
  for (int j = 0; j < m_; ++j) binv_[leave * m_ + j] *= inv;
  for (int i = 0; i < m_; ++i) {
    if (i == leave) continue;
    double f = d[i];
    if (f == 0) continue;
    for (int j = 0; j < m_; ++j)
      binv_[i * m_ + j] -= f * binv_[leave * m_ + j];
  }
  for (int r = 0; r < m_; ++r) b_[leave * m_ + r] = column[r];
  cols_[leave] = desc;
  fb_[leave] = cost;
  serial_[leave] = next_serial_++;

  ++pivots_;
  ++pivots_since_refactor_;
  bool degen = step <= 1e-12;
  degenerate_streak_ = degen ? degenerate_streak_ + 1 : 0;
  if (degenerate_streak_ > tol_.bland_after) bland_active_ = true;
  if (!degen) bland_active_ = false;

  if (pivots_since_refactor_ >= tol_.refactor_every ||
      residual() > tol_.residual)
    refactorize();

  double low = 0;
  for (int i = 0; i < m_; ++i) low = std::min(low, xb_[i]);
  if (low < -1e-7) {
    refactorize();
    for (int i = 0; i < m_; ++i) low = std::min(low, xb_[i]);
    if (low < -1e-7)
      throw Error(ErrorCode::NumericFailure,
                  "basic solution went negative: " + std::to_string(low));
  }
  return {leave, step, degen};
}

// ---------------------------------------------------------------------------
// Dense two-phase tableau simplex.

namespace {

class Tableau {
 public:
  Tableau(const DenseLp& lp, const SimplexTolerances& tol) : tol_(tol) {
    m_ = (int)lp.rows.size();
    n_ = (int)lp.objective.size();
    if ((int)lp.senses.size() != m_ || (int)lp.rhs.size() != m_)
      throw Error(ErrorCode::BadInput, "LP pieces disagree on size");
    for (const auto& row : lp.rows)
      if ((int)row.size() != n_)
        throw Error(ErrorCode::BadInput, "LP row has wrong length");
    if (tol_.bland_after <= 0) tol_.bland_after = 3 * (m_ + 1);

    // Normalize to rhs >= 0, remembering flips for dual reporting.
    flipped_.assign(m_, false);
    std::vector<std::vector<double>> rows = lp.rows;
    std::vector<RowSense> senses = lp.senses;
    rhs_ = lp.rhs;
    for (int i = 0; i < m_; ++i) {
      if (rhs_[i] < 0) {
        flipped_[i] = true;
        rhs_[i] = -rhs_[i];
        for (double& v : rows[i]) v = -v;
        if (senses[i] == RowSense::Le)
          senses[i] = RowSense::Ge;
        else if (senses[i] == RowSense::Ge)
          senses[i] = RowSense::Le;
      }
    }

    // Column layout: structural | slack/surplus | identity seeds.
    // Every row gets an identity-seed column (slack for Le, artificial for
    // Ge/Eq); artificials are banned from re-entering after phase 1 but
    // their tableau columns stay updated, exposing B^{-1} for duals.
    slack_col_.assign(m_, -1);
    seed_col_.assign(m_, -1);
    int cols = n_;
    for (int i = 0; i < m_; ++i)
      if (senses[i] == RowSense::Ge) slack_col_[i] = cols++;  // surplus
    for (int i = 0; i < m_; ++i) seed_col_[i] = cols++;
    ncols_ = cols;
    artificial_.assign(ncols_, false);

    t_.assign(m_, std::vector<double>(ncols_ + 1, 0.0));
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) t_[i][j] = rows[i][j];
      if (slack_col_[i] >= 0) t_[i][slack_col_[i]] = -1.0;
      t_[i][seed_col_[i]] = 1.0;
      if (senses[i] != RowSense::Le) artificial_[seed_col_[i]] = true;
      t_[i][ncols_] = rhs_[i];
    }
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = seed_col_[i];

    // Phase-2 cost row (internal minimization) and phase-1 cost row.
    min_cost_.assign(ncols_, 0.0);
    for (int j = 0; j < n_; ++j)
      min_cost_[j] = lp.maximize ? -lp.objective[j] : lp.objective[j];
    phase1_cost_.assign(ncols_, 0.0);
    for (int j = 0; j < ncols_; ++j)
      if (artificial_[j]) phase1_cost_[j] = 1.0;

    maximize_ = lp.maximize;
  }

  LpSolution solve() {
    LpSolution sol;
    // Phase 1: minimize total artificial value.
    if (has_artificials()) {
      run(phase1_cost_, /*ban_artificials=*/false, sol);
      double inf = phase_objective(phase1_cost_);
      if (inf > 1e-7) {
        sol.status = LpStatus::Infeasible;
        return sol;
      }
      pivot_out_artificials();
    }
    run(min_cost_, /*ban_artificials=*/true, sol);
    if (sol.status == LpStatus::Unbounded) return sol;

    sol.status = LpStatus::Optimal;
    sol.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) sol.x[basis_[i]] = t_[i][ncols_];
    double obj = 0;
    for (int j = 0; j < n_; ++j)
      obj += (maximize_ ? -min_cost_[j] : min_cost_[j]) * sol.x[j];
    sol.objective = obj;

    // Duals out of the seed columns: y = c_B B^{-1}; undo flips/sense.
    sol.duals.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double y = 0;
      for (int r = 0; r < m_; ++r)
        y += min_cost_[basis_[r]] * t_[r][seed_col_[i]];
      if (flipped_[i]) y = -y;
      sol.duals[i] = maximize_ ? -y : y;
    }
    return sol;
  }

 private:
  bool has_artificials() const {
    for (int i = 0; i < m_; ++i)
      if (artificial_[seed_col_[i]]) return true;
    return false;
  }

  double phase_objective(const std::vector<double>& cost) const {
    double s = 0;
    for (int i = 0; i < m_; ++i) s += cost[basis_[i]] * t_[i][ncols_];
    return s;
  }

  // Reduced costs for `cost`: rc_j = cost_j - y . col_j with y = c_B B^{-1};
  // computed directly from the updated tableau.
  std::vector<double> reduced_costs(const std::vector<double>& cost) const {
    std::vector<double> rc = cost;
    for (int i = 0; i < m_; ++i) {
      double cb = cost[basis_[i]];
      if (cb == 0) continue;
      const std::vector<double>& row = t_[i];
      for (int j = 0; j < ncols_; ++j) rc[j] -= cb * row[j];
    }
    return rc;
  }

  void do_pivot(int row, int col) {
    std::vector<double>& prow = t_[row];
    double inv = 1.0 / prow[col];
    for (double& v : prow) v *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      double f = t_[i][col];
      if (f == 0) continue;
      std::vector<double>& r = t_[i];
      for (int j = 0; j <= ncols_; ++j) r[j] -= f * prow[j];
    }
    basis_[row] = col;
  }

  void run(const std::vector<double>& cost, bool ban_artificials,
           LpSolution& sol) {
    int degen_streak = 0;
    bool bland = false;
    for (;;) {
      if (sol.iterations >= tol_.max_pivots)
        throw Error(ErrorCode::Cycling,
                    "pivot cap " + std::to_string(tol_.max_pivots));
      std::vector<double> rc = reduced_costs(cost);
      int enter = -1;
      if (!bland) {
        double most = -tol_.opt;
        for (int j = 0; j < ncols_; ++j) {
          if (ban_artificials && artificial_[j]) continue;
          if (rc[j] < most) {
            most = rc[j];
            enter = j;
          }
        }
      } else {
        for (int j = 0; j < ncols_; ++j) {
          if (ban_artificials && artificial_[j]) continue;
          if (rc[j] < -tol_.opt) {
            enter = j;
            break;
          }
        }
      }
      if (enter < 0) return;  // optimal for this phase

      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (t_[i][enter] <= tol_.feas) continue;
        double ratio = t_[i][ncols_] / t_[i][enter];
        if (ratio < best - 1e-15) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) {
        sol.status = LpStatus::Unbounded;
        return;
      }
      do_pivot(leave, enter);
      ++sol.iterations;
      degen_streak = best <= 1e-12 ? degen_streak + 1 : 0;
      bland = degen_streak > tol_.bland_after;
    }
  }

  // After phase 1 some zero-valued artificials may linger in the basis;
  // replace them by any usable column so phase 2 never touches them. Rows
  // with no replacement are redundant and harmless: the artificial stays
  // pinned at zero because it is banned from growing.
  void pivot_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (!artificial_[basis_[i]]) continue;
      int col = -1;
      for (int j = 0; j < ncols_; ++j) {
        if (artificial_[j]) continue;
        if (std::abs(t_[i][j]) > 1e-7) {
          col = j;
          break;
        }
      }
      if (col >= 0) do_pivot(i, col);
    }
  }

  SimplexTolerances tol_;
  int m_ = 0, n_ = 0, ncols_ = 0;
  bool maximize_ = true;
  std::vector<std::vector<double>> t_;
  std::vector<int> basis_;
  std::vector<int> slack_col_;
  std::vector<int> seed_col_;
  std::vector<bool> artificial_;
  std::vector<bool> flipped_;
  std::vector<double> rhs_;
  std::vector<double> min_cost_;
  std::vector<double> phase1_cost_;
};

}  // namespace

LpSolution solve_dense_lp(const DenseLp& lp, SimplexTolerances tol) {
  Tableau t(lp, tol);
  return t.solve();
}

}  // namespace mmsched
