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

#pragma once

#include <vector>

#include "mmsched/core.hpp"

namespace mmsched {

struct SimplexTolerances {
  double feas = 1e-9;      // primal feasibility / ratio-test pivot threshold
  double opt = 1e-9;       // reduced-cost optimality margin
  double residual = 1e-8;  // basis residual that forces refactorization
  int refactor_every = 50;
  // After this many consecutive degenerate pivots, ratio-test ties switch
  // from lowest-position to earliest-entered column. <= 0 picks 3 * rows.
  int bland_after = 0;
  int max_pivots = 200000;
};

// What a basic column of the scheduling LP stands for. The engine needs this
// to rebuild costs on the phase switch and to read the schedule out of the
// final basis.
struct ColumnDescriptor {
  enum class Kind { MatchingCol, Theta, Surplus, Artificial };
  Kind kind = Kind::MatchingCol;
  Matching matching;     // Kind::MatchingCol: the slot's link set
  int surplus_row = -1;  // Kind::Surplus: which row it relaxes

  bool operator==(const ColumnDescriptor&) const = default;
};

// Basis-only revised simplex state: the basis matrix B (m x m), a dense
// explicit inverse, basic costs f_B and rhs g. Supports pricing (duals),
// column pivots with a min-ratio test, and periodic refactorization. The
// column-generation driver supplies entering columns; this class never
// chooses them.
class SimplexState {
 public:
  SimplexState(std::vector<ColumnDescriptor> cols,
               std::vector<std::vector<double>> basis_columns,
               std::vector<double> costs, std::vector<double> rhs,
               SimplexTolerances tol = {});

  int rows() const { return m_; }
  const std::vector<double>& primal() const { return xb_; }
  const std::vector<ColumnDescriptor>& columns() const { return cols_; }
  double objective() const;

  // p with p^T B = f_B^T; reduced cost of an entering column (u, f) is
  // f - p . u.
  std::vector<double> dual_variables() const;

  // B^{-1} u.
  std::vector<double> ftran(const std::vector<double>& u) const;

  struct PivotResult {
    int leaving = -1;    // basis position replaced
    double step = 0;     // ratio-test step
    bool degenerate = false;
  };

  // Brings (desc, column, cost) into the basis. Throws Error(Unbounded) when
  // the ratio test finds no blocking row, Error(Cycling) past the pivot cap,
  // Error(SingularBasis)/Error(NumericFailure) on numeric breakdown.
  PivotResult pivot(const ColumnDescriptor& desc,
                    const std::vector<double>& column, double cost);

  // Phase switch support: swap costs/rhs wholesale, or retag one basic
  // column (same numeric values, new meaning/cost).
  void set_costs(std::vector<double> costs);
  void set_rhs(std::vector<double> rhs);
  void retag(int pos, const ColumnDescriptor& desc, double cost);

  // Rebuilds the dense inverse from B and recomputes x_B = B^{-1} g.
  void refactorize();

  // max_i |(B x_B - g)_i|: drift of the incrementally updated solution.
  double residual() const;

  int pivots() const { return pivots_; }
  int refactorizations() const { return refactorizations_; }
  bool bland_active() const { return bland_active_; }

 private:
  void recompute_xb();

  int m_;
  SimplexTolerances tol_;
  std::vector<ColumnDescriptor> cols_;
  std::vector<double> b_;     // basis matrix, column-major m x m
  std::vector<double> binv_;  // explicit inverse, row-major m x m
  std::vector<double> fb_;    // basic costs
  std::vector<double> g_;     // rhs
  std::vector<double> xb_;    // basic solution
  std::vector<long> serial_;  // entry order, for the tie-break switch
  long next_serial_ = 0;
  int pivots_ = 0;
  int pivots_since_refactor_ = 0;
  int refactorizations_ = 0;
  int degenerate_streak_ = 0;
  bool bland_active_ = false;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

enum class RowSense { Le, Ge, Eq };

// Dense LP over x >= 0:  max/min objective . x  s.t.  rows[i] . x  (sense_i)
// rhs[i].
struct DenseLp {
  bool maximize = true;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> x;
  double objective = 0;
  // Row duals normalized so that duals . rhs equals the reported objective
  // at optimality (strong duality), in the caller's row/sense orientation.
  std::vector<double> duals;
  int iterations = 0;
};

// Self-contained two-phase tableau simplex: Dantzig entering rule with a
// switch to Bland's rule after a degenerate streak, lowest-index ratio ties,
// hard pivot cap (Error(Cycling)). Solutions are optimal within tol.feas /
// tol.opt.
LpSolution solve_dense_lp(const DenseLp& lp, SimplexTolerances tol = {});

}  // namespace mmsched
