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

#include "mmsched/core.hpp"
#include "mmsched/simplex.hpp"

namespace mmsched {

struct SolveLog {
  int pivots = 0;             // simplex pivots, both phases
  int refactorizations = 0;
  int columns_generated = 0;  // matching columns brought into the basis
  double eta1 = 0;            // final pricing values (schedule columns,
  double eta2 = 0;            //  rate column, surplus columns)
  double eta3 = 0;
  double wall_ms = 0;
};

struct MtfsResult {
  double theta = 0;          // max-min per-destination rate (LP optimum)
  double network_tput = 0;   // total destination rate of `schedule`
  Schedule schedule;         // slots index links of `expanded`
  Network expanded;
  ThroughputVector throughput;  // per destination, from `schedule`
  SolveLog log;
};

// Column of the node-rate matrix for one matching, restricted to `rows`
// (pre-expansion node ids, in the given order): entry r sums +capacity for
// matching links entering rows[r] and -capacity for links leaving it,
// aggregating expansion copies.
std::vector<double> column_of_matching(const Network& net, const Matching& m,
                                       const std::vector<int>& rows);

// Feasible starter schedule on an expanded network: a BFS tree from the
// first eNB copy (ascending-id neighbour order, one representative link
// copy per tree edge), with link times theta0 * n_e / cap_e chosen so every
// destination below receives exactly theta0 = 1 / sum(n_e / cap_e). n_e
// counts destinations (UEs when present, else mmBSs) in the subtree under
// link e; links serving no destination get zero time and stay only to keep
// the starting basis square.
struct InitialSchedule {
  std::vector<Matching> slots;   // singleton matchings, expanded link ids
  std::vector<double> durations;
  double theta0 = 0;
};
InitialSchedule initial_schedule(const Network& expanded);

// Fairness phase: maximizes the worst mmBS rate theta by column generation
// (exact matching pricing), returning the optimal schedule of at most W+1
// non-idle slots. Rejects networks with UEs (use solve_access) and
// disconnected networks (Error(Disconnected)).
MtfsResult solve_maxmin(const Network& net);

// Fairness phase followed by the throughput phase: among all schedules
// keeping every mmBS at theta or better, maximizes total eNB egress.
MtfsResult solve_mtfs(const Network& net);

// Two-call form: `theta` must be the value solve_maxmin computes for `net`
// (checked to 1e-6, Error(BadInput) otherwise).
MtfsResult solve_mtfs(const Network& net, double theta);

// Fairness across UE rates with every mmBS forced to pure relaying
// (equality rows). Requires at least one UE (Error(NoUes)), all of them
// reachable (Error(UnreachableUe)).
MtfsResult solve_access(const Network& net);

// Access fairness followed by the throughput phase.
MtfsResult solve_access_mtfs(const Network& net);

}  // namespace mmsched
