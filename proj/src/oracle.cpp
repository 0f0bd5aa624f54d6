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

#include "mmsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmsched/expansion.hpp"
#include "mmsched/matching.hpp"
#include "mmsched/simplex.hpp"

namespace mmsched {

namespace {

struct Enumerated {
  Network expanded;
  std::vector<Matching> matchings;
  // Per matching and per interesting node (pre-expansion id): net rate into
  // the node while that matching is active.
  std::vector<std::vector<double>> net_rate;
  std::vector<double> egress;  // eNB egress rate per matching
  std::vector<int> dests;      // pre-expansion destination ids
  std::vector<int> relays;     // pre-expansion pure-relay ids (access only)
};

Enumerated enumerate(const Network& net) {
  validate(net);
  if (net.expanded)
    throw Error(ErrorCode::AlreadyExpanded,
                "pass the pre-expansion network to the reference solver");
  Enumerated en;
  if (net.has_ues()) {
    if (!all_reachable(net)) throw Error(ErrorCode::UnreachableUe, "");
    en.dests = net.ue_ids();
    en.relays = net.mmbs_ids();
  } else {
    if (net.mmbs_ids().empty())
      throw Error(ErrorCode::BadInput, "no destinations to schedule for");
    if (!check_connectivity(net)) throw Error(ErrorCode::Disconnected, "");
    en.dests = net.mmbs_ids();
  }
  en.expanded = expand_nodes(net);

  WeightedGraph g;
  g.num_vertices = static_cast<int>(en.expanded.nodes.size());
  for (const Link& l : en.expanded.links)
    g.edges.push_back({l.src, l.dst, 1.0, 0});
  en.matchings = enumerate_matchings(g);

  // node id -> slot in the per-matching rate vectors
  std::vector<int> node_slot(net.nodes.size(), -1);
  int nslots = 0;
  for (int v : en.dests) node_slot[v] = nslots++;
  for (int v : en.relays) node_slot[v] = nslots++;

  en.net_rate.reserve(en.matchings.size());
  en.egress.reserve(en.matchings.size());
  for (const Matching& m : en.matchings) {
    std::vector<double> rate(nslots, 0.0);
    double egress = 0.0;
    for (int e : m) {
      const Link& l = en.expanded.links[e];
      const int src = en.expanded.super_of[l.src];
      const int dst = en.expanded.super_of[l.dst];
      if (node_slot[dst] >= 0) rate[node_slot[dst]] += l.cap_gbps;
      if (node_slot[src] >= 0) rate[node_slot[src]] -= l.cap_gbps;
      if (src == net.enb_id()) egress += l.cap_gbps;
    }
    en.net_rate.push_back(std::move(rate));
    en.egress.push_back(egress);
  }
  return en;
}

// Common rows: one worst-rate floor per destination (theta subtracted when
// it is a variable), conservation per relay, and the unit frame.
DenseLp base_lp(const Enumerated& en, bool theta_var, double theta_rhs) {
  const int nm = static_cast<int>(en.matchings.size());
  const int nvars = nm + (theta_var ? 1 : 0);
  const int nd = static_cast<int>(en.dests.size());
  const int nr = static_cast<int>(en.relays.size());

  DenseLp lp;
  lp.maximize = true;
  lp.objective.assign(nvars, 0.0);
  for (int d = 0; d < nd; ++d) {
    std::vector<double> row(nvars, 0.0);
    for (int j = 0; j < nm; ++j) row[j] = en.net_rate[j][d];
    if (theta_var) row[nm] = -1.0;
    lp.rows.push_back(std::move(row));
    lp.senses.push_back(RowSense::Ge);
    lp.rhs.push_back(theta_var ? 0.0 : theta_rhs);
  }
  for (int r = 0; r < nr; ++r) {
    // Relays neither source nor sink traffic: equality, matching the
    // production solver's access formulation.
    std::vector<double> row(nvars, 0.0);
    for (int j = 0; j < nm; ++j) row[j] = en.net_rate[j][nd + r];
    lp.rows.push_back(std::move(row));
    lp.senses.push_back(RowSense::Eq);
    lp.rhs.push_back(0.0);
  }
  {
    std::vector<double> row(nvars, 0.0);
    for (int j = 0; j < nm; ++j) row[j] = 1.0;
    lp.rows.push_back(std::move(row));
    lp.senses.push_back(RowSense::Le);  // leftover frame time idles
    lp.rhs.push_back(1.0);
  }
  return lp;
}

LpSolution run_lp(const DenseLp& lp, const char* what) {
  LpSolution sol = solve_dense_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw Error(ErrorCode::NumericFailure, what);
  return sol;
}

}  // namespace

double oracle_maxmin(const Network& net) {
  const Enumerated en = enumerate(net);
  DenseLp lp = base_lp(en, /*theta_var=*/true, 0.0);
  lp.objective.back() = 1.0;
  return std::max(0.0, run_lp(lp, "reference fairness phase").objective);
}

OracleResult oracle_solve(const Network& net) {
  Enumerated en = enumerate(net);
  const int nm = static_cast<int>(en.matchings.size());

  DenseLp fair = base_lp(en, /*theta_var=*/true, 0.0);
  fair.objective.back() = 1.0;
  const double theta =
      std::max(0.0, run_lp(fair, "reference fairness phase").objective);

  // Hold the worst rate at exactly the fairness optimum and maximize eNB
  // egress. Backing theta off by any slack here would let degenerate
  // instances trade a whisker of fairness for disproportionate throughput,
  // drifting away from solvers that pin the rate exactly.
  DenseLp tput = base_lp(en, /*theta_var=*/false, theta);
  tput.objective = en.egress;
  const LpSolution sol = run_lp(tput, "reference throughput phase");

  OracleResult out;
  out.theta = theta;
  out.network_tput = sol.objective;
  out.expanded = std::move(en.expanded);
  out.matchings = std::move(en.matchings);
  out.durations.assign(sol.x.begin(), sol.x.begin() + nm);
  return out;
}

}  // namespace mmsched
