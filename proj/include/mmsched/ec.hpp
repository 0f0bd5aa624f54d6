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

namespace mmsched {

enum class EcVariant {
  SingleRf,  // backhaul, one chain per mmBS: matching-count constraints
  MultiRf,   // backhaul, per-node chain budgets (simpler necessary set)
  Access,    // UE destinations, mmBSs forced to pure relaying
};

struct EcConfig {
  double granularity = 0.01;  // slot quantum t_g, in (0, 1]
  EcVariant variant = EcVariant::SingleRf;
  double drop_tol = 1e-9;     // link times below this are zeroed
};

// Relaxed link-time solutions. theta is the relaxation optimum; t has one
// active-time entry per pre-expansion link.
struct EcLinkTime {
  double theta = 0;
  std::vector<double> t;
  bool rf_clamped = false;  // eNB budget used min(R, #eNB links)
};

// Maximize the worst destination rate over the necessary constraint set
// (per-node time budgets, concurrent-pair accounting, eNB chain budget).
EcLinkTime ec_maxmin_link_time(const Network& net, const EcConfig& cfg);

// At fixed theta, maximize total eNB egress, then -- tie held -- minimize
// total link time. The minimization pass provably removes directed cycles
// from the active-link graph, which the structural degree/size bounds
// assume.
EcLinkTime ec_tput_link_time(const Network& net, double theta,
                             const EcConfig& cfg);

// Multigraph whose edges are quantized copies of active links: one copy per
// full quantum plus a remainder copy, so copy durations sum exactly to the
// link time and every copy lasts at most t_g.
struct MultigraphEdge {
  int u = 0, v = 0;      // expanded node ids (undirected for coloring)
  double duration = 0;   // in (0, t_g]
  int link = -1;         // expanded link id
};

struct ColoringMultigraph {
  int num_vertices = 0;
  std::vector<MultigraphEdge> edges;
  int max_degree() const;
};

struct Coloring {
  std::vector<int> color;  // per edge, dense in [0, kappa)
  int kappa = 0;
};

// Proper edge coloring with kappa <= 3 * ceil(max_degree / 2): Euler
// orientation (in/out degrees <= ceil(deg/2)), exact bipartite coloring of
// the tail/head graph, then <= 3 colors per class (classes are unions of
// paths and cycles). Deterministic.
Coloring color_multigraph(const ColoringMultigraph& g);

struct EcSchedule {
  Schedule schedule;  // on `expanded`; idle remainder keeps the sum at 1
  Network expanded;
  ColoringMultigraph multigraph;
  int kappa = 0;
  double scale = 1.0;  // 1/(kappa t_g) when kappa t_g > 1, else 1
};

// Turns a feasible link-time vector into a schedule: expand, quantize into
// the multigraph, color, emit one slot run per color (decomposed so each
// copy is active exactly its duration), and rescale when the colored frame
// overruns.
EcSchedule ec_schedule(const Network& net, const std::vector<double>& t,
                       const EcConfig& cfg);

// Reporting bundle for one full approximate solve.
struct EcRun {
  double theta_relaxed = 0;
  double theta_realized = 0;  // min destination rate of the schedule
  double network_tput = 0;
  int kappa = 0;
  int delta_gm = 0;           // multigraph max degree
  long long edges_gm = 0;
  bool rf_clamped = false;
  Schedule schedule;
  Network expanded;
  ThroughputVector throughput;
  double wall_ms = 0;
};

EcRun run_ec(const Network& net, const EcConfig& cfg);

// Closed-form guarantees (single-RF backhaul): multigraph degree/size
// ceilings and the worst-case realized-rate floor relative to a reference
// rate (pass the exact optimum to get the end-to-end guarantee).
struct EcBounds {
  double delta_bound = 0;   // W + R + 1/t_g - 1
  double edges_bound = 0;   // (W^2 + (2R-1)W + (W+R)/t_g) / 2
  int vm_bound = 0;         // W + R
  double theta_floor = 0;   // 2/3 * theta_ref / ((W+R+1) t_g + 1)
};

EcBounds ec_bounds(const Network& net, double theta_ref, const EcConfig& cfg);

}  // namespace mmsched
