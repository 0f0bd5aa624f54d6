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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmsched {

// Feasibility tolerance used project-wide for schedule sums, flow balance and
// LP feasibility checks.
inline constexpr double kFeasTol = 1e-9;

enum class ErrorCode {
  BadInput,
  NonMatchingSlot,
  NegativeNetFlow,
  LengthMismatch,
  NoEnbLinks,
  AlreadyExpanded,
  NotExpanded,
  RfLimitViolated,
  Disconnected,
  UnreachableUe,
  NoUes,
  TooLarge,
  SingularBasis,
  Unbounded,
  Infeasible,
  Cycling,
  NumericFailure,
  Outage,
  Io,
};

const char* to_string(ErrorCode code);

// Single exception type for the whole library; `code` distinguishes causes so
// callers/tests can match on them without string parsing.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class NodeRole { Enb, Mmbs, Ue };

const char* to_string(NodeRole role);
NodeRole role_from_string(const std::string& s);

struct Node {
  int id = 0;
  NodeRole role = NodeRole::Mmbs;
  // Number of RF chains, i.e. how many concurrent beams this node can
  // sustain. 1 for everything except the macro station unless stated.
  int rf_chains = 1;
};

// Directed point-to-point link. Capacity is the sustained rate of the beam in
// Gbit/s; links in outage are simply absent from the network.
struct Link {
  int src = 0;
  int dst = 0;
  double cap_gbps = 0.0;
};

// A backhaul/access network. Node ids are dense and 0-based and the macro
// station (eNB) is always id 0. `expanded` marks networks produced by the
// expansion pass, in which every node has exactly one RF chain and the
// super_of / origin_link maps lead back to the pre-expansion network.
struct Network {
  std::vector<Node> nodes;
  std::vector<Link> links;
  bool expanded = false;

  // Expansion bookkeeping; identity-sized only when expanded == true.
  std::vector<int> super_of;     // expanded node id -> original node id
  std::vector<int> origin_link;  // expanded link id -> original link id
  int base_node_count = 0;       // node count before expansion
  int base_link_count = 0;       // link count before expansion

  int enb_id() const { return 0; }
  std::vector<int> mmbs_ids() const;
  std::vector<int> ue_ids() const;
  bool has_ues() const;
  // Number of outgoing / incoming links per node, and link index lists.
  std::vector<std::vector<int>> out_links() const;
  std::vector<std::vector<int>> in_links() const;
};

// Validates structural invariants: dense ids, exactly one eNB at id 0 (one
// eNB super node if expanded), src != dst, positive capacities, rf_chains
// >= 1, and no duplicate (src, dst) pair among pre-expansion links. Throws
// Error(BadInput) on violation.
void validate(const Network& net);

// True when every mmBS is reachable from the eNB along directed links.
bool check_connectivity(const Network& net);

// True when every node (mmBS and UE alike) is reachable from the eNB.
bool all_reachable(const Network& net);

// A matching is a set of link indices, sorted ascending, such that no two
// member links share an endpoint in the graph they index into. The empty set
// (idle) is a valid matching.
using Matching = std::vector<int>;

bool is_matching(const Network& net, const Matching& links);

struct Slot {
  Matching links;       // link indices into the owning network
  double duration = 0;  // fraction of the scheduling frame, > 0
};

// A schedule activates one matching per slot; durations sum to 1 within
// kFeasTol. A trailing empty slot makes deliberate idle time explicit.
struct Schedule {
  std::vector<Slot> slots;

  double total_duration() const;
  int non_idle_slots() const;
};

// Fraction of the frame each link is active, indexed like net.links.
using LinkTimeVector = std::vector<double>;

// Per-destination long-run average rates in Gbit/s. `nodes[i]` is the
// (pre-expansion) node id whose rate is `gbps[i]`.
struct ThroughputVector {
  std::vector<int> nodes;
  std::vector<double> gbps;

  double min() const;
  double total() const;
};

struct VerifyIssue {
  ErrorCode code;
  int slot = -1;  // offending slot index, -1 when not slot-specific
  std::string detail;
};

struct VerifyReport {
  bool ok = true;
  std::vector<VerifyIssue> issues;
};

// Checks that every slot is a valid matching of `net`, every duration is
// > 0, and the durations sum to 1 within kFeasTol. Reports all violations
// instead of throwing.
VerifyReport verify_schedule(const Network& net, const Schedule& sched);

// Long-run average net rate per destination node under `sched`. Destinations
// are the UEs when the network has any, otherwise the mmBSs; rates aggregate
// over expansion copies when `net` is expanded. Relay nodes (mmBSs when UEs
// exist, all mmBSs otherwise) must not end up with negative net flow beyond
// kFeasTol -- that signals an infeasible relay schedule and throws
// Error(NegativeNetFlow). Slots must be matchings (Error(NonMatchingSlot)).
ThroughputVector throughput_of_schedule(const Network& net,
                                        const Schedule& sched);

// Fraction of the frame each link is active; aggregates expansion copies
// into pre-expansion link indices when `net` is expanded.
LinkTimeVector link_time_of_schedule(const Network& net,
                                     const Schedule& sched);

// Upper bound on network throughput if fairness is ignored: the eNB beams
// from min(R, L) RF chains to the L distinct first-hop neighbours with the
// largest capacities, all of the time. Pre-expansion networks only. Throws
// Error(NoEnbLinks) if the eNB has no outgoing link.
double max_tput_baseline(const Network& net);

// JSON (de)serialization. Schemas carry a "version" field; see README.
std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);
std::string schedule_to_json(const Schedule& sched);
Schedule schedule_from_json(const std::string& text);

Network load_network_file(const std::string& path);
Schedule load_schedule_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& text);

}  // namespace mmsched
