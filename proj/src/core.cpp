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

#include "mmsched/core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mmsched {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadInput: return "bad input";
    case ErrorCode::NonMatchingSlot: return "slot is not a matching";
    case ErrorCode::NegativeNetFlow: return "negative net flow at relay";
    case ErrorCode::LengthMismatch: return "schedule length mismatch";
    case ErrorCode::NoEnbLinks: return "eNB has no outgoing links";
    case ErrorCode::AlreadyExpanded: return "network already expanded";
    case ErrorCode::NotExpanded: return "network not expanded";
    case ErrorCode::RfLimitViolated: return "RF chain limit violated";
    case ErrorCode::Disconnected: return "network is disconnected";
    case ErrorCode::UnreachableUe: return "UE unreachable from eNB";
    case ErrorCode::NoUes: return "network has no UEs";
    case ErrorCode::TooLarge: return "instance too large";
    case ErrorCode::SingularBasis: return "singular basis";
    case ErrorCode::Unbounded: return "unbounded";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Cycling: return "simplex cycling";
    case ErrorCode::NumericFailure: return "numeric failure";
    case ErrorCode::Outage: return "link in outage";
    case ErrorCode::Io: return "io error";
  }
  return "unknown";
}

const char* to_string(NodeRole role) {
  switch (role) {
    case NodeRole::Enb: return "enb";
    case NodeRole::Mmbs: return "mmbs";
    case NodeRole::Ue: return "ue";
  }
  return "unknown";
}

NodeRole role_from_string(const std::string& s) {
  if (s == "enb") return NodeRole::Enb;
  if (s == "mmbs") return NodeRole::Mmbs;
  if (s == "ue") return NodeRole::Ue;
  throw Error(ErrorCode::BadInput, "unknown node role '" + s + "'");
}

std::vector<int> Network::mmbs_ids() const {
  std::vector<int> out;
  for (const Node& n : nodes)
    if (n.role == NodeRole::Mmbs) out.push_back(n.id);
  return out;
}

std::vector<int> Network::ue_ids() const {
  std::vector<int> out;
  for (const Node& n : nodes)
    if (n.role == NodeRole::Ue) out.push_back(n.id);
  return out;
}

bool Network::has_ues() const {
  return std::any_of(nodes.begin(), nodes.end(),
                     [](const Node& n) { return n.role == NodeRole::Ue; });
}

std::vector<std::vector<int>> Network::out_links() const {
  std::vector<std::vector<int>> adj(nodes.size());
  for (size_t e = 0; e < links.size(); ++e) adj[links[e].src].push_back((int)e);
  return adj;
}

std::vector<std::vector<int>> Network::in_links() const {
  std::vector<std::vector<int>> adj(nodes.size());
  for (size_t e = 0; e < links.size(); ++e) adj[links[e].dst].push_back((int)e);
  return adj;
}

void validate(const Network& net) {
  const int n = (int)net.nodes.size();
  if (n == 0) throw Error(ErrorCode::BadInput, "empty network");
  for (int i = 0; i < n; ++i) {
    if (net.nodes[i].id != i)
      throw Error(ErrorCode::BadInput, "node ids must be dense and 0-based");
    if (net.nodes[i].rf_chains < 1)
      throw Error(ErrorCode::BadInput, "rf_chains must be >= 1");
  }
  if (net.expanded) {
    if ((int)net.super_of.size() != n ||
        net.origin_link.size() != net.links.size())
      throw Error(ErrorCode::BadInput, "expansion maps out of sync");
    for (int i = 0; i < n; ++i) {
      if (net.super_of[i] < 0 || net.super_of[i] >= net.base_node_count)
        throw Error(ErrorCode::BadInput, "super_of out of range");
      if ((net.super_of[i] == 0) != (net.nodes[i].role == NodeRole::Enb))
        throw Error(ErrorCode::BadInput, "eNB copies must map to super node 0");
      if (net.nodes[i].rf_chains != 1)
        throw Error(ErrorCode::BadInput, "expanded nodes carry one RF chain");
    }
  } else {
    if (net.nodes[0].role != NodeRole::Enb)
      throw Error(ErrorCode::BadInput, "node 0 must be the eNB");
    for (int i = 1; i < n; ++i)
      if (net.nodes[i].role == NodeRole::Enb)
        throw Error(ErrorCode::BadInput, "exactly one eNB allowed");
  }
  std::set<std::pair<int, int>> seen;
  for (const Link& l : net.links) {
    if (l.src < 0 || l.src >= n || l.dst < 0 || l.dst >= n)
      throw Error(ErrorCode::BadInput, "link endpoint out of range");
    if (l.src == l.dst) throw Error(ErrorCode::BadInput, "self-loop link");
    if (!(l.cap_gbps > 0))
      throw Error(ErrorCode::BadInput, "link capacity must be positive");
    if (!net.expanded && !seen.insert({l.src, l.dst}).second)
      throw Error(ErrorCode::BadInput, "duplicate (src, dst) link");
  }
}

namespace {

std::vector<char> reachable_from_enb(const Network& net) {
  std::vector<char> seen(net.nodes.size(), 0);
  auto adj = net.out_links();
  std::deque<int> queue;
  for (const Node& n : net.nodes)
    if (n.role == NodeRole::Enb) {
      seen[n.id] = 1;
      queue.push_back(n.id);
    }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : adj[v]) {
      int w = net.links[e].dst;
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

bool check_connectivity(const Network& net) {
  auto seen = reachable_from_enb(net);
  for (const Node& n : net.nodes)
    if (n.role == NodeRole::Mmbs && !seen[n.id]) return false;
  return true;
}

bool all_reachable(const Network& net) {
  auto seen = reachable_from_enb(net);
  for (const Node& n : net.nodes)
    if (n.role != NodeRole::Enb && !seen[n.id]) return false;
  return true;
}

bool is_matching(const Network& net, const Matching& links) {
  std::vector<char> busy(net.nodes.size(), 0);
  int prev = -1;
  for (int e : links) {
    if (e < 0 || e >= (int)net.links.size()) return false;
    if (e <= prev) return false;  // sorted ascending, no duplicates
    prev = e;
    const Link& l = net.links[e];
    if (busy[l.src] || busy[l.dst]) return false;
    busy[l.src] = busy[l.dst] = 1;
  }
  return true;
}

double Schedule::total_duration() const {
  double s = 0;
  for (const Slot& slot : slots) s += slot.duration;
  return s;
}

int Schedule::non_idle_slots() const {
  int n = 0;
  for (const Slot& slot : slots)
    if (!slot.links.empty()) ++n;
  return n;
}

double ThroughputVector::min() const {
  double m = gbps.empty() ? 0.0 : gbps[0];
  for (double v : gbps) m = std::min(m, v);
  return m;
}

double ThroughputVector::total() const {
  double s = 0;
  for (double v : gbps) s += v;
  return s;
}

VerifyReport verify_schedule(const Network& net, const Schedule& sched) {
  VerifyReport report;
  auto flag = [&](ErrorCode code, int slot, std::string detail) {
    report.ok = false;
    report.issues.push_back({code, slot, std::move(detail)});
  };
  for (size_t i = 0; i < sched.slots.size(); ++i) {
    const Slot& slot = sched.slots[i];
    if (!(slot.duration > 0))
      flag(ErrorCode::BadInput, (int)i, "slot duration must be > 0");
    if (!is_matching(net, slot.links))
      flag(ErrorCode::NonMatchingSlot, (int)i,
           "links share an endpoint or are out of range/order");
  }
  double total = sched.total_duration();
  if (std::abs(total - 1.0) > kFeasTol)
    flag(ErrorCode::LengthMismatch, -1,
         "durations sum to " + std::to_string(total));
  return report;
}

namespace {

// Net rate (in - out) per pre-expansion node, plus the slot-matching check
// shared by throughput_of_schedule.
std::vector<double> net_rates(const Network& net, const Schedule& sched) {
  const int base =
      net.expanded ? net.base_node_count : (int)net.nodes.size();
  std::vector<double> rate(base, 0.0);
  auto super = [&](int v) { return net.expanded ? net.super_of[v] : v; };
  for (size_t i = 0; i < sched.slots.size(); ++i) {
    const Slot& slot = sched.slots[i];
    if (!is_matching(net, slot.links))
      throw Error(ErrorCode::NonMatchingSlot,
                  "slot " + std::to_string(i) + " is not a matching");
    for (int e : slot.links) {
      const Link& l = net.links[e];
      rate[super(l.dst)] += slot.duration * l.cap_gbps;
      rate[super(l.src)] -= slot.duration * l.cap_gbps;
    }
  }
  return rate;
}

}  // namespace

ThroughputVector throughput_of_schedule(const Network& net,
                                        const Schedule& sched) {
  std::vector<double> rate = net_rates(net, sched);
  // Destination set: UEs if the (pre-expansion) network has any, else mmBSs.
  // Roles of pre-expansion nodes are recovered through any expansion copy.
  const int base = net.expanded ? net.base_node_count : (int)net.nodes.size();
  std::vector<NodeRole> role(base, NodeRole::Enb);
  for (const Node& n : net.nodes)
    role[net.expanded ? net.super_of[n.id] : n.id] = n.role;
  bool ues = std::any_of(role.begin(), role.end(),
                         [](NodeRole r) { return r == NodeRole::Ue; });
  ThroughputVector out;
  for (int v = 0; v < base; ++v) {
    NodeRole r = role[v];
    if (r == NodeRole::Enb) continue;
    bool dest = ues ? (r == NodeRole::Ue) : (r == NodeRole::Mmbs);
    if (!dest) {
      // Pure relay: forwarding more than it receives is impossible.
      if (rate[v] < -kFeasTol)
        throw Error(ErrorCode::NegativeNetFlow,
                    "node " + std::to_string(v) + " net rate " +
                        std::to_string(rate[v]));
      continue;
    }
    if (rate[v] < -kFeasTol)
      throw Error(ErrorCode::NegativeNetFlow,
                  "node " + std::to_string(v) + " net rate " +
                      std::to_string(rate[v]));
    out.nodes.push_back(v);
    out.gbps.push_back(std::max(0.0, rate[v]));
  }
  return out;
}

LinkTimeVector link_time_of_schedule(const Network& net,
                                     const Schedule& sched) {
  const int base =
      net.expanded ? net.base_link_count : (int)net.links.size();
  LinkTimeVector t(base, 0.0);
  for (const Slot& slot : sched.slots)
    for (int e : slot.links) {
      if (e < 0 || e >= (int)net.links.size())
        throw Error(ErrorCode::BadInput, "link index out of range");
      t[net.expanded ? net.origin_link[e] : e] += slot.duration;
    }
  return t;
}

double max_tput_baseline(const Network& net) {
  if (net.expanded)
    throw Error(ErrorCode::BadInput,
                "max_tput_baseline expects a pre-expansion network");
  std::vector<double> caps;
  for (const Link& l : net.links)
    if (net.nodes[l.src].role == NodeRole::Enb) caps.push_back(l.cap_gbps);
  if (caps.empty()) throw Error(ErrorCode::NoEnbLinks, "");
  std::sort(caps.begin(), caps.end(), std::greater<>());
  int r = std::min<int>(net.nodes[0].rf_chains, (int)caps.size());
  double sum = 0;
  for (int i = 0; i < r; ++i) sum += caps[i];
  return sum;
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

std::string network_to_json(const Network& net) {
  json j;
  j["version"] = 1;
  j["nodes"] = json::array();
  for (const Node& n : net.nodes)
    j["nodes"].push_back(
        {{"id", n.id}, {"role", to_string(n.role)}, {"rf", n.rf_chains}});
  j["links"] = json::array();
  for (const Link& l : net.links)
    j["links"].push_back(
        {{"src", l.src}, {"dst", l.dst}, {"cap_gbps", l.cap_gbps}});
  return j.dump(2);
}

Network network_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, e.what());
  }
  Network net;
  try {
    for (const json& n : j.at("nodes")) {
      Node node;
      node.id = n.at("id").get<int>();
      node.role = role_from_string(n.at("role").get<std::string>());
      node.rf_chains = n.value("rf", 1);
      net.nodes.push_back(node);
    }
    for (const json& l : j.at("links")) {
      Link link;
      link.src = l.at("src").get<int>();
      link.dst = l.at("dst").get<int>();
      link.cap_gbps = l.at("cap_gbps").get<double>();
      net.links.push_back(link);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, e.what());
  }
  validate(net);
  return net;
}

std::string schedule_to_json(const Schedule& sched) {
  json j;
  j["version"] = 1;
  j["slots"] = json::array();
  for (const Slot& s : sched.slots)
    j["slots"].push_back({{"links", s.links}, {"duration", s.duration}});
  return j.dump(2);
}

Schedule schedule_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, e.what());
  }
  Schedule sched;
  try {
    for (const json& s : j.at("slots")) {
      Slot slot;
      slot.links = s.at("links").get<std::vector<int>>();
      slot.duration = s.at("duration").get<double>();
      sched.slots.push_back(std::move(slot));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, e.what());
  }
  return sched;
}

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Network load_network_file(const std::string& path) {
  return network_from_json(read_text_file(path));
}

Schedule load_schedule_file(const std::string& path) {
  return schedule_from_json(read_text_file(path));
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace mmsched
