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

#include "mmsched/expansion.hpp"

#include <algorithm>

namespace mmsched {

Network expand_nodes(const Network& net) {
  if (net.expanded) throw Error(ErrorCode::AlreadyExpanded, "");
  validate(net);

  const int n = (int)net.nodes.size();
  std::vector<int> first(n + 1, 0);  // first copy id of node v
  for (int v = 0; v < n; ++v)
    first[v + 1] = first[v] + net.nodes[v].rf_chains;

  Network out;
  out.expanded = true;
  out.base_node_count = n;
  out.base_link_count = (int)net.links.size();
  out.nodes.reserve(first[n]);
  out.super_of.reserve(first[n]);
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < net.nodes[v].rf_chains; ++c) {
      Node copy;
      copy.id = first[v] + c;
      copy.role = net.nodes[v].role;
      copy.rf_chains = 1;
      out.nodes.push_back(copy);
      out.super_of.push_back(v);
    }
  for (size_t e = 0; e < net.links.size(); ++e) {
    const Link& l = net.links[e];
    for (int i = 0; i < net.nodes[l.src].rf_chains; ++i)
      for (int j = 0; j < net.nodes[l.dst].rf_chains; ++j) {
        out.links.push_back({first[l.src] + i, first[l.dst] + j, l.cap_gbps});
        out.origin_link.push_back((int)e);
      }
  }
  validate(out);
  return out;
}

Network expand_enb(const Network& net) {
  if (net.expanded) throw Error(ErrorCode::AlreadyExpanded, "");
  // Same construction with every non-eNB chain count treated as 1.
  Network tmp = net;
  for (size_t v = 1; v < tmp.nodes.size(); ++v) tmp.nodes[v].rf_chains = 1;
  return expand_nodes(tmp);
}

CollapsedSchedule collapse_schedule(const Network& expanded,
                                    const Schedule& sched) {
  if (!expanded.expanded) throw Error(ErrorCode::NotExpanded, "");
  std::vector<int> chains(expanded.base_node_count, 0);
  for (int v : expanded.super_of) ++chains[v];

  CollapsedSchedule out;
  out.link_time.assign(expanded.base_link_count, 0.0);
  std::vector<int> beams(expanded.base_node_count);
  for (size_t i = 0; i < sched.slots.size(); ++i) {
    const Slot& slot = sched.slots[i];
    if (!is_matching(expanded, slot.links))
      throw Error(ErrorCode::NonMatchingSlot,
                  "slot " + std::to_string(i));
    std::fill(beams.begin(), beams.end(), 0);
    Slot collapsed;
    collapsed.duration = slot.duration;
    for (int e : slot.links) {
      const Link& l = expanded.links[e];
      ++beams[expanded.super_of[l.src]];
      ++beams[expanded.super_of[l.dst]];
      collapsed.links.push_back(expanded.origin_link[e]);
      out.link_time[expanded.origin_link[e]] += slot.duration;
    }
    for (int v = 0; v < expanded.base_node_count; ++v)
      if (beams[v] > chains[v])
        throw Error(ErrorCode::RfLimitViolated,
                    "slot " + std::to_string(i) + " uses " +
                        std::to_string(beams[v]) + " beams at node " +
                        std::to_string(v));
    std::sort(collapsed.links.begin(), collapsed.links.end());
    collapsed.links.erase(
        std::unique(collapsed.links.begin(), collapsed.links.end()),
        collapsed.links.end());
    out.schedule.slots.push_back(std::move(collapsed));
  }
  return out;
}

}  // namespace mmsched
