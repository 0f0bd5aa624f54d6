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

// Replaces the eNB by R = rf_chains(eNB) one-chain copies (ids 0..R-1), each
// inheriting a copy of every eNB link; all other nodes keep one copy and are
// shifted to id v + R - 1. Copies of a link are contiguous in ascending copy
// order. R = 1 returns a graph isomorphic to the input (with the expansion
// maps filled in). Throws Error(AlreadyExpanded) on expanded input.
Network expand_enb(const Network& net);

// General multi-chain expansion: node v becomes R_v one-chain copies with
// contiguous ids, and a link u->v becomes R_u * R_v copies ordered
// lexicographically by (source copy, destination copy), contiguous per
// original link. expand_enb(net) == expand_nodes(net) whenever every
// non-eNB node has one chain.
Network expand_nodes(const Network& net);

struct CollapsedSchedule {
  // Slots with expanded link indices replaced by pre-expansion ones
  // (deduplicated, sorted). Slots of a collapsed schedule may activate
  // several beams per node -- they are not matchings of the original graph.
  Schedule schedule;
  // Per pre-expansion link: active fraction, counting copy multiplicity.
  LinkTimeVector link_time;
};

// Maps a schedule on an expanded network back to pre-expansion link indices,
// checking that no slot uses more beams at a node than it has RF chains
// (Error(RfLimitViolated)) and that slots are matchings of the expanded
// graph (Error(NonMatchingSlot)).
CollapsedSchedule collapse_schedule(const Network& expanded,
                                    const Schedule& sched);

}  // namespace mmsched
