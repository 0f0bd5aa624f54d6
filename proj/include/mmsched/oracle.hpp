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

// Exhaustive reference solver for small networks. It expands the network,
// enumerates every matching of the expanded link set, and optimizes the
// time shares directly as dense LPs -- no column generation, no pricing.
// Intended for cross-checking the production solver on instances where the
// matching count stays manageable (it inherits the enumeration size guards
// and throws Error(TooLarge) beyond them).

struct OracleResult {
  double theta = 0;         // best worst-destination rate
  double network_tput = 0;  // best total rate with the worst rate held
  Network expanded;
  std::vector<Matching> matchings;  // every matching, as expanded link ids
  std::vector<double> durations;    // time share per matching (tput phase)
};

OracleResult oracle_solve(const Network& net);

// Fairness phase only; cheaper when the throughput phase is not needed.
double oracle_maxmin(const Network& net);

}  // namespace mmsched
