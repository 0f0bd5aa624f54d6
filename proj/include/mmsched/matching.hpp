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

// Undirected weighted edge for the matching engine. `link` is an opaque
// caller handle (e.g. a directed link index) carried through untouched.
struct WeightedEdge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
  int link = -1;
};

struct WeightedGraph {
  int num_vertices = 0;
  std::vector<WeightedEdge> edges;
};

struct MatchingResult {
  std::vector<int> edges;  // indices into WeightedGraph::edges, ascending
  double weight = 0.0;     // summed in ascending edge-index order
};

// Exact maximum-weight matching (not maximum-cardinality): returns a
// matching maximizing total weight. Edges with weight <= 0 never help and
// are dropped up front; parallel edges collapse to the heaviest copy (ties:
// lowest edge index). Deterministic for identical inputs. O(V^3)-ish
// blossom search.
MatchingResult max_weight_matching(const WeightedGraph& g);

// Canonical weight of an edge set: summed in ascending edge-index order, so
// equal sets produce bit-identical totals on every code path.
double matching_weight(const WeightedGraph& g, const std::vector<int>& edges);

// Every matching of g (the empty one included) as sorted edge-index sets,
// ordered by (size, lexicographic). Intended for small graphs: throws
// Error(TooLarge) if g has more than 16 vertices or more than 2^20
// matchings.
std::vector<std::vector<int>> enumerate_matchings(const WeightedGraph& g);

// Exhaustive reference maximizer: the lexicographically smallest edge set
// among those attaining the maximum canonical weight. Same size guards as
// enumerate_matchings.
MatchingResult max_weight_matching_brute(const WeightedGraph& g);

}  // namespace mmsched
