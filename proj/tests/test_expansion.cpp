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

#include "doctest.h"

namespace mmsched {
namespace {

Node make_node(int id, NodeRole role, int rf) {
  Node n;
  n.id = id;
  n.role = role;
  n.rf_chains = rf;
  return n;
}

// eNB (R chains) feeding stations A and B, plus a relay link A->B.
Network star_net(int enb_rf, int mmbs_rf = 1) {
  Network net;
  net.nodes.push_back(make_node(0, NodeRole::Enb, enb_rf));
  net.nodes.push_back(make_node(1, NodeRole::Mmbs, mmbs_rf));
  net.nodes.push_back(make_node(2, NodeRole::Mmbs, mmbs_rf));
  net.links.push_back({0, 1, 2.0});
  net.links.push_back({0, 2, 4.0});
  net.links.push_back({1, 2, 3.0});
  return net;
}

TEST_CASE("R = 1 expansion is an identity with maps") {
  const Network net = star_net(1);
  const Network ex = expand_enb(net);
  CHECK(ex.expanded);
  REQUIRE(ex.nodes.size() == 3);
  REQUIRE(ex.links.size() == 3);
  for (size_t v = 0; v < ex.nodes.size(); ++v) {
    CHECK(ex.super_of[v] == (int)v);
    CHECK(ex.nodes[v].rf_chains == 1);
  }
  for (size_t e = 0; e < ex.links.size(); ++e) {
    CHECK(ex.origin_link[e] == (int)e);
    CHECK(ex.links[e].cap_gbps == net.links[e].cap_gbps);
  }
}

TEST_CASE("eNB expansion copies every gateway link per chain") {
  const Network net = star_net(3);
  const Network ex = expand_enb(net);
  // 3 eNB copies (ids 0..2), stations shifted to 3 and 4.
  REQUIRE(ex.nodes.size() == 5);
  for (int v = 0; v < 3; ++v) {
    CHECK(ex.nodes[v].role == NodeRole::Enb);
    CHECK(ex.nodes[v].rf_chains == 1);
    CHECK(ex.super_of[v] == 0);
  }
  CHECK(ex.super_of[3] == 1);
  CHECK(ex.super_of[4] == 2);

  // Each eNB link triples, copies contiguous in ascending copy order; the
  // station-to-station link survives once.
  REQUIRE(ex.links.size() == 3 + 3 + 1);
  for (int c = 0; c < 3; ++c) {
    CHECK(ex.links[0 + c].src == c);
    CHECK(ex.links[0 + c].dst == 3);
    CHECK(ex.links[0 + c].cap_gbps == 2.0);
    CHECK(ex.origin_link[0 + c] == 0);
    CHECK(ex.links[3 + c].src == c);
    CHECK(ex.links[3 + c].dst == 4);
    CHECK(ex.links[3 + c].cap_gbps == 4.0);
    CHECK(ex.origin_link[3 + c] == 1);
  }
  CHECK(ex.links[6].src == 3);
  CHECK(ex.links[6].dst == 4);
  CHECK(ex.origin_link[6] == 2);
  CHECK_NOTHROW(validate(ex));
}

TEST_CASE("multi-chain expansion multiplies copies lexicographically") {
  // eNB with 2 chains, station A with 2 chains, station B with 1.
  const Network net = star_net(2, 1);
  Network multi = net;
  multi.nodes[1].rf_chains = 2;
  const Network ex = expand_nodes(multi);
  // Ids: eNB copies 0,1; A copies 2,3; B copy 4.
  REQUIRE(ex.nodes.size() == 5);
  CHECK(ex.super_of == std::vector<int>{0, 0, 1, 1, 2});

  // Link 0 (eNB->A) becomes 2*2 copies ordered (src copy, dst copy).
  REQUIRE(ex.links.size() == 4 + 2 + 2);
  const int exp_src[4] = {0, 0, 1, 1};
  const int exp_dst[4] = {2, 3, 2, 3};
  for (int k = 0; k < 4; ++k) {
    CHECK(ex.links[k].src == exp_src[k]);
    CHECK(ex.links[k].dst == exp_dst[k]);
    CHECK(ex.origin_link[k] == 0);
  }
  // Link 1 (eNB->B): 2*1 copies.
  CHECK(ex.links[4].src == 0);
  CHECK(ex.links[5].src == 1);
  CHECK(ex.links[4].dst == 4);
  CHECK(ex.links[5].dst == 4);
  // Link 2 (A->B): 2*1 copies from A's two chains.
  CHECK(ex.links[6].src == 2);
  CHECK(ex.links[7].src == 3);
  CHECK(ex.origin_link[6] == 2);
  CHECK(ex.origin_link[7] == 2);
}

TEST_CASE("the two expansions agree when only the eNB has extra chains") {
  const Network net = star_net(4);
  const Network a = expand_enb(net);
  const Network b = expand_nodes(net);
  REQUIRE(a.nodes.size() == b.nodes.size());
  REQUIRE(a.links.size() == b.links.size());
  for (size_t v = 0; v < a.nodes.size(); ++v)
    CHECK(a.super_of[v] == b.super_of[v]);
  for (size_t e = 0; e < a.links.size(); ++e) {
    CHECK(a.links[e].src == b.links[e].src);
    CHECK(a.links[e].dst == b.links[e].dst);
    CHECK(a.origin_link[e] == b.origin_link[e]);
  }
}

TEST_CASE("expanding twice is rejected") {
  const Network ex = expand_enb(star_net(2));
  CHECK_THROWS_AS(expand_enb(ex), Error);
  CHECK_THROWS_AS(expand_nodes(ex), Error);
  try {
    expand_enb(ex);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlreadyExpanded);
  }
}

TEST_CASE("collapse maps copies back and aggregates their time") {
  const Network net = star_net(2);
  const Network ex = expand_enb(net);
  // Expanded ids: eNB copies 0,1; A = 2, B = 3.
  // Links: 0: 0->2, 1: 1->2 (orig 0); 2: 0->3, 3: 1->3 (orig 1); 4: 2->3.
  Schedule s;
  s.slots.push_back({{0, 3}, 0.25});  // both eNB chains busy, orig links 0,1
  s.slots.push_back({{1, 2}, 0.50});  // the same pair through other chains
  s.slots.push_back({{4}, 0.25});     // relay link
  const CollapsedSchedule c = collapse_schedule(ex, s);

  REQUIRE(c.schedule.slots.size() == 3);
  CHECK(c.schedule.slots[0].links == std::vector<int>{0, 1});
  CHECK(c.schedule.slots[1].links == std::vector<int>{0, 1});
  CHECK(c.schedule.slots[2].links == std::vector<int>{2});
  CHECK(c.schedule.slots[0].duration == 0.25);
  REQUIRE(c.link_time.size() == 3);
  CHECK(c.link_time[0] == doctest::Approx(0.75));
  CHECK(c.link_time[1] == doctest::Approx(0.75));
  CHECK(c.link_time[2] == doctest::Approx(0.25));
}

TEST_CASE("collapse deduplicates several copies of one link in a slot") {
  // Two chains on both ends of one link: 4 copies, two of which can run in
  // parallel through disjoint chain pairs.
  Network net;
  net.nodes.push_back(make_node(0, NodeRole::Enb, 2));
  net.nodes.push_back(make_node(1, NodeRole::Mmbs, 2));
  net.links.push_back({0, 1, 5.0});
  const Network ex = expand_nodes(net);
  REQUIRE(ex.links.size() == 4);
  // Copies (0,2),(0,3),(1,2),(1,3): indices 0 and 3 are chain-disjoint.
  Schedule s;
  s.slots.push_back({{0, 3}, 1.0});
  const CollapsedSchedule c = collapse_schedule(ex, s);
  REQUIRE(c.schedule.slots.size() == 1);
  CHECK(c.schedule.slots[0].links == std::vector<int>{0});  // deduplicated
  CHECK(c.link_time[0] == doctest::Approx(2.0));    // but both counted
}

TEST_CASE("collapse rejects chain conflicts and non-matchings") {
  const Network ex = expand_enb(star_net(2));
  Schedule bad;
  bad.slots.push_back({{0, 2}, 1.0});  // links 0->2 and 0->3 share eNB copy 0
  CHECK_THROWS_AS(collapse_schedule(ex, bad), Error);
  try {
    collapse_schedule(ex, bad);
  } catch (const Error& e) {
    // One chain driving two beams is precisely a non-matching slot.
    CHECK((e.code() == ErrorCode::RfLimitViolated ||
           e.code() == ErrorCode::NonMatchingSlot));
  }

  Schedule oob;
  oob.slots.push_back({{99}, 1.0});
  CHECK_THROWS_AS(collapse_schedule(ex, oob), Error);

  CHECK_THROWS_AS(collapse_schedule(star_net(2), Schedule{}), Error);  // not expanded
}

}  // namespace
}  // namespace mmsched
