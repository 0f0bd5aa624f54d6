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

#include "mmsched/channel.hpp"

#include <cmath>
#include <set>

#include "doctest.h"

namespace mmsched {
namespace {

TEST_CASE("line-of-sight path loss, SNR and capacity at 100 m") {
  const ChannelParams cp;
  CHECK(path_loss_db(100.0, ChannelState::Los, 0.0, cp) ==
        doctest::Approx(101.4).epsilon(1e-12));
  // 30 dBm + 30 dB gain - 101.4 dB loss over a -80 dBm noise floor.
  CHECK(link_snr_db(100.0, ChannelState::Los, 0.0, cp) ==
        doctest::Approx(38.6).epsilon(1e-12));
  const auto cap = link_capacity_gbps(100.0, ChannelState::Los, 0.0, cp);
  REQUIRE(cap.has_value());
  CHECK(*cap == doctest::Approx(12.822841579875).epsilon(1e-9));
}

TEST_CASE("obstructed path loss and capacity at 25 m") {
  const ChannelParams cp;
  CHECK(path_loss_db(25.0, ChannelState::Nlos, 0.0, cp) ==
        doctest::Approx(112.819848253223).epsilon(1e-12));
  const auto cap = link_capacity_gbps(25.0, ChannelState::Nlos, 0.0, cp);
  REQUIRE(cap.has_value());
  CHECK(*cap == doctest::Approx(9.031809922392).epsilon(1e-9));
}

TEST_CASE("links below the SNR floor are dropped") {
  const ChannelParams cp;
  // Obstructed at 100 m with 15 dB of shadowing: SNR -5.4 dB, below -5 dB.
  CHECK_FALSE(
      link_capacity_gbps(100.0, ChannelState::Nlos, 15.0, cp).has_value());
  // The same geometry without shadowing clears the floor comfortably.
  CHECK(link_capacity_gbps(100.0, ChannelState::Nlos, 0.0, cp).has_value());
}

TEST_CASE("shadowing shifts the loss by exactly its argument") {
  const ChannelParams cp;
  const double base = path_loss_db(50.0, ChannelState::Los, 0.0, cp);
  CHECK(path_loss_db(50.0, ChannelState::Los, 3.7, cp) ==
        doctest::Approx(base + 3.7).epsilon(1e-12));
  CHECK(path_loss_db(50.0, ChannelState::Los, -6.1, cp) ==
        doctest::Approx(base - 6.1).epsilon(1e-12));
}

TEST_CASE("distances must be positive") {
  const ChannelParams cp;
  CHECK_THROWS_AS(path_loss_db(0.0, ChannelState::Los, 0.0, cp), Error);
  CHECK_THROWS_AS(path_loss_db(-3.0, ChannelState::Los, 0.0, cp), Error);
}

TEST_CASE("state probabilities") {
  const StateModel sm;
  // The blockage ramp only starts past exp(-d/30 + 5.2) = 1, i.e. d = 156 m.
  CHECK(p_outage(30.0, sm) == 0.0);
  CHECK(p_outage(156.0, sm) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(p_outage(200.0, sm) == doctest::Approx(0.769306817745).epsilon(1e-9));
  CHECK(p_los(50.0, sm) == doctest::Approx(0.474660017970).epsilon(1e-9));
  // Probabilities stay in range across the usable span.
  for (double d = 1.0; d <= 400.0; d += 7.0) {
    const double po = p_outage(d, sm);
    const double pl = p_los(d, sm);
    CHECK(po >= 0.0);
    CHECK(po <= 1.0);
    CHECK(pl >= 0.0);
    CHECK(pl <= 1.0 - po + 1e-12);
  }
  StateModel forced;
  forced.force_los = true;
  CHECK(p_outage(500.0, forced) == 0.0);
  CHECK(p_los(500.0, forced) == 1.0);
}

TEST_CASE("grid generation rejects bad parameters") {
  const ChannelParams cp;
  GridScenario sc;
  sc.n = 0;
  CHECK_THROWS_AS(generate_grid(sc, cp), Error);
  sc.n = 2;
  sc.enb_rf = 0;
  CHECK_THROWS_AS(generate_grid(sc, cp), Error);
  sc.enb_rf = 10;
  sc.ues_per_mmbs = -1;
  CHECK_THROWS_AS(generate_grid(sc, cp), Error);
}

TEST_CASE("grid generation basics") {
  GridScenario sc;
  sc.n = 2;
  sc.seed = 42;
  const Network net = generate_grid(sc, ChannelParams{});
  REQUIRE(net.nodes.size() == 5);  // gateway + 4 stations
  CHECK(net.nodes[0].role == NodeRole::Enb);
  CHECK(net.nodes[0].rf_chains == 10);
  for (int i = 1; i <= 4; ++i) {
    CHECK(net.nodes[i].role == NodeRole::Mmbs);
    CHECK(net.nodes[i].rf_chains == 1);
  }
  CHECK_NOTHROW(validate(net));
}

TEST_CASE("deterministic LOS grid capacities match the formula") {
  GridScenario sc;
  sc.n = 2;
  sc.state_model.force_los = true;
  sc.state_model.zero_shadowing = true;
  const Network net = generate_grid(sc, ChannelParams{});
  // The eNB sits at the grid centre, sqrt(50^2 + 50^2) m from every station.
  int enb_links = 0;
  for (const Link& l : net.links) {
    if (l.src != 0) continue;
    CHECK(l.cap_gbps == doctest::Approx(13.822742016506).epsilon(1e-9));
    ++enb_links;
  }
  CHECK(enb_links == 4);  // all four stations reachable directly
}

TEST_CASE("station-to-station links come in equal-capacity pairs") {
  GridScenario sc;
  sc.n = 3;
  sc.seed = 9;
  const Network net = generate_grid(sc, ChannelParams{});
  int pairs = 0;
  for (const Link& a : net.links) {
    if (net.nodes[a.src].role != NodeRole::Mmbs ||
        net.nodes[a.dst].role != NodeRole::Mmbs)
      continue;
    bool found = false;
    for (const Link& b : net.links)
      if (b.src == a.dst && b.dst == a.src) {
        CHECK(b.cap_gbps == a.cap_gbps);  // reciprocal beams, same rate
        found = true;
      }
    CHECK(found);
    ++pairs;
  }
  CHECK(pairs > 0);
}

TEST_CASE("length cutoff prunes long candidate links") {
  GridScenario sc;
  sc.n = 3;
  sc.cutoff_m = 100.0;  // grid spacing: only side-adjacent stations qualify
  sc.state_model.force_los = true;
  const Network net = generate_grid(sc, ChannelParams{});
  for (const Link& l : net.links) {
    if (net.nodes[l.src].role != NodeRole::Mmbs ||
        net.nodes[l.dst].role != NodeRole::Mmbs)
      continue;
    const int ai = (l.src - 1) / 3, aj = (l.src - 1) % 3;
    const int bi = (l.dst - 1) / 3, bj = (l.dst - 1) % 3;
    CHECK(std::abs(ai - bi) + std::abs(aj - bj) == 1);
  }
}

TEST_CASE("UE placement hangs off the stations") {
  GridScenario sc;
  sc.n = 2;
  sc.ues_per_mmbs = 2;
  sc.seed = 5;
  const Network net = generate_grid(sc, ChannelParams{});
  REQUIRE(net.nodes.size() == 5 + 8);
  std::set<int> ue_with_link;
  for (const Link& l : net.links) {
    CHECK(net.nodes[l.dst].role != NodeRole::Enb);  // nothing enters the eNB
    CHECK(net.nodes[l.src].role != NodeRole::Ue);   // terminals never relay
    if (net.nodes[l.dst].role == NodeRole::Ue) {
      CHECK(net.nodes[l.src].role == NodeRole::Mmbs);
      ue_with_link.insert(l.dst);
    }
  }
  // Home stations are at most d_g/2 away, so every terminal gets a feed.
  CHECK(ue_with_link.size() == 8);
}

TEST_CASE("same seed, same network; different seed, different draw") {
  GridScenario sc;
  sc.n = 3;
  sc.seed = 1234;
  const ChannelParams cp;
  const Network a = generate_grid(sc, cp);
  const Network b = generate_grid(sc, cp);
  REQUIRE(a.links.size() == b.links.size());
  for (size_t i = 0; i < a.links.size(); ++i) {
    CHECK(a.links[i].src == b.links[i].src);
    CHECK(a.links[i].dst == b.links[i].dst);
    CHECK(a.links[i].cap_gbps == b.links[i].cap_gbps);  // bit-identical
  }
  sc.seed = 1235;
  const Network c = generate_grid(sc, cp);
  bool differs = c.links.size() != a.links.size();
  for (size_t i = 0; !differs && i < a.links.size(); ++i)
    differs = a.links[i].cap_gbps != c.links[i].cap_gbps;
  CHECK(differs);
}

TEST_CASE("scenario file round-trip and key checking") {
  ScenarioFile sf;
  sf.scenario.n = 5;
  sf.scenario.seed = 77;
  sf.scenario.ues_per_mmbs = 1;
  sf.scenario.state_model.force_los = true;
  sf.channel.p_tx_dbm = 25.0;
  const ScenarioFile back = scenario_from_json(scenario_to_json(sf));
  CHECK(back.scenario.n == 5);
  CHECK(back.scenario.seed == 77);
  CHECK(back.scenario.ues_per_mmbs == 1);
  CHECK(back.scenario.state_model.force_los);
  CHECK(back.channel.p_tx_dbm == 25.0);

  CHECK_NOTHROW(scenario_from_json("{}"));  // everything is optional
  CHECK_THROWS_AS(scenario_from_json("{\"scenario\":{\"gridn\":4}}"), Error);
  CHECK_THROWS_AS(scenario_from_json("{\"typo\":{}}"), Error);
  CHECK_THROWS_AS(scenario_from_json("not json"), Error);
}

}  // namespace
}  // namespace mmsched
