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
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace mmsched {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Deterministic variate source. std::mt19937_64 output is fully specified by
// the standard; the uniform/normal mappings below are hand-rolled because
// std::uniform_real_distribution / std::normal_distribution are
// implementation-defined and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Box-Muller; consumes exactly two uniforms per call (no caching, so the
  // stream position is a pure function of the call count).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace

double p_outage(double d_m, const StateModel& sm) {
  if (sm.force_los) return 0.0;
  double p = 1.0 - std::exp(-sm.a_out * d_m + sm.b_out);
  return std::min(1.0, std::max(0.0, p));
}

double p_los(double d_m, const StateModel& sm) {
  if (sm.force_los) return 1.0;
  return (1.0 - p_outage(d_m, sm)) * std::exp(-d_m / sm.los_decay_m);
}

double path_loss_db(double d_m, ChannelState state, double shadow_db,
                    const ChannelParams& cp) {
  if (!(d_m > 0))
    throw Error(ErrorCode::BadInput, "path loss needs a positive distance");
  double alpha = state == ChannelState::Los ? cp.alpha_los : cp.alpha_nlos;
  double beta = state == ChannelState::Los ? cp.beta_los : cp.beta_nlos;
  return alpha + 10.0 * beta * std::log10(d_m) + shadow_db;
}

double link_snr_db(double d_m, ChannelState state, double shadow_db,
                   const ChannelParams& cp) {
  double noise_dbm = cp.kt0_dbm_hz + 10.0 * std::log10(cp.bandwidth_hz) +
                     cp.noise_figure_db;
  return cp.p_tx_dbm + cp.gain_db - path_loss_db(d_m, state, shadow_db, cp) -
         noise_dbm;
}

std::optional<double> link_capacity_gbps(double d_m, ChannelState state,
                                         double shadow_db,
                                         const ChannelParams& cp) {
  double snr_db = link_snr_db(d_m, state, shadow_db, cp);
  if (snr_db < cp.snr_threshold_db) return std::nullopt;
  double snr = std::pow(10.0, snr_db / 10.0);
  double bps = cp.efficiency * cp.bandwidth_hz * std::log2(1.0 + snr);
  return bps / 1e9;
}

Network generate_grid(const GridScenario& sc, const ChannelParams& cp) {
  if (sc.n < 1) throw Error(ErrorCode::BadInput, "grid size must be >= 1");
  if (sc.enb_rf < 1 || sc.mmbs_rf < 1)
    throw Error(ErrorCode::BadInput, "rf chains must be >= 1");
  if (sc.ues_per_mmbs < 0)
    throw Error(ErrorCode::BadInput, "ues_per_mmbs must be >= 0");

  const int w = sc.n * sc.n;
  Network net;
  std::vector<std::pair<double, double>> pos;

  Node enb;
  enb.id = 0;
  enb.role = NodeRole::Enb;
  enb.rf_chains = sc.enb_rf;
  net.nodes.push_back(enb);
  double c = (sc.n - 1) * 0.5 * sc.d_g;
  pos.push_back({c, c});

  for (int i = 0; i < sc.n; ++i)
    for (int j = 0; j < sc.n; ++j) {
      Node m;
      m.id = 1 + i * sc.n + j;
      m.role = NodeRole::Mmbs;
      m.rf_chains = sc.mmbs_rf;
      net.nodes.push_back(m);
      pos.push_back({i * sc.d_g, j * sc.d_g});
    }

  Rng rng(sc.seed);

  // UE placement draws come first, in UE-id order, so that the link sweep
  // below sees a fixed stream position regardless of ues_per_mmbs outcomes.
  for (int m = 1; m <= w; ++m)
    for (int u = 0; u < sc.ues_per_mmbs; ++u) {
      Node ue;
      ue.id = w + (m - 1) * sc.ues_per_mmbs + u + 1;
      ue.role = NodeRole::Ue;
      ue.rf_chains = 1;
      double r = rng.uniform(5.0, sc.d_g * 0.5);
      double ang = rng.uniform(0.0, 2.0 * kPi);
      net.nodes.push_back(ue);
      pos.push_back({pos[m].first + r * std::cos(ang),
                     pos[m].second + r * std::sin(ang)});
    }

  // Candidate sweep over unordered pairs (a < b) in ascending order. Pairs
  // that can never carry a link (eNB-UE, UE-UE) and pairs beyond the cutoff
  // are skipped before any draw; eligible pairs always consume exactly three
  // variates (state, LOS shadow, NLOS shadow) whatever the outcome.
  const int total = (int)net.nodes.size();
  for (int a = 0; a < total; ++a)
    for (int b = a + 1; b < total; ++b) {
      NodeRole ra = net.nodes[a].role;
      NodeRole rb = net.nodes[b].role;
      bool eligible = (ra == NodeRole::Enb && rb == NodeRole::Mmbs) ||
                      (ra == NodeRole::Mmbs && rb == NodeRole::Mmbs) ||
                      (ra == NodeRole::Mmbs && rb == NodeRole::Ue);
      if (!eligible) continue;
      double dx = pos[a].first - pos[b].first;
      double dy = pos[a].second - pos[b].second;
      double d = std::sqrt(dx * dx + dy * dy);
      if (d > sc.cutoff_m || d <= 0) continue;

      double u_state = rng.uniform();
      double z_los = rng.normal();
      double z_nlos = rng.normal();

      ChannelState state;
      if (sc.state_model.force_los) {
        state = ChannelState::Los;
      } else {
        double po = p_outage(d, sc.state_model);
        double pl = p_los(d, sc.state_model);
        if (u_state < po) continue;  // blocked entirely
        state = u_state < po + pl ? ChannelState::Los : ChannelState::Nlos;
      }
      double sigma =
          state == ChannelState::Los ? cp.sigma_los : cp.sigma_nlos;
      double shadow =
          sc.state_model.zero_shadowing
              ? 0.0
              : (state == ChannelState::Los ? z_los : z_nlos) * sigma;
      auto cap = link_capacity_gbps(d, state, shadow, cp);
      if (!cap) continue;

      if (ra == NodeRole::Enb) {
        net.links.push_back({a, b, *cap});
      } else if (rb == NodeRole::Ue) {
        net.links.push_back({a, b, *cap});
      } else {
        // mmBS pair: the channel is reciprocal, one beam each way.
        net.links.push_back({a, b, *cap});
        net.links.push_back({b, a, *cap});
      }
    }

  validate(net);
  return net;
}

// ---------------------------------------------------------------------------
// Parameter files

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw Error(ErrorCode::Io, std::string("unknown key '") + it.key() +
                                     "' in " + where);
  }
}

}  // namespace

ScenarioFile scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, e.what());
  }
  ScenarioFile sf;
  try {
    check_keys(j, {"channel", "state_model", "scenario"}, "params file");
    if (j.contains("channel")) {
      const json& c = j["channel"];
      check_keys(c,
                 {"alpha_los", "beta_los", "sigma_los", "alpha_nlos",
                  "beta_nlos", "sigma_nlos", "p_tx_dbm", "gain_db",
                  "bandwidth_hz", "kt0_dbm_hz", "noise_figure_db",
                  "snr_threshold_db", "efficiency"},
                 "channel");
      ChannelParams& p = sf.channel;
      p.alpha_los = c.value("alpha_los", p.alpha_los);
      p.beta_los = c.value("beta_los", p.beta_los);
      p.sigma_los = c.value("sigma_los", p.sigma_los);
      p.alpha_nlos = c.value("alpha_nlos", p.alpha_nlos);
      p.beta_nlos = c.value("beta_nlos", p.beta_nlos);
      p.sigma_nlos = c.value("sigma_nlos", p.sigma_nlos);
      p.p_tx_dbm = c.value("p_tx_dbm", p.p_tx_dbm);
      p.gain_db = c.value("gain_db", p.gain_db);
      p.bandwidth_hz = c.value("bandwidth_hz", p.bandwidth_hz);
      p.kt0_dbm_hz = c.value("kt0_dbm_hz", p.kt0_dbm_hz);
      p.noise_figure_db = c.value("noise_figure_db", p.noise_figure_db);
      p.snr_threshold_db = c.value("snr_threshold_db", p.snr_threshold_db);
      p.efficiency = c.value("efficiency", p.efficiency);
    }
    if (j.contains("state_model")) {
      const json& s = j["state_model"];
      check_keys(s,
                 {"a_out", "b_out", "los_decay_m", "force_los",
                  "zero_shadowing"},
                 "state_model");
      StateModel& m = sf.scenario.state_model;
      m.a_out = s.value("a_out", m.a_out);
      m.b_out = s.value("b_out", m.b_out);
      m.los_decay_m = s.value("los_decay_m", m.los_decay_m);
      m.force_los = s.value("force_los", m.force_los);
      m.zero_shadowing = s.value("zero_shadowing", m.zero_shadowing);
    }
    if (j.contains("scenario")) {
      const json& s = j["scenario"];
      check_keys(s,
                 {"n", "d_g", "enb_rf", "mmbs_rf", "ues_per_mmbs", "cutoff_m",
                  "seed"},
                 "scenario");
      GridScenario& g = sf.scenario;
      g.n = s.value("n", g.n);
      g.d_g = s.value("d_g", g.d_g);
      g.enb_rf = s.value("enb_rf", g.enb_rf);
      g.mmbs_rf = s.value("mmbs_rf", g.mmbs_rf);
      g.ues_per_mmbs = s.value("ues_per_mmbs", g.ues_per_mmbs);
      g.cutoff_m = s.value("cutoff_m", g.cutoff_m);
      g.seed = s.value("seed", g.seed);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, e.what());
  }
  return sf;
}

std::string scenario_to_json(const ScenarioFile& sf) {
  const ChannelParams& p = sf.channel;
  const GridScenario& g = sf.scenario;
  const StateModel& m = g.state_model;
  json j;
  j["channel"] = {{"alpha_los", p.alpha_los},
                  {"beta_los", p.beta_los},
                  {"sigma_los", p.sigma_los},
                  {"alpha_nlos", p.alpha_nlos},
                  {"beta_nlos", p.beta_nlos},
                  {"sigma_nlos", p.sigma_nlos},
                  {"p_tx_dbm", p.p_tx_dbm},
                  {"gain_db", p.gain_db},
                  {"bandwidth_hz", p.bandwidth_hz},
                  {"kt0_dbm_hz", p.kt0_dbm_hz},
                  {"noise_figure_db", p.noise_figure_db},
                  {"snr_threshold_db", p.snr_threshold_db},
                  {"efficiency", p.efficiency}};
  j["state_model"] = {{"a_out", m.a_out},
                      {"b_out", m.b_out},
                      {"los_decay_m", m.los_decay_m},
                      {"force_los", m.force_los},
                      {"zero_shadowing", m.zero_shadowing}};
  j["scenario"] = {{"n", g.n},
                   {"d_g", g.d_g},
                   {"enb_rf", g.enb_rf},
                   {"mmbs_rf", g.mmbs_rf},
                   {"ues_per_mmbs", g.ues_per_mmbs},
                   {"cutoff_m", g.cutoff_m},
                   {"seed", g.seed}};
  return j.dump(2);
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

}  // namespace mmsched
