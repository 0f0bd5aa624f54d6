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
#include <optional>
#include <string>

#include "mmsched/core.hpp"

namespace mmsched {

enum class ChannelState { Los, Nlos };

// 28 GHz measurement-fit channel parameters. Distances in metres, powers in
// dBm, gains/losses in dB, bandwidth in Hz.
struct ChannelParams {
  double alpha_los = 61.4;   // path-loss intercept, LOS
  double beta_los = 2.0;     // path-loss exponent, LOS
  double sigma_los = 5.8;    // lognormal shadowing std dev (dB), LOS
  double alpha_nlos = 72.0;
  double beta_nlos = 2.92;
  double sigma_nlos = 8.7;
  double p_tx_dbm = 30.0;    // transmit power
  double gain_db = 30.0;     // combined beamforming gain (both ends)
  double bandwidth_hz = 1e9;
  double kt0_dbm_hz = -174.0;  // thermal noise density
  double noise_figure_db = 4.0;
  double snr_threshold_db = -5.0;  // below this the link is in outage
  double efficiency = 1.0;   // scaling applied to the Shannon rate
};

// Distance-driven LOS/NLOS/outage state probabilities (urban fit):
//   p_outage(d) = max(0, 1 - exp(-a_out d + b_out))
//   p_los(d)    = (1 - p_outage(d)) exp(-d / los_decay_m)
// with NLOS taking the rest.
struct StateModel {
  double a_out = 1.0 / 30.0;
  double b_out = 5.2;
  double los_decay_m = 67.1;
  bool force_los = false;        // test hook: every pair is LOS, no outage
  bool zero_shadowing = false;   // test hook: deterministic path loss
};

double p_outage(double d_m, const StateModel& sm);
double p_los(double d_m, const StateModel& sm);

// Path loss in dB at distance d_m with shadowing realization shadow_db
// (already scaled by the state's sigma). d_m must be > 0.
double path_loss_db(double d_m, ChannelState state, double shadow_db,
                    const ChannelParams& cp);

// SNR in dB for a beamformed link at distance d_m.
double link_snr_db(double d_m, ChannelState state, double shadow_db,
                   const ChannelParams& cp);

// Shannon-rate capacity in Gbit/s, or nullopt when the SNR falls below the
// outage threshold.
std::optional<double> link_capacity_gbps(double d_m, ChannelState state,
                                         double shadow_db,
                                         const ChannelParams& cp);

// Square-grid deployment: n x n mmBSs spaced d_g metres apart, one eNB at
// the grid centre, optionally `ues_per_mmbs` UEs scattered around each mmBS
// (radius uniform in [5, d_g/2], angle uniform). Candidate links: eNB->mmBS,
// mmBS<->mmBS and mmBS->UE pairs within `cutoff_m`; each candidate draws a
// channel state and per-state shadowing, and survives only if not in outage.
struct GridScenario {
  int n = 4;
  double d_g = 100.0;      // grid spacing, metres
  int enb_rf = 10;         // eNB RF chains (R)
  int mmbs_rf = 1;         // mmBS RF chains (R_W)
  int ues_per_mmbs = 0;
  double cutoff_m = 200.0;
  std::uint64_t seed = 1;
  StateModel state_model;
};

// Deterministic in (scenario, params): the variate stream is fixed by the
// seed and the documented draw order, independent of draw outcomes.
Network generate_grid(const GridScenario& sc, const ChannelParams& cp);

// JSON round-trip for parameter files (--params): top-level keys "channel",
// "state_model", "scenario", all optional, unknown keys rejected.
struct ScenarioFile {
  ChannelParams channel;
  GridScenario scenario;
};
ScenarioFile scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioFile& sf);
ScenarioFile load_scenario_file(const std::string& path);

}  // namespace mmsched
