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
#include <string>
#include <vector>

#include "mmsched/channel.hpp"
#include "mmsched/core.hpp"

namespace mmsched {

enum class BenchAlgo { Opt, Ec, MaxTput };

const char* to_string(BenchAlgo a);
BenchAlgo bench_algo_from_string(const std::string& s);

struct BenchConfig {
  GridScenario grid;  // grid.seed is the base seed; trial i draws seed + i
  ChannelParams channel;
  std::vector<BenchAlgo> algos = {BenchAlgo::Opt};
  std::vector<double> granularities = {0.01};  // one Ec row per value
  int trials = 1;
  int threads = 0;  // OpenMP worker cap; <= 0 leaves the runtime default
  bool include_runtime = true;
  // Draws that leave a station unreachable are redrawn with a bumped seed
  // this many times before giving up.
  int max_regen_attempts = 50;
};

// One CSV row. Fields that do not apply to an algorithm (granularity for
// the exact solver, rates for the unfairness bound, ...) render as empty
// cells; the *_set flags track that.
struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;  // seed actually used after redraws
  int n = 0;
  double dg = 0;
  int enb_rf = 0;
  int mmbs_rf = 0;
  int ues_per_mmbs = 0;
  BenchAlgo algo = BenchAlgo::Opt;
  double t_g = 0;
  bool t_g_set = false;
  double theta = 0;  // optimum (exact) or relaxation value (approximate)
  double theta_realized = 0;  // worst destination rate of the schedule
  double network_tput = 0;
  bool rates_set = false;
  double max_tput_baseline = 0;
  int slots = 0;  // non-idle slots
  bool slots_set = false;
  int kappa = 0;
  bool kappa_set = false;
  double runtime_ms = 0;
};

struct BenchResult {
  std::vector<TrialRecord> records;
};

// Runs every (trial, algorithm[, granularity]) combination. Trials run in
// parallel when OpenMP is available; record order and all values except
// runtime_ms are independent of the worker count.
BenchResult run_bench(const BenchConfig& cfg);

// Stable text renderings: fixed column order, %.12g numbers, '\n' endings.
// With include_runtime off the runtime_ms column/field is dropped entirely,
// making repeat runs byte-identical.
std::string bench_to_csv(const BenchResult& r, bool include_runtime);
std::string bench_to_json(const BenchResult& r, bool include_runtime);

}  // namespace mmsched
