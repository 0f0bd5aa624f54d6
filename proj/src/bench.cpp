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

#include "mmsched/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <utility>

#include "json.hpp"

#include "mmsched/ec.hpp"
#include "mmsched/mtfs.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mmsched {

namespace {

// Seed stride between redraw attempts; any odd constant well clear of the
// trial indices works.
constexpr std::uint64_t kRegenStride = 1000003;

struct TrialNet {
  Network net;
  std::uint64_t seed = 0;
};

// Draws the trial's network, bumping the seed deterministically until every
// station (and UE, if any) is reachable.
TrialNet draw_network(const BenchConfig& cfg, int trial) {
  GridScenario sc = cfg.grid;
  std::uint64_t seed = cfg.grid.seed + static_cast<std::uint64_t>(trial);
  for (int attempt = 0;; ++attempt) {
    sc.seed = seed;
    Network net = generate_grid(sc, cfg.channel);
    const bool ok = net.has_ues() ? all_reachable(net)
                                  : (!net.mmbs_ids().empty() &&
                                     check_connectivity(net));
    if (ok) return {std::move(net), seed};
    if (attempt + 1 >= cfg.max_regen_attempts)
      throw Error(ErrorCode::Disconnected,
                  "no connected draw after " +
                      std::to_string(cfg.max_regen_attempts) + " attempts");
    seed += kRegenStride;
  }
}

int rows_per_trial(const BenchConfig& cfg) {
  int rows = 0;
  for (BenchAlgo a : cfg.algos)
    rows += a == BenchAlgo::Ec ? static_cast<int>(cfg.granularities.size()) : 1;
  return rows;
}

void run_trial(const BenchConfig& cfg, int trial, TrialRecord* out) {
  const TrialNet tn = draw_network(cfg, trial);
  const bool access = tn.net.has_ues();
  const double baseline = max_tput_baseline(tn.net);

  TrialRecord proto;
  proto.trial = trial;
  proto.seed = tn.seed;
  proto.n = cfg.grid.n;
  proto.dg = cfg.grid.d_g;
  proto.enb_rf = cfg.grid.enb_rf;
  proto.mmbs_rf = cfg.grid.mmbs_rf;
  proto.ues_per_mmbs = cfg.grid.ues_per_mmbs;
  proto.max_tput_baseline = baseline;

  int slot = 0;
  for (BenchAlgo a : cfg.algos) {
    switch (a) {
      case BenchAlgo::Opt: {
        TrialRecord rec = proto;
        rec.algo = a;
        const MtfsResult res =
            access ? solve_access_mtfs(tn.net) : solve_mtfs(tn.net);
        rec.theta = res.theta;
        rec.theta_realized = res.throughput.min();
        rec.network_tput = res.network_tput;
        rec.rates_set = true;
        rec.slots = res.schedule.non_idle_slots();
        rec.slots_set = true;
        rec.runtime_ms = res.log.wall_ms;
        out[slot++] = std::move(rec);
        break;
      }
      case BenchAlgo::Ec: {
        for (double tg : cfg.granularities) {
          TrialRecord rec = proto;
          rec.algo = a;
          EcConfig ec;
          ec.granularity = tg;
          ec.variant = access ? EcVariant::Access : EcVariant::SingleRf;
          const EcRun res = run_ec(tn.net, ec);
          rec.t_g = tg;
          rec.t_g_set = true;
          rec.theta = res.theta_relaxed;
          rec.theta_realized = res.theta_realized;
          rec.network_tput = res.network_tput;
          rec.rates_set = true;
          rec.slots = res.schedule.non_idle_slots();
          rec.slots_set = true;
          rec.kappa = res.kappa;
          rec.kappa_set = true;
          rec.runtime_ms = res.wall_ms;
          out[slot++] = std::move(rec);
        }
        break;
      }
      case BenchAlgo::MaxTput: {
        TrialRecord rec = proto;
        rec.algo = a;
        const auto t0 = std::chrono::steady_clock::now();
        rec.network_tput = baseline;  // rate bound, not a schedule
        rec.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        out[slot++] = std::move(rec);
        break;
      }
    }
  }
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

const char* to_string(BenchAlgo a) {
  switch (a) {
    case BenchAlgo::Opt:
      return "opt";
    case BenchAlgo::Ec:
      return "ec";
    case BenchAlgo::MaxTput:
      return "max-tput";
  }
  return "?";
}

BenchAlgo bench_algo_from_string(const std::string& s) {
  if (s == "opt") return BenchAlgo::Opt;
  if (s == "ec") return BenchAlgo::Ec;
  if (s == "max-tput") return BenchAlgo::MaxTput;
  throw Error(ErrorCode::BadInput, "unknown algorithm '" + s + "'");
}

BenchResult run_bench(const BenchConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorCode::BadInput, "trials must be >= 1");
  if (cfg.algos.empty())
    throw Error(ErrorCode::BadInput, "no algorithms selected");
  for (double tg : cfg.granularities) {
    if (!(tg > 0.0 && tg <= 1.0))
      throw Error(ErrorCode::BadInput, "granularity must be in (0, 1]");
  }
  for (BenchAlgo a : cfg.algos)
    if (a == BenchAlgo::Ec && cfg.granularities.empty())
      throw Error(ErrorCode::BadInput,
                  "the approximate solver needs at least one granularity");
  const int stride = rows_per_trial(cfg);

  BenchResult result;
  result.records.assign(static_cast<size_t>(cfg.trials) * stride,
                        TrialRecord{});
  std::vector<std::exception_ptr> failures(cfg.trials);

#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
  const int threads =
      cfg.threads > 0 ? std::min(cfg.threads, 4 * max_threads) : max_threads;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int t = 0; t < cfg.trials; ++t) {
    try {
      run_trial(cfg, t, result.records.data() + static_cast<size_t>(t) * stride);
    } catch (...) {
      failures[t] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : failures) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

std::string bench_to_csv(const BenchResult& r, bool include_runtime) {
  std::string out =
      "trial,seed,n,dg,enb_rf,mmbs_rf,ues_per_mmbs,algo,t_g,theta,"
      "theta_realized,network_tput,max_tput_baseline,slots,kappa";
  if (include_runtime) out += ",runtime_ms";
  out += '\n';
  for (const TrialRecord& rec : r.records) {
    out += std::to_string(rec.trial);
    out += ',' + std::to_string(rec.seed);
    out += ',' + std::to_string(rec.n);
    out += ',' + num(rec.dg);
    out += ',' + std::to_string(rec.enb_rf);
    out += ',' + std::to_string(rec.mmbs_rf);
    out += ',' + std::to_string(rec.ues_per_mmbs);
    out += ',';
    out += to_string(rec.algo);
    out += ',';
    if (rec.t_g_set) out += num(rec.t_g);
    out += ',';
    if (rec.rates_set) out += num(rec.theta);
    out += ',';
    if (rec.rates_set) out += num(rec.theta_realized);
    out += ',' + num(rec.network_tput);
    out += ',' + num(rec.max_tput_baseline);
    out += ',';
    if (rec.slots_set) out += std::to_string(rec.slots);
    out += ',';
    if (rec.kappa_set) out += std::to_string(rec.kappa);
    if (include_runtime) out += ',' + num(rec.runtime_ms);
    out += '\n';
  }
  return out;
}

std::string bench_to_json(const BenchResult& r, bool include_runtime) {
  nlohmann::json recs = nlohmann::json::array();
  for (const TrialRecord& rec : r.records) {
    nlohmann::json j{{"trial", rec.trial},
                     {"seed", rec.seed},
                     {"n", rec.n},
                     {"dg", rec.dg},
                     {"enb_rf", rec.enb_rf},
                     {"mmbs_rf", rec.mmbs_rf},
                     {"ues_per_mmbs", rec.ues_per_mmbs},
                     {"algo", to_string(rec.algo)},
                     {"network_tput", rec.network_tput},
                     {"max_tput_baseline", rec.max_tput_baseline}};
    if (rec.t_g_set) j["t_g"] = rec.t_g;
    if (rec.rates_set) {
      j["theta"] = rec.theta;
      j["theta_realized"] = rec.theta_realized;
    }
    if (rec.slots_set) j["slots"] = rec.slots;
    if (rec.kappa_set) j["kappa"] = rec.kappa;
    if (include_runtime) j["runtime_ms"] = rec.runtime_ms;
    recs.push_back(std::move(j));
  }
  nlohmann::json doc{{"version", 1}, {"records", std::move(recs)}};
  return doc.dump(2) + "\n";
}

}  // namespace mmsched
