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

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mmsched/bench.hpp"
#include "mmsched/channel.hpp"
#include "mmsched/core.hpp"

namespace {

// Expands --algo values ("all" fans out) into a duplicate-free algo list.
std::vector<mmsched::BenchAlgo> parse_algos(
    const std::vector<std::string>& names) {
  std::vector<mmsched::BenchAlgo> algos;
  const auto add = [&](mmsched::BenchAlgo a) {
    for (mmsched::BenchAlgo have : algos) {
      if (have == a) return;
    }
    algos.push_back(a);
  };
  for (const std::string& name : names) {
    if (name == "all") {
      add(mmsched::BenchAlgo::Opt);
      add(mmsched::BenchAlgo::Ec);
      add(mmsched::BenchAlgo::MaxTput);
    } else {
      add(mmsched::bench_algo_from_string(name));
    }
  }
  return algos;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Fair scheduling benchmarks for millimetre-wave backhaul grids"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand(
      "run", "generate grid networks and benchmark the schedulers");
  int grid_n = 0;
  double dg = 0;
  int enb_rf = 0;
  int mmbs_rf = 0;
  int ues_per_mmbs = 0;
  double cutoff = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> algo_names;
  std::vector<double> granularities;
  int trials = 0;
  int threads = 0;
  std::string out_path, params_path, format;
  bool omit_runtime = false;

  run->add_option("--grid-n", grid_n, "stations per grid side")
      ->check(CLI::PositiveNumber);
  run->add_option("--dg", dg, "grid spacing in metres")
      ->check(CLI::PositiveNumber);
  run->add_option("--enb-rf", enb_rf, "macro station RF chains")
      ->check(CLI::PositiveNumber);
  run->add_option("--mmbs-rf", mmbs_rf, "mmBS RF chains")
      ->check(CLI::PositiveNumber);
  run->add_option("--ues-per-mmbs", ues_per_mmbs,
                  "UEs placed around each mmBS (0 = backhaul only)")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--cutoff", cutoff, "link distance cutoff in metres")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "base seed; trial i draws with seed + i");
  run->add_option("--algo", algo_names,
                  "scheduler(s): opt, ec, max-tput or all (repeatable)");
  run->add_option("--granularity", granularities,
                  "slot quantum t_g for ec (repeatable, one row per value)")
      ->check(CLI::Range(1e-9, 1.0));
  run->add_option("--trials", trials, "independent network draws")
      ->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "parallel trial workers (0 = auto)");
  run->add_option("--out", out_path, "output file (default: stdout)");
  run->add_option("--format", format, "output format override")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--params", params_path,
                  "JSON file with channel/state_model/scenario parameters");
  run->add_flag("--omit-runtime", omit_runtime,
                "drop the runtime_ms column so repeat runs are byte-identical");

  CLI11_PARSE(app, argc, argv);

  try {
    mmsched::BenchConfig cfg;
    if (!params_path.empty()) {
      const mmsched::ScenarioFile sf = mmsched::load_scenario_file(params_path);
      cfg.grid = sf.scenario;
      cfg.channel = sf.channel;
    }
    // Explicit flags win over the params file.
    if (run->count("--grid-n")) cfg.grid.n = grid_n;
    if (run->count("--dg")) cfg.grid.d_g = dg;
    if (run->count("--enb-rf")) cfg.grid.enb_rf = enb_rf;
    if (run->count("--mmbs-rf")) cfg.grid.mmbs_rf = mmbs_rf;
    if (run->count("--ues-per-mmbs")) cfg.grid.ues_per_mmbs = ues_per_mmbs;
    if (run->count("--cutoff")) cfg.grid.cutoff_m = cutoff;
    if (run->count("--seed")) cfg.grid.seed = seed;
    if (run->count("--trials")) cfg.trials = trials;
    if (run->count("--threads")) cfg.threads = threads;
    if (!granularities.empty()) cfg.granularities = granularities;
    cfg.algos = parse_algos(algo_names.empty()
                                ? std::vector<std::string>{"opt"}
                                : algo_names);
    cfg.include_runtime = !omit_runtime;

    const mmsched::BenchResult result = mmsched::run_bench(cfg);
    const bool json = format == "json" ||
                      (format.empty() && ends_with(out_path, ".json"));
    const std::string text =
        json ? mmsched::bench_to_json(result, cfg.include_runtime)
             : mmsched::bench_to_csv(result, cfg.include_runtime);
    if (out_path.empty()) {
      std::fputs(text.c_str(), stdout);
    } else {
      mmsched::save_text_file(out_path, text);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
