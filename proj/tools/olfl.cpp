// Copyright 2026 The olfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// olfl: run experiments, benchmark per-trial cost, and self-verify.
//
// Exit codes: 0 success, 1 invalid input or I/O failure, 2 a verify check
// failed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "olfl/allocation_counter.hpp"
#include "olfl/experiment.hpp"
#include "olfl/verification.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (std::string_view field : olfl::detail::split_commas(text)) {
    const std::string_view item = olfl::detail::trim(field);
    if (item.empty()) continue;
    std::uint64_t seed = 0;
    if (item.front() == '+' || !olfl::detail::parse_number(item, seed))
      throw olfl::ConfigError("--seeds: '" + std::string(item) + "' is not a seed");
    seeds.push_back(seed);
  }
  if (seeds.empty()) throw olfl::ConfigError("--seeds: at least one seed is required");
  return seeds;
}

void apply_scenario(const std::string& text, olfl::ScenarioSpec& spec) {
  const std::string prefix = "replay:";
  if (text.rfind(prefix, 0) == 0) {
    spec.kind = olfl::ScenarioKind::kReplay;
    spec.trace_path = text.substr(prefix.size());
    if (spec.trace_path.empty()) throw olfl::ConfigError("--scenario replay: needs a path");
    return;
  }
  spec.kind = olfl::scenario_kind_from_string(text);
}

struct RunArgs {
  std::string config_path;
  std::string algo = "fl";
  std::size_t n = 0, t = 0;
  double c_max = 1.0, d_max = 1.0;
  std::size_t k = 0;
  std::string scenario = "iid";
  std::uint64_t scenario_seed = 0;
  double drift_step = 0.05, drift_reach = 0.5;
  std::string seeds = "1";
  std::string out;
  std::size_t threads = 0;
};

int do_run(const RunArgs& a, const CLI::App& cmd) {
  olfl::ExperimentConfig cfg;
  if (!a.config_path.empty()) {
    std::ifstream in(a.config_path);
    if (!in) throw olfl::ConfigError("cannot open config " + a.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw olfl::ConfigError(a.config_path + ": " + e.what());
    }
    cfg = olfl::config_from_json(j.contains("config") ? j.at("config") : j);
  }
  // Explicit flags override a loaded config.
  const auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (a.config_path.empty() || given("--algo")) cfg.algo = olfl::algorithm_from_string(a.algo);
  if (a.config_path.empty() || given("--n")) cfg.game.sites = a.n;
  if (a.config_path.empty() || given("--t")) cfg.game.trials = a.t;
  if (a.config_path.empty() || given("--c-max")) cfg.game.opening_max = a.c_max;
  if (a.config_path.empty() || given("--d-max")) cfg.game.connection_max = a.d_max;
  if (given("--k")) cfg.k = a.k;
  if (a.config_path.empty() || given("--scenario")) apply_scenario(a.scenario, cfg.scenario);
  if (a.config_path.empty() || given("--seed")) cfg.scenario.seed = a.scenario_seed;
  if (a.config_path.empty() || given("--drift-step")) cfg.scenario.drift_step = a.drift_step;
  if (a.config_path.empty() || given("--drift-reach")) cfg.scenario.drift_reach = a.drift_reach;
  if (a.config_path.empty() || given("--seeds")) cfg.seeds = parse_seeds(a.seeds);
  if (a.config_path.empty() || given("--out")) cfg.output = a.out;
  cfg.threads = a.threads;
  if (cfg.output.empty()) throw olfl::ConfigError("--out is required");

  const olfl::ExperimentResult result = olfl::run_experiment(cfg);
  olfl::emit_results(result, cfg.output);

  const auto& agg = result.aggregate;
  std::cout.precision(10);
  std::cout << olfl::to_string(cfg.algo) << " N=" << cfg.game.sites
            << " T=" << cfg.game.trials << " seeds=" << result.runs.size()
            << "\n  mean cumulative loss " << agg.mean_cumulative_loss
            << "  95% CI [" << agg.ci95_low << ", " << agg.ci95_high << "]"
            << "\n  comparator " << result.runs.front().comparator.set.to_string()
            << " loss " << result.runs.front().comparator.loss
            << (result.runs.front().comparator.approximate ? " (approximate)" : "")
            << "\n  mean regret " << agg.mean_regret << "  mean bound "
            << agg.mean_bound << "\n  wrote " << olfl::aggregate_json_path(cfg.output)
            << '\n';
  return 0;
}

int do_bench(const std::vector<std::size_t>& sizes, std::size_t horizon,
             std::size_t measured) {
  const auto rows = olfl::bench_per_trial(sizes, horizon, measured);
  std::cout << "sites,median_trial_ms,ratio,peak_heap_bytes,memory_ratio\n";
  std::cout.precision(6);
  for (const auto& row : rows) {
    std::cout << row.sites << ',' << row.median_trial_seconds * 1e3 << ',';
    if (std::isfinite(row.ratio)) std::cout << row.ratio;
    std::cout << ',' << row.peak_bytes << ',';
    if (std::isfinite(row.memory_ratio)) std::cout << row.memory_ratio;
    std::cout << '\n';
  }
  return 0;
}

int do_verify(bool quick) {
  olfl::verify::Options opt;
  opt.quick = quick;
  int failures = 0;
  for (const auto& check : olfl::verify::all_checks()) {
    const olfl::verify::CheckResult r = check(opt);
    std::cout << olfl::verify::format_line(r) << std::endl;
    if (!r.passed) ++failures;
  }
  return failures ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online facility location learners, oracles and adversaries"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "run a seeded experiment batch");
  run_cmd->add_option("--config", run.config_path, "experiment JSON (flags override it)");
  run_cmd->add_option("--algo", run.algo,
                      "fl | fl-fixed | fl-bounded | hedge-exact | ftl-greedy | cheapest-singleton");
  run_cmd->add_option("--n", run.n, "number of sites");
  run_cmd->add_option("--t", run.t, "number of trials");
  run_cmd->add_option("--c-max", run.c_max, "opening cost bound C");
  run_cmd->add_option("--d-max", run.d_max, "connection cost bound D");
  run_cmd->add_option("--k", run.k, "cardinality for fl-fixed and fl-bounded");
  run_cmd->add_option("--scenario", run.scenario, "killer | iid | drift | replay:PATH");
  run_cmd->add_option("--seed,--scenario-seed", run.scenario_seed, "scenario generator seed");
  run_cmd->add_option("--drift-step", run.drift_step, "drift: user step std-dev");
  run_cmd->add_option("--drift-reach", run.drift_reach, "drift: saturation distance");
  run_cmd->add_option("--seeds", run.seeds, "learner seeds, comma separated");
  run_cmd->add_option("--out", run.out, "output path prefix");
  run_cmd->add_option("--threads", run.threads, "worker threads (0: all cores)");

  std::vector<std::size_t> sizes{4096, 8192, 16384};
  std::size_t horizon = 1000, measured = 0;
  CLI::App* bench_cmd = app.add_subcommand("bench", "median per-trial time of fl");
  bench_cmd->add_option("--sizes", sizes, "ascending site counts")->delimiter(',');
  bench_cmd->add_option("--t", horizon, "horizon used to configure the learner");
  bench_cmd->add_option("--trials", measured, "trials measured (default: all)");

  bool quick = false;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the oracle-backed checks");
  verify_cmd->add_flag("--quick", quick, "shortened settings for smoke runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run_cmd) return do_run(run, *run_cmd);
    if (*bench_cmd) return do_bench(sizes, horizon, measured);
    if (*verify_cmd) return do_verify(quick);
  } catch (const olfl::Error& e) {
    std::cerr << "olfl: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "olfl: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
