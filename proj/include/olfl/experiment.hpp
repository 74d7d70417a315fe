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

#ifndef OLFL_EXPERIMENT_HPP_
#define OLFL_EXPERIMENT_HPP_

// Experiment runner: plays a learner against a scenario over seeded
// Monte-Carlo repetitions, scores it against the best fixed subset in
// hindsight and writes per-trial CSV, a regret curve and an aggregate JSON.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "olfl/adversaries.hpp"
#include "olfl/core.hpp"
#include "olfl/learners.hpp"
#include "olfl/oracles.hpp"

namespace olfl {

using Rng = std::mt19937_64;

// -- Algorithms ---------------------------------------------------------------

enum class Algorithm {
  kDoubling,           // fl
  kFixedCardinality,   // fl-fixed
  kBoundedCardinality, // fl-bounded
  kExactHedge,         // hedge-exact
  kFtlGreedy,          // ftl-greedy
  kCheapestSingleton,  // cheapest-singleton
};

inline std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kDoubling: return "fl";
    case Algorithm::kFixedCardinality: return "fl-fixed";
    case Algorithm::kBoundedCardinality: return "fl-bounded";
    case Algorithm::kExactHedge: return "hedge-exact";
    case Algorithm::kFtlGreedy: return "ftl-greedy";
    case Algorithm::kCheapestSingleton: return "cheapest-singleton";
  }
  return "unknown";
}

inline Algorithm algorithm_from_string(std::string_view name) {
  for (Algorithm a : {Algorithm::kDoubling, Algorithm::kFixedCardinality,
                      Algorithm::kBoundedCardinality, Algorithm::kExactHedge,
                      Algorithm::kFtlGreedy, Algorithm::kCheapestSingleton}) {
    if (name == to_string(a)) return a;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

inline bool needs_cardinality(Algorithm algo) {
  return algo == Algorithm::kFixedCardinality ||
         algo == Algorithm::kBoundedCardinality;
}

// What a player reports after seeing a trial's costs.
struct StepInfo {
  double lambda = 0.0;
  double scale = 1.0;
  std::size_t cardinality = 0;
  std::size_t segment = 0;
};

class Player {
 public:
  virtual ~Player() = default;
  virtual bool deterministic() const = 0;
  virtual SiteSet play(Rng& rng) = 0;
  virtual StepInfo update(const CostPair& costs) = 0;
};

namespace detail {

class DoublingPlayer final : public Player {
 public:
  explicit DoublingPlayer(const GameConfig& cfg) : learner_(cfg) {}
  bool deterministic() const override { return false; }
  SiteSet play(Rng& rng) override { return learner_.play(rng); }
  StepInfo update(const CostPair& costs) override {
    const DoublingReport r = learner_.update(costs);
    return {r.lambda, r.scale, r.cardinality, r.segment};
  }

 private:
  DoublingLearner learner_;
};

class FixedPlayer final : public Player {
 public:
  FixedPlayer(const GameConfig& cfg, std::size_t k) : learner_(cfg, k) {}
  bool deterministic() const override { return false; }
  SiteSet play(Rng& rng) override { return learner_.play(rng); }
  StepInfo update(const CostPair& costs) override {
    return {learner_.update(costs), 1.0, learner_.cardinality(), 0};
  }

 private:
  FixedCardinalityLearner learner_;
};

class BoundedPlayer final : public Player {
 public:
  BoundedPlayer(const GameConfig& cfg, std::size_t k) : learner_(cfg, k) {}
  bool deterministic() const override { return false; }
  SiteSet play(Rng& rng) override { return learner_.play(rng); }
  StepInfo update(const CostPair& costs) override {
    return {learner_.update(costs), 1.0, learner_.cardinality(), 0};
  }

 private:
  BoundedCardinalityLearner learner_;
};

// lambda is the expected loss under the pre-update weights.
class HedgePlayer final : public Player {
 public:
  explicit HedgePlayer(const GameConfig& cfg) : hedge_(cfg), sites_(cfg.sites) {}
  bool deterministic() const override { return false; }
  SiteSet play(Rng& rng) override { return hedge_.play(rng); }
  StepInfo update(const CostPair& costs) override {
    return {hedge_.update(costs), 1.0, sites_, 0};
  }

 private:
  ExactHedge hedge_;
  std::size_t sites_;
};

// Deterministic players report their realised loss as lambda.
template <typename Leader>
class DeterministicPlayer final : public Player {
 public:
  explicit DeterministicPlayer(const GameConfig& cfg) : leader_(cfg) {}
  bool deterministic() const override { return true; }
  SiteSet play(Rng&) override {
    last_ = leader_.play();
    return *last_;
  }
  StepInfo update(const CostPair& costs) override {
    const double loss = last_ ? facility_loss(costs, *last_) : 0.0;
    const std::size_t size = last_ ? last_->size() : 0;
    leader_.update(costs);
    return {loss, 1.0, size, 0};
  }

 private:
  Leader leader_;
  std::optional<SiteSet> last_;
};

}  // namespace detail

inline std::unique_ptr<Player> make_player(Algorithm algo,
                                           const GameConfig& cfg,
                                           std::optional<std::size_t> k) {
  switch (algo) {
    case Algorithm::kDoubling:
      return std::make_unique<detail::DoublingPlayer>(cfg);
    case Algorithm::kFixedCardinality:
      return std::make_unique<detail::FixedPlayer>(cfg, k.value_or(1));
    case Algorithm::kBoundedCardinality:
      return std::make_unique<detail::BoundedPlayer>(cfg, k.value_or(1));
    case Algorithm::kExactHedge:
      return std::make_unique<detail::HedgePlayer>(cfg);
    case Algorithm::kFtlGreedy:
      return std::make_unique<detail::DeterministicPlayer<FtlGreedy>>(cfg);
    case Algorithm::kCheapestSingleton:
      return std::make_unique<detail::DeterministicPlayer<CheapestSingleton>>(
          cfg);
  }
  throw ConfigError("unknown algorithm");
}

// -- Bounds -------------------------------------------------------------------

// Closed-form cumulative-loss bounds evaluated at comparator loss
// `comparator_loss` for a set of `comparator_size` sites.
inline double fixed_cardinality_bound(const GameConfig& g, std::size_t k,
                                      double comparator_loss) {
  const double u = static_cast<double>(log_horizon_factor(g.trials));
  const double C = g.opening_max, D = g.connection_max;
  return u * comparator_loss +
         (2.0 * static_cast<double>(k) * (C + D) * u + D) *
             std::sqrt(std::log(static_cast<double>(g.sites)) *
                       static_cast<double>(g.trials));
}

inline double bounded_cardinality_bound(const GameConfig& g, std::size_t k,
                                        double comparator_loss) {
  const double u = static_cast<double>(log_horizon_factor(g.trials));
  const double C = g.opening_max, D = g.connection_max;
  return u * comparator_loss +
         (2.0 * static_cast<double>(k) * (2.0 * C + D) * u + (C + D)) *
             std::sqrt(std::log(2.0 * static_cast<double>(g.sites)) *
                       static_cast<double>(g.trials));
}

// Order-of-magnitude reference for the doubling learner (unit constants).
inline double doubling_reference_bound(const GameConfig& g,
                                       std::size_t comparator_size,
                                       double comparator_loss) {
  const double u = static_cast<double>(log_horizon_factor(g.trials));
  const double T = static_cast<double>(g.trials);
  return u * comparator_loss +
         static_cast<double>(comparator_size) *
             (g.opening_max + g.connection_max) * std::log(T) *
             std::sqrt(std::log(static_cast<double>(g.sites)) * T);
}

inline double hedge_bound(const GameConfig& g, double comparator_loss) {
  const double actions = std::ldexp(1.0, static_cast<int>(g.sites)) - 1.0;
  return comparator_loss +
         (static_cast<double>(g.sites) * g.opening_max + g.connection_max) *
             std::sqrt(static_cast<double>(g.trials) * std::log(actions) / 2.0);
}

// -- Configuration ------------------------------------------------------------

struct ExperimentConfig {
  GameConfig game;
  Algorithm algo = Algorithm::kDoubling;
  std::optional<std::size_t> k;
  ScenarioSpec scenario;
  std::vector<std::uint64_t> seeds{1};
  std::string output;
  std::size_t threads = 0;  // 0: one per hardware thread

  void validate() const {
    game.validate();
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (needs_cardinality(algo)) {
      if (!k) throw ConfigError(to_string(algo) + " requires --k");
      if (*k < 1 || *k > game.sites)
        throw ConfigError("K = " + std::to_string(*k) + " outside 1.." +
                          std::to_string(game.sites));
    }
    if (algo == Algorithm::kExactHedge && game.sites > kSubsetEnumerationCap)
      throw ConfigError("hedge-exact supports at most 16 sites");
  }

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.game == b.game && a.algo == b.algo && a.k == b.k &&
           a.scenario == b.scenario && a.seeds == b.seeds &&
           a.output == b.output;
  }
};

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["game"] = {{"sites", cfg.game.sites},
               {"trials", cfg.game.trials},
               {"opening_max", cfg.game.opening_max},
               {"connection_max", cfg.game.connection_max}};
  j["algo"] = to_string(cfg.algo);
  j["k"] = cfg.k ? nlohmann::json(*cfg.k) : nlohmann::json(nullptr);
  j["scenario"] = {{"kind", to_string(cfg.scenario.kind)},
                   {"seed", cfg.scenario.seed},
                   {"drift_step", cfg.scenario.drift_step},
                   {"drift_reach", cfg.scenario.drift_reach},
                   {"trace_path", cfg.scenario.trace_path}};
  j["seeds"] = cfg.seeds;
  j["output"] = cfg.output;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig cfg;
    const auto& g = j.at("game");
    cfg.game.sites = g.at("sites").get<std::size_t>();
    cfg.game.trials = g.at("trials").get<std::size_t>();
    cfg.game.opening_max = g.at("opening_max").get<double>();
    cfg.game.connection_max = g.at("connection_max").get<double>();
    cfg.algo = algorithm_from_string(j.at("algo").get<std::string>());
    if (j.contains("k") && !j.at("k").is_null())
      cfg.k = j.at("k").get<std::size_t>();
    const auto& s = j.at("scenario");
    cfg.scenario.kind = scenario_kind_from_string(s.at("kind").get<std::string>());
    cfg.scenario.seed = s.value("seed", std::uint64_t{0});
    cfg.scenario.drift_step = s.value("drift_step", 0.05);
    cfg.scenario.drift_reach = s.value("drift_reach", 0.5);
    cfg.scenario.trace_path = s.value("trace_path", std::string());
    cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    cfg.output = j.value("output", std::string());
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
}

// -- Results ------------------------------------------------------------------

struct TrialRecord {
  std::size_t trial = 0;  // 1-based
  SiteSet action;
  double loss = 0.0;
  double lambda = 0.0;
  double scale = 1.0;
  std::size_t cardinality = 0;
  std::size_t segment = 0;
};

struct Comparator {
  SiteSet set;
  double loss = 0.0;
  bool approximate = false;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
  std::vector<CostPair> costs;  // as revealed, one per trial
  double cumulative_loss = 0.0;
  Comparator comparator;
  double regret = 0.0;           // cumulative - ceil(ln(T)/2) * comparator
  double regret_raw = 0.0;       // cumulative - comparator
  double bound = std::numeric_limits<double>::quiet_NaN();
  double bound_normalized = std::numeric_limits<double>::quiet_NaN();
  double mean_trial_seconds = 0.0;
  double median_trial_seconds = 0.0;
};

struct Aggregate {
  double mean_cumulative_loss = 0.0;
  double stddev_cumulative_loss = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  double mean_regret = 0.0;
  double mean_bound = std::numeric_limits<double>::quiet_NaN();
  double mean_trial_seconds = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  Aggregate aggregate;
};

// Mean and normal-approximation 95% interval.
struct MeanInterval {
  double mean = 0.0;
  double stddev = 0.0;
  double low = 0.0;
  double high = 0.0;
};

inline MeanInterval mean_ci95(std::span<const double> xs) {
  MeanInterval out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  const double half =
      1.959963984540054 * out.stddev / std::sqrt(static_cast<double>(xs.size()));
  out.low = out.mean - half;
  out.high = out.mean + half;
  return out;
}

// Cardinality window the comparator is chosen from.
struct CardinalityWindow {
  std::size_t min = 1;
  std::size_t max = 1;
};

inline CardinalityWindow comparator_window(const ExperimentConfig& cfg) {
  switch (cfg.algo) {
    case Algorithm::kFixedCardinality: return {*cfg.k, *cfg.k};
    case Algorithm::kBoundedCardinality: return {1, *cfg.k};
    default: return {1, cfg.game.sites};
  }
}

// Exact for N <= 16; otherwise the better of the greedy leader and the best
// singleton that fit the window, flagged approximate.
inline Comparator choose_comparator(std::span<const CostPair> history,
                                    CardinalityWindow window) {
  const std::size_t n = history.front().size();
  if (n <= kSubsetEnumerationCap) {
    FixedSubsetResult r = best_fixed_subset(history, window.max, window.min);
    return {std::move(r.set), r.loss, false};
  }
  std::optional<Comparator> best;
  const auto consider = [&](SiteSet set) {
    if (set.size() < window.min || set.size() > window.max) return;
    double loss = 0.0;
    for (const CostPair& c : history) loss += facility_loss(c, set);
    if (!best || loss < best->loss) best = Comparator{std::move(set), loss, true};
  };
  consider(ftl_greedy_play(history));
  if (window.min == 1) consider(best_fixed_subset(history, 1).set);
  if (!best) {
    throw CapacityError(
        "no approximate comparator fits the cardinality window for N > 16");
  }
  return *best;
}

inline double bound_for(const ExperimentConfig& cfg, const Comparator& cmp) {
  switch (cfg.algo) {
    case Algorithm::kFixedCardinality:
      return fixed_cardinality_bound(cfg.game, *cfg.k, cmp.loss);
    case Algorithm::kBoundedCardinality:
      return bounded_cardinality_bound(cfg.game, *cfg.k, cmp.loss);
    case Algorithm::kDoubling:
      return doubling_reference_bound(cfg.game, cmp.set.size(), cmp.loss);
    case Algorithm::kExactHedge:
      return hedge_bound(cfg.game, cmp.loss);
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

// The comparator-free part of the bound, i.e. bound minus the scaled
// comparator term.
inline double bound_excess(const ExperimentConfig& cfg, const Comparator& cmp) {
  const double u = cfg.algo == Algorithm::kExactHedge
                       ? 1.0
                       : static_cast<double>(log_horizon_factor(cfg.game.trials));
  return bound_for(cfg, cmp) - u * cmp.loss;
}

// -- Running ------------------------------------------------------------------

// One seeded repetition of the game. On every trial the costs are fixed
// before the learner draws and revealed only to update(). Adaptive
// scenarios react to the current action of deterministic players (Nature
// can simulate them) and to the previous realised action of randomised
// ones.
inline RunResult run_single(const ExperimentConfig& cfg,
                            const ScenarioSource& scenario, std::uint64_t seed,
                            std::optional<Comparator> shared_comparator =
                                std::nullopt) {
  RunResult run;
  run.seed = seed;
  Rng rng(seed);
  std::unique_ptr<Player> player = make_player(cfg.algo, cfg.game, cfg.k);
  const std::size_t T = cfg.game.trials;
  run.records.reserve(T);
  run.costs.reserve(T);
  std::vector<double> seconds;
  seconds.reserve(T);
  std::optional<SiteSet> previous;

  for (std::size_t t = 0; t < T; ++t) {
    try {
      const auto start = std::chrono::steady_clock::now();
      std::optional<CostPair> costs;
      if (!(scenario.adaptive() && player->deterministic()))
        costs = scenario.costs(t, previous ? &*previous : nullptr);
      SiteSet action = player->play(rng);
      if (!costs) costs = scenario.costs(t, &action);
      const double loss = facility_loss(*costs, action);
      const StepInfo info = player->update(*costs);
      seconds.push_back(std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count());
      run.cumulative_loss += loss;
      run.records.push_back({t + 1, action, loss, info.lambda, info.scale,
                             info.cardinality, info.segment});
      run.costs.push_back(std::move(*costs));
      previous = std::move(action);
    } catch (const Error& e) {
      throw Error("seed " + std::to_string(seed) + ", trial " +
                  std::to_string(t + 1) + ": " + e.what());
    }
  }

  run.comparator = shared_comparator
                       ? *shared_comparator
                       : choose_comparator(run.costs, comparator_window(cfg));
  const double u = static_cast<double>(log_horizon_factor(T));
  run.regret = run.cumulative_loss - u * run.comparator.loss;
  run.regret_raw = run.cumulative_loss - run.comparator.loss;
  run.bound = bound_for(cfg, run.comparator);
  run.bound_normalized = run.regret / bound_excess(cfg, run.comparator);

  double total = 0.0;
  for (double s : seconds) total += s;
  run.mean_trial_seconds = total / static_cast<double>(T);
  std::nth_element(seconds.begin(), seconds.begin() + T / 2, seconds.end());
  run.median_trial_seconds = seconds[T / 2];
  return run;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const ScenarioSource& scenario) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  result.runs.resize(cfg.seeds.size());

  std::optional<Comparator> shared;
  if (!scenario.adaptive())
    shared = choose_comparator(scenario.fixed_sequence(), comparator_window(cfg));

  std::size_t workers = cfg.threads ? cfg.threads
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  std::mutex failure_lock;
  std::exception_ptr failure;
  const auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.seeds.size()) return;
      try {
        result.runs[i] = run_single(cfg, scenario, cfg.seeds[i], shared);
      } catch (...) {
        std::lock_guard<std::mutex> hold(failure_lock);
        if (!failure) failure = std::current_exception();
        next.store(cfg.seeds.size());
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> totals, regrets, bounds;
  double seconds = 0.0;
  for (const RunResult& r : result.runs) {
    totals.push_back(r.cumulative_loss);
    regrets.push_back(r.regret);
    bounds.push_back(r.bound);
    seconds += r.mean_trial_seconds;
  }
  const MeanInterval ci = mean_ci95(totals);
  Aggregate& agg = result.aggregate;
  agg.mean_cumulative_loss = ci.mean;
  agg.stddev_cumulative_loss = ci.stddev;
  agg.ci95_low = ci.low;
  agg.ci95_high = ci.high;
  agg.mean_regret = mean_ci95(regrets).mean;
  agg.mean_bound = mean_ci95(bounds).mean;
  agg.mean_trial_seconds = seconds / static_cast<double>(result.runs.size());
  return result;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ScenarioSource scenario(cfg.scenario, cfg.game);
  return run_experiment(cfg, scenario);
}

// -- Output -------------------------------------------------------------------

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot open for writing");
  out.precision(17);
  return out;
}

inline void close_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(path + ": write failed");
}

}  // namespace detail

inline std::string trials_csv_path(const std::string& prefix, std::uint64_t seed) {
  return prefix + "_seed" + std::to_string(seed) + "_trials.csv";
}
inline std::string costs_csv_path(const std::string& prefix, std::uint64_t seed) {
  return prefix + "_seed" + std::to_string(seed) + "_costs.csv";
}
inline std::string aggregate_json_path(const std::string& prefix) {
  return prefix + "_aggregate.json";
}
inline std::string regret_curve_path(const std::string& prefix) {
  return prefix + "_regret_curve.csv";
}

inline void write_trial_records(std::ostream& out, const RunResult& run) {
  out << "seed,trial,action,loss,lambda,theta,k,segment\n";
  for (const TrialRecord& r : run.records) {
    out << run.seed << ',' << r.trial << ',' << r.action.to_string() << ','
        << r.loss << ',' << r.lambda << ',' << r.scale << ',' << r.cardinality
        << ',' << r.segment << '\n';
  }
}

// One row per trial: mean cumulative loss across seeds, mean cumulative
// comparator loss, the regret against the scaled comparator and the bound
// evaluated on the comparator's prefix loss.
inline void write_regret_curve(std::ostream& out, const ExperimentResult& result) {
  const ExperimentConfig& cfg = result.config;
  const std::size_t T = cfg.game.trials;
  const double u = cfg.algo == Algorithm::kExactHedge
                       ? 1.0
                       : static_cast<double>(log_horizon_factor(T));
  std::vector<double> learner(T, 0.0), comparator(T, 0.0), excess_sum(1, 0.0);
  double excess = 0.0;
  for (const RunResult& run : result.runs) {
    double a = 0.0, b = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      a += run.records[t].loss;
      b += facility_loss(run.costs[t], run.comparator.set);
      learner[t] += a;
      comparator[t] += b;
    }
    excess += bound_excess(cfg, run.comparator);
  }
  const double runs = static_cast<double>(result.runs.size());
  excess /= runs;
  out << "trial,cumulative_loss,comparator_loss,regret,bound\n";
  for (std::size_t t = 0; t < T; ++t) {
    const double l = learner[t] / runs;
    const double c = comparator[t] / runs;
    out << (t + 1) << ',' << l << ',' << c << ',' << (l - u * c) << ','
        << (u * c + excess) << '\n';
  }
}

inline nlohmann::json aggregate_to_json(const ExperimentResult& result) {
  const auto num = [](double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["config"] = config_to_json(result.config);
  nlohmann::json runs = nlohmann::json::array();
  for (const RunResult& r : result.runs) {
    runs.push_back({{"seed", r.seed},
                    {"cumulative_loss", r.cumulative_loss},
                    {"comparator",
                     {{"set", r.comparator.set.to_string()},
                      {"loss", r.comparator.loss},
                      {"approximate", r.comparator.approximate}}},
                    {"regret", r.regret},
                    {"regret_raw", r.regret_raw},
                    {"bound", num(r.bound)},
                    {"bound_normalized", num(r.bound_normalized)},
                    {"mean_trial_seconds", r.mean_trial_seconds},
                    {"median_trial_seconds", r.median_trial_seconds}});
  }
  j["runs"] = std::move(runs);
  const Aggregate& a = result.aggregate;
  j["aggregate"] = {{"mean_cumulative_loss", a.mean_cumulative_loss},
                    {"stddev_cumulative_loss", a.stddev_cumulative_loss},
                    {"ci95_low", a.ci95_low},
                    {"ci95_high", a.ci95_high},
                    {"mean_regret", a.mean_regret},
                    {"mean_bound", num(a.mean_bound)},
                    {"mean_trial_seconds", a.mean_trial_seconds}};
  return j;
}

// Writes the per-seed trial and cost CSVs, the regret curve and the
// aggregate JSON under `prefix`.
inline void emit_results(const ExperimentResult& result, const std::string& prefix) {
  for (const RunResult& run : result.runs) {
    const std::string trials = trials_csv_path(prefix, run.seed);
    auto out = detail::open_output(trials);
    write_trial_records(out, run);
    detail::close_output(out, trials);

    const std::string costs = costs_csv_path(prefix, run.seed);
    auto cost_out = detail::open_output(costs);
    write_trace(cost_out, run.costs);
    detail::close_output(cost_out, costs);
  }
  const std::string curve = regret_curve_path(prefix);
  auto curve_out = detail::open_output(curve);
  write_regret_curve(curve_out, result);
  detail::close_output(curve_out, curve);

  const std::string agg = aggregate_json_path(prefix);
  auto agg_out = detail::open_output(agg);
  agg_out << aggregate_to_json(result).dump(2) << '\n';
  detail::close_output(agg_out, agg);
}

// -- Benchmark ----------------------------------------------------------------

// Live heap bytes, maintained only when a binary installs the counting
// allocator from olfl/allocation_counter.hpp.
namespace heap {
inline std::atomic<bool> tracking{false};
inline std::atomic<std::size_t> live{0};
inline std::atomic<std::size_t> peak{0};
}  // namespace heap

struct BenchRow {
  std::size_t sites = 0;
  double median_trial_seconds = 0.0;
  double ratio = std::numeric_limits<double>::quiet_NaN();  // vs previous row
  std::size_t peak_bytes = 0;  // 0 when no counting allocator is installed
  double memory_ratio = std::numeric_limits<double>::quiet_NaN();
};

// Median per-trial wall time of the doubling learner on i.i.d. costs for
// each N, measured over `measured` trials of a horizon-T game. The sizes
// take turns in blocks of trials so that slow drift in machine speed hits
// all of them alike. Peak heap growth is sampled separately, one size at a
// time, over a few trials.
inline std::vector<BenchRow> bench_per_trial(std::span<const std::size_t> sizes,
                                             std::size_t horizon,
                                             std::size_t measured = 0,
                                             std::uint64_t seed = 7) {
  if (!std::is_sorted(sizes.begin(), sizes.end()))
    throw ConfigError("bench sizes must be sorted ascending");
  if (sizes.empty()) return {};
  if (measured == 0 || measured > horizon) measured = horizon;

  struct Lane {
    std::size_t sites;
    Rng nature, rng;
    std::vector<double> c, d;
    std::optional<DoublingLearner> learner;
    std::vector<double> seconds;
    std::size_t done = 0;
  };
  const auto trial = [](Lane& lane) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& x : lane.c) x = unit(lane.nature);
    for (double& x : lane.d) x = unit(lane.nature);
    const CostPair costs(lane.c, lane.d, 1.0, 1.0);
    const auto start = std::chrono::steady_clock::now();
    const SiteSet action = lane.learner->play(lane.rng);
    lane.learner->update(costs);
    const auto stop = std::chrono::steady_clock::now();
    (void)action;
    return std::chrono::duration<double>(stop - start).count();
  };
  const auto make_lane = [&](std::size_t n) {
    Lane lane{n, Rng(seed), Rng(seed + 1), std::vector<double>(n),
              std::vector<double>(n), std::nullopt, {}, 0};
    lane.learner.emplace(GameConfig{n, horizon, 1.0, 1.0});
    return lane;
  };

  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    BenchRow row;
    row.sites = n;
    if (heap::tracking.load()) {
      const std::size_t baseline = heap::live.load();
      heap::peak.store(baseline);
      {
        Lane lane = make_lane(n);
        for (std::size_t t = 0; t < std::min<std::size_t>(3, measured); ++t) trial(lane);
      }
      row.peak_bytes = heap::peak.load() - baseline;
    }
    rows.push_back(row);
  }

  std::vector<Lane> lanes;
  for (std::size_t n : sizes) {
    lanes.push_back(make_lane(n));
    lanes.back().seconds.reserve(measured);
  }
  const std::size_t block = std::max<std::size_t>(1, measured / 10);
  while (lanes.front().done < measured) {
    for (Lane& lane : lanes) {
      const std::size_t end = std::min(measured, lane.done + block);
      for (; lane.done < end; ++lane.done) lane.seconds.push_back(trial(lane));
    }
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<double>& seconds = lanes[i].seconds;
    std::nth_element(seconds.begin(), seconds.begin() + seconds.size() / 2,
                     seconds.end());
    rows[i].median_trial_seconds = seconds[seconds.size() / 2];
    if (i > 0) {
      rows[i].ratio = rows[i].median_trial_seconds / rows[i - 1].median_trial_seconds;
      if (rows[i].peak_bytes && rows[i - 1].peak_bytes)
        rows[i].memory_ratio = static_cast<double>(rows[i].peak_bytes) /
                               static_cast<double>(rows[i - 1].peak_bytes);
    }
  }
  return rows;
}

}  // namespace olfl

#endif  // OLFL_EXPERIMENT_HPP_
