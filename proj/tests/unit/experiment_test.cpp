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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "olfl/experiment.hpp"

namespace olfl {
namespace {

ExperimentConfig make_config(Algorithm algo, GameConfig game,
                             std::optional<std::size_t> k = std::nullopt) {
  ExperimentConfig cfg;
  cfg.game = game;
  cfg.algo = algo;
  cfg.k = k;
  cfg.threads = 1;
  return cfg;
}

std::vector<CostPair> zero_costs(const GameConfig& g) {
  return std::vector<CostPair>(
      g.trials, CostPair(std::vector<double>(g.sites, 0.0),
                         std::vector<double>(g.sites, 0.0), g.opening_max,
                         g.connection_max));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

TEST(Experiment, ZeroCostsNeverDouble) {
  const GameConfig g{5, 300, 1.0, 1.0};
  const ExperimentConfig cfg = make_config(Algorithm::kDoubling, g);
  const ExperimentResult r = run_experiment(cfg, ScenarioSource(zero_costs(g), g));
  ASSERT_EQ(r.runs.size(), 1u);
  EXPECT_EQ(r.runs[0].cumulative_loss, 0.0);
  for (const TrialRecord& rec : r.runs[0].records) {
    EXPECT_EQ(rec.scale, 1.0);
    EXPECT_EQ(rec.segment, 0u);
  }
}

TEST(Experiment, RecordsAddUp) {
  const GameConfig g{6, 200, 1.0, 2.0};
  ExperimentConfig cfg = make_config(Algorithm::kBoundedCardinality, g, 2);
  cfg.scenario.seed = 4;
  cfg.seeds = {1, 2, 3};
  const ExperimentResult r = run_experiment(cfg);
  const double u = static_cast<double>(log_horizon_factor(g.trials));
  for (const RunResult& run : r.runs) {
    double sum = 0.0;
    for (std::size_t t = 0; t < g.trials; ++t) {
      const TrialRecord& rec = run.records[t];
      EXPECT_EQ(rec.trial, t + 1);
      EXPECT_DOUBLE_EQ(rec.loss, facility_loss(run.costs[t], rec.action));
      EXPECT_LE(rec.action.size(), 2 * log_horizon_factor(g.trials));
      sum += rec.loss;
    }
    EXPECT_NEAR(run.cumulative_loss, sum, 1e-9);
    EXPECT_DOUBLE_EQ(run.regret, run.cumulative_loss - u * run.comparator.loss);
    EXPECT_DOUBLE_EQ(run.regret_raw, run.cumulative_loss - run.comparator.loss);
    EXPECT_FALSE(run.comparator.approximate);
    EXPECT_LE(run.comparator.set.size(), 2u);
  }
}

TEST(Experiment, HedgeIsReproducible) {
  const GameConfig g{2, 50, 1.0, 1.0};
  ExperimentConfig cfg = make_config(Algorithm::kExactHedge, g);
  cfg.seeds = {7};
  const ExperimentResult a = run_experiment(cfg);
  const ExperimentResult b = run_experiment(cfg);
  ASSERT_EQ(a.runs[0].records.size(), 50u);
  for (std::size_t t = 0; t < 50; ++t)
    EXPECT_EQ(a.runs[0].records[t].action, b.runs[0].records[t].action);
  EXPECT_EQ(a.runs[0].cumulative_loss, b.runs[0].cumulative_loss);
}

TEST(Experiment, FixedCardinalityWithinBound) {
  const GameConfig g{4, 500, 1.0, 1.0};
  ExperimentConfig cfg = make_config(Algorithm::kFixedCardinality, g, 1);
  cfg.scenario.seed = 11;
  cfg.seeds.clear();
  for (std::uint64_t s = 1; s <= 200; ++s) cfg.seeds.push_back(s);
  const ExperimentResult r = run_experiment(cfg);

  // Recompute the cardinality-1 comparator and the right-hand side directly.
  const std::span<const CostPair> costs = r.runs[0].costs;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= g.sites; ++i) {
    double l = 0.0;
    for (const CostPair& c : costs) l += c.opening()[i - 1] + c.connection()[i - 1];
    best = std::min(best, l);
  }
  const double u = std::max(1.0, std::ceil(std::log(500.0) / 2.0));
  const double rhs = u * best + (2.0 * 1 * 2.0 * u + 1.0) * std::sqrt(std::log(4.0) * 500.0);
  EXPECT_NEAR(r.runs[0].comparator.loss, best, 1e-9);
  EXPECT_NEAR(r.aggregate.mean_bound, rhs, 1e-6);
  EXPECT_LE(r.aggregate.ci95_high, rhs);
  EXPECT_LE(r.aggregate.ci95_low, r.aggregate.mean_cumulative_loss);
}

TEST(Experiment, ThreadCountDoesNotChangeResults) {
  const GameConfig g{5, 120, 1.0, 1.0};
  ExperimentConfig cfg = make_config(Algorithm::kDoubling, g);
  cfg.scenario.kind = ScenarioKind::kDrifting;
  cfg.seeds = {1, 2, 3, 4, 5};
  const ExperimentResult one = run_experiment(cfg);
  cfg.threads = 0;
  const ExperimentResult many = run_experiment(cfg);
  cfg.threads = 3;
  const ExperimentResult three = run_experiment(cfg);
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    EXPECT_EQ(one.runs[i].cumulative_loss, many.runs[i].cumulative_loss);
    EXPECT_EQ(one.runs[i].cumulative_loss, three.runs[i].cumulative_loss);
  }
  EXPECT_EQ(one.aggregate.mean_cumulative_loss, three.aggregate.mean_cumulative_loss);
}

TEST(Experiment, FollowTheLeaderLosesToKiller) {
  const GameConfig g{16, 100, 1.0, 1.0};
  ExperimentConfig cfg = make_config(Algorithm::kFtlGreedy, g);
  cfg.scenario.kind = ScenarioKind::kKiller;
  const ExperimentResult r = run_experiment(cfg);
  for (const TrialRecord& rec : r.runs[0].records) EXPECT_GE(rec.loss, 1.0);
}

TEST(Experiment, ApproximateComparatorAboveSixteenSites) {
  const GameConfig g{20, 30, 1.0, 1.0};
  ExperimentConfig cfg = make_config(Algorithm::kDoubling, g);
  const ExperimentResult r = run_experiment(cfg);
  EXPECT_TRUE(r.runs[0].comparator.approximate);
  double l = 0.0;
  for (const CostPair& c : r.runs[0].costs) l += facility_loss(c, r.runs[0].comparator.set);
  EXPECT_NEAR(l, r.runs[0].comparator.loss, 1e-9);
}

TEST(Experiment, ValidationErrors) {
  const GameConfig g{4, 10, 1.0, 1.0};
  EXPECT_THROW(make_config(Algorithm::kFixedCardinality, g).validate(), ConfigError);
  EXPECT_THROW(make_config(Algorithm::kBoundedCardinality, g, 5).validate(), ConfigError);
  EXPECT_THROW(make_config(Algorithm::kBoundedCardinality, g, 0).validate(), ConfigError);
  ExperimentConfig none = make_config(Algorithm::kDoubling, g);
  none.seeds.clear();
  EXPECT_THROW(none.validate(), ConfigError);
  EXPECT_THROW(make_config(Algorithm::kExactHedge, GameConfig{17, 10, 1, 1}).validate(),
               ConfigError);
  EXPECT_NO_THROW(make_config(Algorithm::kExactHedge, GameConfig{16, 10, 1, 1}).validate());
  EXPECT_THROW(algorithm_from_string("greedy"), ConfigError);
}

TEST(Experiment, ErrorsCarrySeedAndTrial) {
  const GameConfig g{3, 6, 1.0, 1.0};
  std::vector<CostPair> costs = zero_costs(g);
  costs[2] = CostPair({3.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, 5.0, 5.0);
  ExperimentConfig cfg = make_config(Algorithm::kFixedCardinality, g, 1);
  cfg.seeds = {42};
  try {
    run_experiment(cfg, ScenarioSource(costs, g));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("seed 42, trial 3"), std::string::npos) << e.what();
  }
}

TEST(MeanCi95, KnownValues) {
  const std::vector<double> xs{1, 2, 3, 4};
  const MeanInterval ci = mean_ci95(xs);
  EXPECT_DOUBLE_EQ(ci.mean, 2.5);
  EXPECT_NEAR(ci.stddev, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_NEAR(ci.high - ci.mean, 1.959963984540054 * std::sqrt(5.0 / 3.0) / 2.0, 1e-12);
  const std::vector<double> one{3.5};
  EXPECT_EQ(mean_ci95(one).low, 3.5);
  EXPECT_EQ(mean_ci95(one).high, 3.5);
}

// -- Output files ---------------------------------------------------------------

class Outputs : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::path(::testing::TempDir()) / "olfl_outputs";
    std::filesystem::remove_all(dir_);
    prefix_ = (dir_ / "run").string();
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path dir_;
  std::string prefix_;
};

TEST_F(Outputs, JsonConfigRoundTrips) {
  ExperimentConfig cfg = make_config(Algorithm::kBoundedCardinality, GameConfig{4, 20, 0.5, 2.0}, 2);
  cfg.scenario.kind = ScenarioKind::kDrifting;
  cfg.scenario.seed = 99;
  cfg.scenario.drift_step = 0.125;
  cfg.seeds = {3, 1};
  cfg.output = prefix_;
  const ExperimentResult r = run_experiment(cfg);
  emit_results(r, prefix_);
  std::ifstream in(aggregate_json_path(prefix_));
  const nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_EQ(config_from_json(j.at("config")), cfg);
  EXPECT_EQ(j.at("runs").size(), 2u);
  EXPECT_DOUBLE_EQ(j.at("aggregate").at("mean_cumulative_loss").get<double>(),
                   r.aggregate.mean_cumulative_loss);
  EXPECT_THROW(config_from_json(nlohmann::json::object()), ConfigError);
}

TEST_F(Outputs, RegretCurveEndsAtTheBound) {
  const GameConfig g{5, 80, 1.0, 1.0};
  ExperimentConfig cfg = make_config(Algorithm::kBoundedCardinality, g, 2);
  cfg.seeds = {5};
  const ExperimentResult r = run_experiment(cfg);
  emit_results(r, prefix_);

  std::ifstream in(regret_curve_path(prefix_));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial,cumulative_loss,comparator_loss,regret,bound");
  std::vector<std::string> last;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    last = split(line, ',');
    ++rows;
  }
  EXPECT_EQ(rows, g.trials);
  const double L = r.runs[0].comparator.loss;
  const double u = 3.0;  // ceil(ln 80 / 2)
  const double rhs = u * L + (2.0 * 2 * u * 3.0 + 2.0) * std::sqrt(std::log(10.0) * 80.0);
  EXPECT_NEAR(std::stod(last.at(4)), rhs, 1e-9 * rhs);
  EXPECT_NEAR(std::stod(last.at(2)), L, 1e-9);
  EXPECT_NEAR(std::stod(last.at(1)), r.runs[0].cumulative_loss, 1e-9);
}

TEST_F(Outputs, TrialsReplayFromCostsFile) {
  const GameConfig g{4, 60, 1.0, 1.5};
  ExperimentConfig cfg = make_config(Algorithm::kDoubling, g);
  cfg.seeds = {8, 9};
  const ExperimentResult r = run_experiment(cfg);
  emit_results(r, prefix_);

  for (std::uint64_t seed : cfg.seeds) {
    const std::vector<CostPair> costs = load_trace(costs_csv_path(prefix_, seed), g);
    std::ifstream in(trials_csv_path(prefix_, seed));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "seed,trial,action,loss,lambda,theta,k,segment");
    std::size_t t = 0;
    while (std::getline(in, line)) {
      const std::vector<std::string> f = split(line, ',');
      ASSERT_EQ(f.size(), 8u);
      EXPECT_EQ(std::stoull(f[0]), seed);
      EXPECT_EQ(std::stoull(f[1]), t + 1);
      std::vector<std::size_t> members;
      for (const std::string& s : split(f[2], ';')) members.push_back(std::stoull(s));
      EXPECT_EQ(facility_loss(costs.at(t), SiteSet(members, g.sites)), std::stod(f[3]));
      ++t;
    }
    EXPECT_EQ(t, g.trials);
  }
}

TEST_F(Outputs, UnwritablePrefix) {
  std::ofstream(dir_.string() + "_file") << "x";
  const ExperimentResult r = run_experiment(make_config(Algorithm::kDoubling, GameConfig{2, 3, 1, 1}));
  EXPECT_THROW(emit_results(r, dir_.string() + "_file/run"), Error);
  std::filesystem::remove(dir_.string() + "_file");
}

}  // namespace
}  // namespace olfl
