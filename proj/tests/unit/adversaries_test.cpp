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
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "olfl/adversaries.hpp"

namespace olfl {
namespace {

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

std::vector<CostPair> parse(const std::string& text,
                            std::optional<GameConfig> cfg = std::nullopt) {
  std::istringstream in(text);
  return parse_trace(in, "trace.csv", cfg);
}

std::string parse_error(const std::string& text,
                        std::optional<GameConfig> cfg = std::nullopt) {
  try {
    parse(text, cfg);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

// -- Killer --------------------------------------------------------------------

TEST(KillerCosts, SmallActionsPayConnection) {
  const CostPair costs = killer_costs(4, SiteSet({1}));
  EXPECT_EQ(vec(costs.opening()), std::vector<double>(4, 0.5));
  EXPECT_EQ(vec(costs.connection()), (std::vector<double>{1, 0, 0, 0}));
}

TEST(KillerCosts, LargeActionsPayOpening) {
  const CostPair costs = killer_costs(4, SiteSet({1, 2, 3}));
  EXPECT_EQ(vec(costs.connection()), std::vector<double>(4, 0.0));
  // |X| = sqrt(N) still counts as small.
  EXPECT_EQ(vec(killer_costs(4, SiteSet({2, 4})).connection()),
            (std::vector<double>{0, 1, 0, 1}));
}

TEST(KillerCosts, EveryReactionCostsAtLeastOne) {
  const std::size_t n = 16;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const SiteSet x = SiteSet::from_mask(mask);
    ASSERT_GE(facility_loss(killer_costs(n, x), x), 1.0) << x.to_string();
  }
}

TEST(KillerCosts, RejectsForeignSites) {
  EXPECT_THROW(killer_costs(4, SiteSet({5})), ValidationError);
  EXPECT_THROW(killer_costs(0, SiteSet({1})), ConfigError);
}

TEST(ScenarioSource, KillerReactsToTheAction) {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kKiller;
  const ScenarioSource source(spec, GameConfig{9, 10, 1.0, 1.0});
  EXPECT_TRUE(source.adaptive());
  const SiteSet x({4});
  EXPECT_EQ(source.costs(0, &x), killer_costs(9, x));
  // Nothing to react to yet: no connection cost, opening 1/sqrt(N).
  const CostPair blind = source.costs(0, nullptr);
  EXPECT_EQ(vec(blind.connection()), std::vector<double>(9, 0.0));
  EXPECT_DOUBLE_EQ(blind.opening()[0], 1.0 / 3.0);
}

TEST(ScenarioSource, KillerNeedsUnitBounds) {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kKiller;
  EXPECT_THROW(ScenarioSource(spec, GameConfig{4, 10, 2.0, 1.0}), ConfigError);
}

// -- Generators ----------------------------------------------------------------

std::string dump(const std::vector<CostPair>& costs) {
  std::ostringstream out;
  write_trace(out, costs);
  return out.str();
}

TEST(Generators, DeterministicPerSeed) {
  const GameConfig cfg{5, 40, 1.0, 2.0};
  EXPECT_EQ(dump(generate_iid_uniform(cfg, 3)), dump(generate_iid_uniform(cfg, 3)));
  EXPECT_NE(dump(generate_iid_uniform(cfg, 3)), dump(generate_iid_uniform(cfg, 4)));
  EXPECT_EQ(dump(generate_drifting(cfg, 3, 0.1, 0.5)),
            dump(generate_drifting(cfg, 3, 0.1, 0.5)));
}

TEST(Generators, IidRespectsBounds) {
  const GameConfig cfg{6, 200, 0.0, 2.5};
  for (const CostPair& c : generate_iid_uniform(cfg, 1)) {
    for (double x : c.opening()) EXPECT_EQ(x, 0.0);
    for (double x : c.connection()) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 2.5);
    }
  }
}

TEST(Generators, FrozenDriftKeepsConnectionsConstant) {
  const std::vector<CostPair> costs = generate_drifting(GameConfig{5, 30, 1.0, 1.0}, 9, 0.0, 0.5);
  for (const CostPair& c : costs) EXPECT_EQ(c, costs.front());
}

TEST(Generators, DriftMovesAndStaysInRange) {
  const std::vector<CostPair> costs = generate_drifting(GameConfig{5, 300, 1.0, 2.0}, 9, 0.05, 0.5);
  bool moved = false;
  for (const CostPair& c : costs) {
    moved = moved || vec(c.connection()) != vec(costs.front().connection());
    EXPECT_EQ(vec(c.opening()), vec(costs.front().opening()));
    for (double d : c.connection()) {
      EXPECT_GE(d, 0.0);
      EXPECT_LE(d, 2.0);
    }
  }
  EXPECT_TRUE(moved);
  EXPECT_THROW(generate_drifting(GameConfig{5, 3, 1, 1}, 1, -0.1, 0.5), ConfigError);
  EXPECT_THROW(generate_drifting(GameConfig{5, 3, 1, 1}, 1, 0.1, 0.0), ConfigError);
}

TEST(ScenarioKind, Names) {
  for (ScenarioKind k : {ScenarioKind::kKiller, ScenarioKind::kIidUniform,
                         ScenarioKind::kDrifting, ScenarioKind::kReplay})
    EXPECT_EQ(scenario_kind_from_string(to_string(k)), k);
  EXPECT_EQ(scenario_kind_from_string("iid-uniform"), ScenarioKind::kIidUniform);
  EXPECT_EQ(scenario_kind_from_string("drifting"), ScenarioKind::kDrifting);
  EXPECT_THROW(scenario_kind_from_string("chaos"), ConfigError);
}

// -- Trace files ---------------------------------------------------------------

TEST(Trace, SingleRow) {
  const std::vector<CostPair> costs = parse("1,0.5,0.2,0.3,0.9\n");
  ASSERT_EQ(costs.size(), 1u);
  EXPECT_EQ(vec(costs[0].opening()), (std::vector<double>{0.5, 0.2}));
  EXPECT_EQ(vec(costs[0].connection()), (std::vector<double>{0.3, 0.9}));
}

TEST(Trace, HeaderAndBlankLines) {
  const std::vector<CostPair> costs =
      parse("t,c_1,c_2,d_1,d_2\n1,0.5,0.2,0.3,0.9\n\n2, 0, 0 ,1,1\r\n");
  ASSERT_EQ(costs.size(), 2u);
  EXPECT_EQ(costs[1].connection()[0], 1.0);
}

TEST(Trace, BoundViolationNamesField) {
  const std::string err = parse_error("1,0.5,0.2\n2,1.5,0.2\n", GameConfig{1, 2, 1.0, 1.0});
  EXPECT_NE(err.find("c_1"), std::string::npos) << err;
  EXPECT_NE(err.find(":2:"), std::string::npos) << err;
}

TEST(Trace, EmptyInput) {
  EXPECT_NE(parse_error("").find("no trials"), std::string::npos);
  EXPECT_NE(parse_error("t,c_1,d_1\n").find("no trials"), std::string::npos);
}

TEST(Trace, MalformedRows) {
  EXPECT_NE(parse_error("1,0.5,0.2,0.3\n").find(":1:"), std::string::npos);
  EXPECT_NE(parse_error("1,0.5,0.2\n3,0.5,0.2\n").find("out of sequence"), std::string::npos);
  EXPECT_NE(parse_error("1,0.5,abc\n").find("d_1"), std::string::npos);
  EXPECT_NE(parse_error("1,0.5,0.2\n2,0.1,0.1,0.1,0.1\n").find("sites"), std::string::npos);
  EXPECT_NE(parse_error("x,0.5,0.2\n").find("trial index"), std::string::npos);
  EXPECT_NE(parse_error("1,-0.5,0.2\n").find("c_1"), std::string::npos);
}

TEST(Trace, DimensionsCheckedAgainstConfig) {
  EXPECT_NE(parse_error("1,0.5,0.2\n", GameConfig{2, 1, 1, 1}).find("sites"),
            std::string::npos);
  EXPECT_NE(parse_error("1,0.5,0.2\n", GameConfig{1, 2, 1, 1}).find("trials"),
            std::string::npos);
}

TEST(Trace, WriteThenParseIsExact) {
  const GameConfig cfg{7, 50, 1.0, 3.0};
  const std::vector<CostPair> costs = generate_iid_uniform(cfg, 17);
  EXPECT_EQ(parse(dump(costs), cfg), costs);
}

TEST(Trace, MissingFile) {
  EXPECT_THROW(load_trace("/nonexistent/olfl/trace.csv"), ParseError);
}

TEST(ScenarioSource, ReplayFromFile) {
  const GameConfig cfg{3, 12, 1.0, 1.0};
  const std::vector<CostPair> costs = generate_iid_uniform(cfg, 2);
  const std::string path = ::testing::TempDir() + "olfl_replay_trace.csv";
  {
    std::ofstream out(path);
    write_trace(out, costs);
  }
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kReplay;
  spec.trace_path = path;
  const ScenarioSource source(spec, cfg);
  EXPECT_FALSE(source.adaptive());
  for (std::size_t t = 0; t < 12; ++t) EXPECT_EQ(source.costs(t, nullptr), costs[t]);
  EXPECT_THROW(ScenarioSource(spec, GameConfig{3, 13, 1.0, 1.0}), ParseError);
}

TEST(ScenarioSource, InMemoryLengthChecked) {
  const GameConfig cfg{3, 12, 1.0, 1.0};
  EXPECT_THROW(ScenarioSource(generate_iid_uniform(GameConfig{3, 11, 1, 1}, 1), cfg),
               ConfigError);
  EXPECT_THROW(ScenarioSource(generate_iid_uniform(GameConfig{2, 12, 1, 1}, 1), cfg),
               ConfigError);
}

}  // namespace
}  // namespace olfl
