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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "olfl/core.hpp"

namespace olfl {
namespace {

TEST(FacilityLoss, OpeningPlusCheapestConnection) {
  const CostPair costs({0.5, 0.2}, {0.3, 0.9}, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(facility_loss(costs, SiteSet({1, 2})), 1.0);
  EXPECT_DOUBLE_EQ(facility_loss(costs, SiteSet({2})), 1.1);
}

TEST(FacilityLoss, ZeroOpeningGivesMinConnection) {
  const CostPair costs({0.0, 0.0, 0.0}, {0.7, 0.2, 0.4}, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(facility_loss(costs, SiteSet({1, 2, 3})), 0.2);
}

TEST(FacilityLoss, RejectsOutOfRangeAction) {
  const CostPair costs({0.5, 0.2}, {0.3, 0.9}, 1.0, 1.0);
  EXPECT_THROW(facility_loss(costs, SiteSet({3})), ValidationError);
}

TEST(FacilityLoss, BoundedAndMonotoneInConnection) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 1 + rng() % 10;
    const double C = 0.1 + (rng() % 100) / 50.0, D = 0.1 + (rng() % 100) / 50.0;
    const CostPair costs = testing::random_costs(n, C, D, rng);
    const std::uint64_t mask = 1 + rng() % ((std::uint64_t{1} << n) - 1);
    const SiteSet x = SiteSet::from_mask(mask);
    const double loss = facility_loss(costs, x);
    EXPECT_LE(loss, static_cast<double>(x.size()) * C + D + 1e-12);
    EXPECT_GE(loss, 0.0);
    // Lower one connection cost; the loss may not rise.
    std::vector<double> d(costs.connection().begin(), costs.connection().end());
    d[rng() % n] *= 0.5;
    const CostPair lower(std::vector<double>(costs.opening().begin(), costs.opening().end()),
                         d, C, D);
    EXPECT_LE(facility_loss(lower, x), loss);
  }
}

TEST(SiteSet, SortsAndDeduplicates) {
  const SiteSet x({3, 1, 3, 2});
  EXPECT_EQ(x.size(), 3u);
  EXPECT_EQ(x.to_string(), "1;2;3");
  EXPECT_TRUE(x.contains(2));
  EXPECT_FALSE(x.contains(4));
}

TEST(SiteSet, RejectsEmptyZeroAndOutOfRange) {
  EXPECT_THROW(SiteSet(std::vector<std::size_t>{}), ValidationError);
  EXPECT_THROW(SiteSet({0, 1}), ValidationError);
  EXPECT_THROW(SiteSet({1, 5}, 4), ValidationError);
  EXPECT_NO_THROW(SiteSet({1, 4}, 4));
}

TEST(SiteSet, FromMaskUsesBitPerSite) {
  EXPECT_EQ(SiteSet::from_mask(0b1011), SiteSet({1, 2, 4}));
  EXPECT_THROW(SiteSet::from_mask(0), ValidationError);
}

TEST(CostPair, RejectsRatherThanClamps) {
  try {
    CostPair({0.5, 1.5}, {0.1, 0.1}, 1.0, 1.0);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("c_2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(CostPair({0.5}, {-0.1}, 1.0, 1.0), ValidationError);
  EXPECT_THROW(CostPair({0.5}, {std::nan("")}, 1.0, 1.0), ValidationError);
  EXPECT_THROW(CostPair({0.5, 0.1}, {0.1}, 1.0, 1.0), ValidationError);
  EXPECT_THROW(CostPair({}, {}, 1.0, 1.0), ValidationError);
}

TEST(GameConfig, Validation) {
  EXPECT_NO_THROW((GameConfig{1, 1, 0.0, 1.0}.validate()));
  EXPECT_THROW((GameConfig{0, 1, 1.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((GameConfig{1, 0, 1.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((GameConfig{1, 1, -1.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((GameConfig{1, 1, 0.0, 0.0}.validate()), ConfigError);
}

TEST(LogHorizonFactor, CeilingOfHalfLogFlooredAtOne) {
  EXPECT_EQ(log_horizon_factor(1), 1u);   // ceil(0) would be 0
  EXPECT_EQ(log_horizon_factor(7), 1u);   // ln 7 / 2 = 0.97
  EXPECT_EQ(log_horizon_factor(8), 2u);   // ln 8 / 2 = 1.04
  EXPECT_EQ(log_horizon_factor(100), 3u); // ln 100 / 2 = 2.30
  EXPECT_EQ(log_horizon_factor(500), 4u); // 3.11
}

TEST(SortByConnection, Examples) {
  using V = std::vector<std::size_t>;
  EXPECT_EQ(sort_by_connection_desc(std::vector<double>{0.3, 0.9}), (V{1, 0}));
  EXPECT_EQ(sort_by_connection_desc(std::vector<double>{0.5, 0.5, 0.5}), (V{0, 1, 2}));
  EXPECT_EQ(sort_by_connection_desc(std::vector<double>{0.1, 0.4, 0.2, 0.9}),
            (V{3, 1, 2, 0}));
}

// Covers both the comparison path and the radix path used for long inputs.
TEST(SortByConnection, MatchesStableSortOracle) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 2u, 17u, 511u, 512u, 513u, 5000u, 40000u}) {
    std::vector<double> d = testing::uniform(n, 1.0, rng);
    // Plenty of ties, exact zeros and a negative zero.
    for (std::size_t i = 0; i < n; i += 3) d[i] = std::round(d[i] * 4.0) / 4.0;
    if (n > 4) d[4] = -0.0;
    std::vector<std::size_t> want(n);
    std::iota(want.begin(), want.end(), std::size_t{0});
    std::stable_sort(want.begin(), want.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
    const std::vector<std::size_t> got = sort_by_connection_desc(d);
    EXPECT_EQ(got, want) << "n = " << n;

    // Nonincreasing and a bijection.
    for (std::size_t i = 1; i < n; ++i) EXPECT_GE(d[got[i - 1]], d[got[i]]);
    std::vector<std::size_t> seen(got);
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(seen[i], i);
  }
}

TEST(SortByConnection, ScratchReuseAcrossLengths) {
  std::mt19937_64 rng(6);
  SortScratch scratch;
  std::vector<std::size_t> order;
  for (std::size_t n : {3000u, 10u, 2000u, 700u}) {
    const std::vector<double> d = testing::uniform(n, 2.0, rng);
    sort_by_connection_desc(d, order, scratch);
    EXPECT_EQ(order, sort_by_connection_desc(d));
  }
}

}  // namespace
}  // namespace olfl
