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

#ifndef OLFL_TESTS_UNIT_HELPERS_HPP_
#define OLFL_TESTS_UNIT_HELPERS_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "olfl/core.hpp"

namespace olfl::testing {

inline std::vector<double> uniform(std::size_t n, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = hi * unit(rng);
  return v;
}

inline std::vector<double> simplex(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) total += (x = e(rng));
  for (double& x : w) x /= total;
  return w;
}

inline CostPair random_costs(std::size_t n, double C, double D, std::mt19937_64& rng) {
  return CostPair(uniform(n, C, rng), uniform(n, D, rng), C, D);
}

// Brute-force cumulative loss of a fixed set.
inline double cumulative_loss(const std::vector<CostPair>& history, const SiteSet& x) {
  double total = 0.0;
  for (const CostPair& c : history) total += facility_loss(c, x);
  return total;
}

}  // namespace olfl::testing

#endif  // OLFL_TESTS_UNIT_HELPERS_HPP_
