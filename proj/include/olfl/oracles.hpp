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

#ifndef OLFL_ORACLES_HPP_
#define OLFL_ORACLES_HPP_

// Reference opponents and brute-force comparators: exponential-time Hedge
// over all nonempty subsets, follow-the-leader with a greedy leader, a
// cheapest-singleton baseline, the exact best fixed subset in hindsight and
// exact enumeration of the sampling scheme's expected loss.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "olfl/core.hpp"

namespace olfl {

inline constexpr std::size_t kSubsetEnumerationCap = 16;

// Loss of every nonempty subset, indexed by bitmask (bit i-1 <-> site i).
// Entry 0 is unused.
inline std::vector<double> subset_losses(const CostPair& costs) {
  const std::size_t n = costs.size();
  if (n > kSubsetEnumerationCap) {
    throw CapacityError("subset enumeration refused: " + std::to_string(n) +
                        " sites exceeds cap " +
                        std::to_string(kSubsetEnumerationCap));
  }
  const auto c = costs.opening();
  const auto d = costs.connection();
  const std::uint32_t count = std::uint32_t{1} << n;
  std::vector<double> opening(count, 0.0);
  std::vector<double> nearest(count, std::numeric_limits<double>::infinity());
  std::vector<double> loss(count, 0.0);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const int low = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    opening[mask] = opening[rest] + c[low];
    nearest[mask] = std::min(nearest[rest], d[low]);
    loss[mask] = opening[mask] + nearest[mask];
  }
  return loss;
}

// -- Exact Hedge --------------------------------------------------------------

class ExactHedge {
 public:
  // Default rate sqrt(8 ln(2^N - 1) / T) on losses scaled by N C + D.
  explicit ExactHedge(const GameConfig& cfg,
                      std::optional<double> eta = std::nullopt)
      : cfg_((cfg.validate(), cfg)) {
    if (cfg.sites > kSubsetEnumerationCap) {
      throw CapacityError("exact Hedge refused: " + std::to_string(cfg.sites) +
                          " sites exceeds cap " +
                          std::to_string(kSubsetEnumerationCap));
    }
    const std::size_t actions = (std::size_t{1} << cfg.sites) - 1;
    weights_.assign(actions + 1, 1.0 / static_cast<double>(actions));
    weights_[0] = 0.0;
    eta_ = eta.value_or(std::sqrt(8.0 * std::log(static_cast<double>(actions)) /
                                  static_cast<double>(cfg.trials)));
    scale_ = static_cast<double>(cfg.sites) * cfg.opening_max +
             cfg.connection_max;
  }

  double eta() const { return eta_; }
  double loss_scale() const { return scale_; }
  // Indexed by subset bitmask; entry 0 is always zero.
  std::span<const double> weights() const { return weights_; }
  double weight(const SiteSet& set) const {
    std::uint32_t mask = 0;
    for (std::size_t s : set) mask |= std::uint32_t{1} << (s - 1);
    return weights_.at(mask);
  }

  template <typename Rng>
  SiteSet play(Rng& rng) const {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double r = uniform(rng);
    std::uint32_t last = 0;
    for (std::uint32_t mask = 1; mask < weights_.size(); ++mask) {
      if (weights_[mask] <= 0.0) continue;
      last = mask;
      r -= weights_[mask];
      if (r < 0.0) return SiteSet::from_mask(mask);
    }
    return SiteSet::from_mask(last);
  }

  // Expected loss of the current weights on `costs`, then the
  // multiplicative step on every subset.
  double update(const CostPair& costs) {
    if (costs.size() != cfg_.sites)
      throw ValidationError("exact Hedge: cost vectors have the wrong length");
    const std::vector<double> loss = subset_losses(costs);
    double expected = 0.0;
    double total = 0.0;
    for (std::size_t mask = 1; mask < weights_.size(); ++mask) {
      expected += weights_[mask] * loss[mask];
      weights_[mask] *= std::exp(-eta_ * loss[mask] / scale_);
      total += weights_[mask];
    }
    if (!(total > 0.0) || !std::isfinite(total))
      throw NumericError("exact Hedge weights collapsed");
    for (double& w : weights_) w /= total;
    return expected;
  }

 private:
  GameConfig cfg_;
  std::vector<double> weights_;
  double eta_ = 0.0;
  double scale_ = 1.0;
};

// -- Follow the greedy leader -------------------------------------------------

namespace detail {

// Greedy approximate minimiser of the cumulative objective: the best
// singleton, then repeatedly the site whose addition lowers the objective
// most, until no addition helps. `opening_totals` are the per-site sums of
// opening costs over `history`.
inline SiteSet greedy_leader(std::span<const CostPair> history,
                             std::span<const double> opening_totals) {
  if (history.empty()) return SiteSet::singleton(1);
  const std::size_t n = history.front().size();
  const std::size_t t_count = history.size();

  std::size_t first = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double total = opening_totals[j];
    for (const CostPair& costs : history) total += costs.connection()[j];
    if (total < best) {
      best = total;
      first = j;
    }
  }

  std::vector<bool> chosen(n, false);
  chosen[first] = true;
  std::vector<double> nearest(t_count);
  for (std::size_t t = 0; t < t_count; ++t)
    nearest[t] = history[t].connection()[first];

  for (;;) {
    std::optional<std::size_t> pick;
    double best_change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (chosen[j]) continue;
      double change = opening_totals[j];
      for (std::size_t t = 0; t < t_count; ++t) {
        const double dj = history[t].connection()[j];
        if (dj < nearest[t]) change -= nearest[t] - dj;
      }
      if (change < best_change) {
        best_change = change;
        pick = j;
      }
    }
    if (!pick) break;
    chosen[*pick] = true;
    for (std::size_t t = 0; t < t_count; ++t)
      nearest[t] = std::min(nearest[t], history[t].connection()[*pick]);
  }

  std::vector<std::size_t> members;
  for (std::size_t j = 0; j < n; ++j)
    if (chosen[j]) members.push_back(j + 1);
  return SiteSet(std::move(members), n);
}

}  // namespace detail

inline SiteSet ftl_greedy_play(std::span<const CostPair> history) {
  if (history.empty()) return SiteSet::singleton(1);
  std::vector<double> totals(history.front().size(), 0.0);
  for (const CostPair& costs : history)
    for (std::size_t j = 0; j < totals.size(); ++j)
      totals[j] += costs.opening()[j];
  return detail::greedy_leader(history, totals);
}

// Stateful follow-the-greedy-leader; deterministic.
class FtlGreedy {
 public:
  explicit FtlGreedy(const GameConfig& cfg)
      : cfg_((cfg.validate(), cfg)), opening_totals_(cfg.sites, 0.0) {}

  SiteSet play() const {
    return detail::greedy_leader(history_, opening_totals_);
  }

  void update(const CostPair& costs) {
    if (costs.size() != cfg_.sites)
      throw ValidationError("FTL: cost vectors have the wrong length");
    for (std::size_t j = 0; j < cfg_.sites; ++j)
      opening_totals_[j] += costs.opening()[j];
    history_.push_back(costs);
  }

  std::span<const CostPair> history() const { return history_; }

 private:
  GameConfig cfg_;
  std::vector<double> opening_totals_;
  std::vector<CostPair> history_;
};

// Plays the singleton with the smallest cumulative c_i + d_i so far
// (site 1 on an empty history); deterministic.
class CheapestSingleton {
 public:
  explicit CheapestSingleton(const GameConfig& cfg)
      : cfg_((cfg.validate(), cfg)), totals_(cfg.sites, 0.0) {}

  SiteSet play() const {
    const auto best = std::min_element(totals_.begin(), totals_.end());
    return SiteSet::singleton(
        static_cast<std::size_t>(best - totals_.begin()) + 1);
  }

  void update(const CostPair& costs) {
    if (costs.size() != cfg_.sites)
      throw ValidationError("cheapest singleton: cost vectors have the wrong length");
    for (std::size_t j = 0; j < cfg_.sites; ++j)
      totals_[j] += costs.opening()[j] + costs.connection()[j];
  }

 private:
  GameConfig cfg_;
  std::vector<double> totals_;
};

// -- Best fixed subset in hindsight ------------------------------------------

struct FixedSubsetResult {
  SiteSet set;
  double loss = 0.0;
};

namespace detail {

// Smaller cardinality first, then lexicographic member order.
inline bool precedes(const SiteSet& a, const SiteSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

// Cumulative loss of every subset over `history`, indexed by bitmask.
// Per trial, with v sorting d nonincreasingly and S_k = {v(1), ..., v(k)},
//   min_{i in X} d_i = d_{v(N)} + sum_{k<N} (d_{v(k)} - d_{v(k+1)}) [X subset of S_k],
// so the connection part is a superset sum over a histogram on the S_k.
inline std::vector<double> cumulative_subset_losses(
    std::span<const CostPair> history) {
  if (history.empty()) throw ValidationError("subset losses need a history");
  const std::size_t n = history.front().size();
  if (n > kSubsetEnumerationCap) {
    throw CapacityError("subset enumeration refused: " + std::to_string(n) +
                        " sites exceeds cap " +
                        std::to_string(kSubsetEnumerationCap));
  }
  const std::uint32_t count = std::uint32_t{1} << n;
  std::vector<double> opening(n, 0.0);
  std::vector<double> levels(count, 0.0);
  double floor_total = 0.0;
  std::vector<std::size_t> order;
  SortScratch scratch;
  for (const CostPair& costs : history) {
    if (costs.size() != n)
      throw ValidationError("history mixes cost vectors of different lengths");
    const auto c = costs.opening();
    const auto d = costs.connection();
    for (std::size_t j = 0; j < n; ++j) opening[j] += c[j];
    sort_by_connection_desc(d, order, scratch);
    floor_total += d[order[n - 1]];
    std::uint32_t prefix = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      prefix |= std::uint32_t{1} << order[k];
      const double gap = d[order[k]] - d[order[k + 1]];
      if (gap > 0.0) levels[prefix] += gap;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    const std::uint32_t bit = std::uint32_t{1} << b;
    for (std::uint32_t mask = 0; mask < count; ++mask)
      if (!(mask & bit)) levels[mask] += levels[mask | bit];
  }
  std::vector<double> totals(count, 0.0);
  std::vector<double> open_sum(count, 0.0);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    open_sum[mask] = open_sum[mask & (mask - 1)] + opening[low];
    totals[mask] = open_sum[mask] + floor_total + levels[mask];
  }
  return totals;
}

// Exact argmin of the cumulative loss over nonempty subsets with
// min_card <= |X| <= max_card. Enumerates all subsets for N <= 16; larger N
// is accepted only for singletons.
inline FixedSubsetResult best_fixed_subset(
    std::span<const CostPair> history,
    std::optional<std::size_t> max_card = std::nullopt,
    std::size_t min_card = 1) {
  if (history.empty()) throw ValidationError("best fixed subset needs a history");
  const std::size_t n = history.front().size();
  const std::size_t upper = std::min(max_card.value_or(n), n);
  if (min_card < 1 || min_card > upper)
    throw ConfigError("empty cardinality window for best fixed subset");

  if (n > kSubsetEnumerationCap) {
    if (upper != 1) {
      throw CapacityError("best fixed subset refused: " + std::to_string(n) +
                          " sites exceeds cap " +
                          std::to_string(kSubsetEnumerationCap) +
                          " for non-singleton comparators");
    }
    FixedSubsetResult best{SiteSet::singleton(1),
                           std::numeric_limits<double>::infinity()};
    for (std::size_t j = 0; j < n; ++j) {
      double total = 0.0;
      for (const CostPair& costs : history)
        total += costs.opening()[j] + costs.connection()[j];
      if (total < best.loss) best = {SiteSet::singleton(j + 1), total};
    }
    return best;
  }

  const std::vector<double> totals = cumulative_subset_losses(history);
  const std::uint32_t count = std::uint32_t{1} << n;

  std::optional<FixedSubsetResult> best;
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size < min_card || size > upper) continue;
    if (best && totals[mask] > best->loss) continue;
    SiteSet candidate = SiteSet::from_mask(mask);
    if (!best || totals[mask] < best->loss ||
        detail::precedes(candidate, best->set)) {
      best = FixedSubsetResult{std::move(candidate), totals[mask]};
    }
  }
  return *best;
}

// -- Exact expectation of the sampling scheme ---------------------------------

inline constexpr std::size_t kDrawEnumerationCap = 1'000'000;

// Sum over every ordered draw sequence s in [N]^upsilon of
// prod p_{s_i} * loss(distinct sites of s).
inline double exact_expected_loss(std::span<const double> p,
                                  std::size_t upsilon, const CostPair& costs) {
  const std::size_t n = p.size();
  if (n != costs.size())
    throw ValidationError("distribution and costs differ in length");
  if (upsilon < 1) throw ConfigError("upsilon must be at least 1");
  double sequences = 1.0;
  for (std::size_t i = 0; i < upsilon; ++i) sequences *= static_cast<double>(n);
  if (sequences > static_cast<double>(kDrawEnumerationCap) || n > 64) {
    throw CapacityError("draw enumeration refused: N^upsilon = " +
                        std::to_string(sequences) + " exceeds " +
                        std::to_string(kDrawEnumerationCap));
  }
  const auto c = costs.opening();
  const auto d = costs.connection();

  std::vector<std::size_t> draw(upsilon, 0);
  double expected = 0.0;
  for (;;) {
    double prob = 1.0;
    std::uint64_t mask = 0;
    for (std::size_t k : draw) {
      prob *= p[k];
      mask |= std::uint64_t{1} << k;
    }
    if (prob > 0.0) {
      double loss = 0.0;
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (mask & (std::uint64_t{1} << j)) {
          loss += c[j];
          nearest = std::min(nearest, d[j]);
        }
      }
      expected += prob * (loss + nearest);
    }
    std::size_t pos = 0;
    while (pos < upsilon && ++draw[pos] == n) draw[pos++] = 0;
    if (pos == upsilon) break;
  }
  return expected;
}

}  // namespace olfl

#endif  // OLFL_ORACLES_HPP_
