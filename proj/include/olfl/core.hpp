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

#ifndef OLFL_CORE_HPP_
#define OLFL_CORE_HPP_

// Domain types of the online facility location game: the game dimensions,
// one trial's cost vectors, the learner's site selection and its loss.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace olfl {

// -- Errors -------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid dimensions, learning parameters or selectors.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Out-of-range costs or malformed actions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition (gradient bound, simplex input).
class ContractError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// play/update called out of order.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed a hard size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// -- Game configuration -------------------------------------------------------

struct GameConfig {
  std::size_t sites = 1;   // N
  std::size_t trials = 1;  // T
  double opening_max = 1.0;     // C
  double connection_max = 1.0;  // D

  void validate() const {
    if (sites < 1) throw ConfigError("site count must be at least 1");
    if (trials < 1) throw ConfigError("trial horizon must be at least 1");
    if (!(opening_max >= 0.0) || !std::isfinite(opening_max))
      throw ConfigError("opening-cost bound must be a finite nonnegative real");
    if (!(connection_max >= 0.0) || !std::isfinite(connection_max))
      throw ConfigError(
          "connection-cost bound must be a finite nonnegative real");
    if (!(opening_max + connection_max > 0.0))
      throw ConfigError("opening and connection bounds must not both be zero");
  }

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

// ceil(ln(T)/2), floored at 1 so that degenerate horizons still sample.
inline std::size_t log_horizon_factor(std::size_t trials) {
  const double raw = std::ceil(std::log(static_cast<double>(trials)) / 2.0);
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

// -- Costs --------------------------------------------------------------------

// Opening vector in [0, C]^N and connection vector in [0, D]^N. Values
// outside the bounds are rejected, never clamped.
class CostPair {
 public:
  CostPair() = default;

  CostPair(std::vector<double> opening, std::vector<double> connection,
           double opening_max, double connection_max)
      : opening_(std::move(opening)), connection_(std::move(connection)) {
    if (opening_.empty())
      throw ValidationError("cost vectors must not be empty");
    if (opening_.size() != connection_.size()) {
      throw ValidationError("opening and connection vectors differ in length (" +
                            std::to_string(opening_.size()) + " vs " +
                            std::to_string(connection_.size()) + ")");
    }
    check_range(opening_, opening_max, "c");
    check_range(connection_, connection_max, "d");
  }

  std::size_t size() const { return opening_.size(); }
  std::span<const double> opening() const { return opening_; }
  std::span<const double> connection() const { return connection_; }

  friend bool operator==(const CostPair&, const CostPair&) = default;

 private:
  static void check_range(const std::vector<double>& values, double bound,
                          const char* name) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double x = values[i];
      if (!(x >= 0.0 && x <= bound)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << name << "_" << (i + 1) << " = " << x << " outside [0, " << bound
            << "]";
        throw ValidationError(msg.str());
      }
    }
  }

  std::vector<double> opening_;
  std::vector<double> connection_;
};

// -- Actions ------------------------------------------------------------------

// Nonempty set of 1-based site indices, kept sorted and duplicate free.
class SiteSet {
 public:
  SiteSet() = default;

  // Accepts indices in any order with repeats; throws on empty or out of
  // range (site_count == 0 skips the upper check).
  explicit SiteSet(std::vector<std::size_t> members, std::size_t site_count = 0)
      : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()),
                   members_.end());
    if (members_.empty()) throw ValidationError("site set must be nonempty");
    if (members_.front() < 1)
      throw ValidationError("site indices are 1-based; got 0");
    if (site_count != 0 && members_.back() > site_count) {
      throw ValidationError("site index " + std::to_string(members_.back()) +
                            " exceeds site count " +
                            std::to_string(site_count));
    }
  }

  static SiteSet singleton(std::size_t site) { return SiteSet({site}); }

  // Sites whose bit (i-1) is set.
  static SiteSet from_mask(std::uint64_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1)
      if (mask & 1u) out.push_back(i + 1);
    return SiteSet(std::move(out));
  }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(std::size_t site) const {
    return std::binary_search(members_.begin(), members_.end(), site);
  }
  std::span<const std::size_t> members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  // "1;3;4"
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (i) out += ';';
      out += std::to_string(members_[i]);
    }
    return out;
  }

  friend bool operator==(const SiteSet&, const SiteSet&) = default;

 private:
  std::vector<std::size_t> members_;
};

// -- Loss ---------------------------------------------------------------------

// Sum of opening costs over `action` plus its cheapest connection cost.
inline double facility_loss(const CostPair& costs, const SiteSet& action) {
  if (action.empty()) throw ValidationError("action must be nonempty");
  const auto c = costs.opening();
  const auto d = costs.connection();
  double opening = 0.0;
  double connection = std::numeric_limits<double>::infinity();
  for (std::size_t site : action) {
    if (site < 1 || site > costs.size()) {
      throw ValidationError("site index " + std::to_string(site) +
                            " outside 1.." + std::to_string(costs.size()));
    }
    opening += c[site - 1];
    connection = std::min(connection, d[site - 1]);
  }
  return opening + connection;
}

// Buffers reused by repeated sorts of equal length.
struct SortScratch {
  std::vector<std::pair<double, std::size_t>> keyed;
  std::vector<std::uint64_t> keys, keys_next;
  std::vector<std::uint32_t> index, index_next;
  std::vector<std::size_t> histogram;
};

// Writes into `order` the 0-based permutation sorting d nonincreasingly, ties
// by index. Entries must be nonnegative: their bit patterns then order like
// the values, which lets large inputs go through a stable radix sort.
inline void sort_by_connection_desc(std::span<const double> d,
                                    std::vector<std::size_t>& order,
                                    SortScratch& scratch) {
  const std::size_t n = d.size();
  order.resize(n);
  if (n < 512 || n > std::numeric_limits<std::uint32_t>::max()) {
    auto& keyed = scratch.keyed;
    keyed.resize(n);
    for (std::size_t i = 0; i < n; ++i) keyed[i] = {-d[i], i};
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < n; ++i) order[i] = keyed[i].second;
    return;
  }
  constexpr unsigned kBits = 11;
  constexpr unsigned kPasses = (64 + kBits - 1) / kBits;
  constexpr std::size_t kBuckets = std::size_t{1} << kBits;
  auto& keys = scratch.keys;
  auto& keys_next = scratch.keys_next;
  auto& index = scratch.index;
  auto& index_next = scratch.index_next;
  auto& hist = scratch.histogram;
  keys.resize(n);
  keys_next.resize(n);
  index.resize(n);
  index_next.resize(n);
  hist.assign(kPasses * kBuckets, 0);
  for (std::size_t i = 0; i < n; ++i) {
    // + 0.0 folds -0.0 into +0.0; complementing turns ascending into descending.
    const std::uint64_t key = ~std::bit_cast<std::uint64_t>(d[i] + 0.0);
    keys[i] = key;
    index[i] = static_cast<std::uint32_t>(i);
    for (unsigned p = 0; p < kPasses; ++p)
      ++hist[p * kBuckets + ((key >> (p * kBits)) & (kBuckets - 1))];
  }
  for (unsigned p = 0; p < kPasses; ++p) {
    std::size_t* count = hist.data() + p * kBuckets;
    const unsigned shift = p * kBits;
    if (count[(keys[0] >> shift) & (kBuckets - 1)] == n) continue;  // one bucket
    std::size_t at = 0;
    for (std::size_t b = 0; b < kBuckets; ++b) {
      const std::size_t here = count[b];
      count[b] = at;
      at += here;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t slot = count[(keys[i] >> shift) & (kBuckets - 1)]++;
      keys_next[slot] = keys[i];
      index_next[slot] = index[i];
    }
    keys.swap(keys_next);
    index.swap(index_next);
  }
  for (std::size_t i = 0; i < n; ++i) order[i] = index[i];
}

// 0-based permutation v with d[v[0]] >= d[v[1]] >= ...; ties keep ascending
// index order.
inline std::vector<std::size_t> sort_by_connection_desc(
    std::span<const double> d) {
  std::vector<std::size_t> order;
  SortScratch scratch;
  sort_by_connection_desc(d, order, scratch);
  return order;
}

}  // namespace olfl

#endif  // OLFL_CORE_HPP_
