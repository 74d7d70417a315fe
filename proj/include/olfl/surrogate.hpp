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

#ifndef OLFL_SURROGATE_HPP_
#define OLFL_SURROGATE_HPP_

// Convex surrogate of the expected facility loss when `upsilon` sites are
// drawn with replacement from a distribution w over N sites:
//
//   f(w) = upsilon c.w + d_{v(N)}
//          + sum_{i<N} (d_{v(i)} - d_{v(i+1)}) (w_{v(1)} + ... + w_{v(i)})^upsilon
//
// where v orders the sites by nonincreasing connection cost.

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "olfl/core.hpp"

namespace olfl {

class SurrogateInstance {
 public:
  // Sorts the connection costs; `costs` must outlive the instance.
  SurrogateInstance(const CostPair& costs, std::size_t upsilon)
      : opening_(costs.opening()),
        connection_(costs.connection()),
        order_(sort_by_connection_desc(costs.connection())),
        upsilon_(upsilon) {
    if (upsilon < 1) throw ConfigError("upsilon must be at least 1");
  }

  std::size_t size() const { return opening_.size(); }
  std::size_t upsilon() const { return upsilon_; }
  std::span<const double> opening() const { return opening_; }
  std::span<const double> connection() const { return connection_; }
  std::span<const std::size_t> order() const { return order_; }

 private:
  std::span<const double> opening_;
  std::span<const double> connection_;
  std::vector<std::size_t> order_;
  std::size_t upsilon_;
};

struct SurrogateValue {
  double lambda = 0.0;
  std::vector<double> gradient;
};

namespace detail {

inline void check_simplex(std::span<const double> w, std::size_t n) {
  if (w.size() != n) {
    throw ContractError("weight vector has " + std::to_string(w.size()) +
                        " entries, expected " + std::to_string(n));
  }
  double mass = 0.0;
  for (double x : w) {
    if (!(x >= -1e-12)) throw ContractError("weight vector has a negative entry");
    mass += x;
  }
  if (!(std::abs(mass - 1.0) <= 1e-9))
    throw ContractError("weight vector is not on the simplex (sum " +
                        std::to_string(mass) + ")");
}

// One forward pass for the value, one backward pass for the gradient.
// `power` and `gradient` are resized to N.
inline double evaluate_sorted(std::span<const double> c, std::span<const double> d,
                              std::span<const std::size_t> v, std::size_t upsilon,
                              std::span<const double> w, std::vector<double>& power,
                              std::vector<double>& gradient) {
  const std::size_t n = c.size();
  const double ups = static_cast<double>(upsilon);
  power.resize(n);
  gradient.resize(n);

  double lambda = 0.0;
  for (std::size_t i = 0; i < n; ++i) lambda += c[i] * w[i];
  lambda *= ups;
  lambda += d[v[n - 1]];

  // power[i] = s_i^(upsilon-1) with s_i = w_{v(1)} + ... + w_{v(i)}; 0^0 = 1.
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    running += w[v[i]];
    power[i] = upsilon == 1 ? 1.0 : std::pow(running, ups - 1.0);
    if (i + 1 < n) lambda += (d[v[i]] - d[v[i + 1]]) * power[i] * running;
  }

  double suffix = 0.0;  // s'_N = 0
  gradient[v[n - 1]] = ups * c[v[n - 1]];
  for (std::size_t i = n - 1; i-- > 0;) {
    suffix += (d[v[i]] - d[v[i + 1]]) * power[i];
    gradient[v[i]] = ups * (c[v[i]] + suffix);
  }
  return lambda;
}

}  // namespace detail

// Value and exact gradient of f at a simplex point in O(N) after the sort.
inline SurrogateValue value_and_gradient(const SurrogateInstance& inst,
                                         std::span<const double> w) {
  detail::check_simplex(w, inst.size());
  SurrogateValue out;
  std::vector<double> power;
  out.lambda = detail::evaluate_sorted(inst.opening(), inst.connection(),
                                       inst.order(), inst.upsilon(), w, power,
                                       out.gradient);
  return out;
}

// Reusable buffers for repeated evaluations at a fixed N.
struct SurrogateWorkspace {
  std::vector<std::size_t> order;
  SortScratch keyed;
  std::vector<double> power;
  std::vector<double> gradient;
};

// Same as above without per-call allocation once `ws` has warmed up; the
// gradient lands in ws.gradient.
inline double value_and_gradient(std::span<const double> opening,
                                 std::span<const double> connection,
                                 std::size_t upsilon, std::span<const double> w,
                                 SurrogateWorkspace& ws) {
  if (upsilon < 1) throw ConfigError("upsilon must be at least 1");
  if (opening.size() != connection.size() || opening.empty())
    throw ContractError("cost vectors are empty or differ in length");
  detail::check_simplex(w, opening.size());
  sort_by_connection_desc(connection, ws.order, ws.keyed);
  return detail::evaluate_sorted(opening, connection, ws.order, upsilon, w,
                                 ws.power, ws.gradient);
}

}  // namespace olfl

#endif  // OLFL_SURROGATE_HPP_
