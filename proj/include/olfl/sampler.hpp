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

#ifndef OLFL_SAMPLER_HPP_
#define OLFL_SAMPLER_HPP_

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "olfl/core.hpp"

namespace olfl {

// Balanced binary tree of partial masses over a categorical distribution.
// Heap layout: node 1 is the root, node j has children 2j and 2j+1, and the
// leaves occupy [leaf_count, 2 leaf_count) with leaf leaf_count + i holding
// site i + 1. Leaves past the last site carry zero mass.
class SamplingTree {
 public:
  SamplingTree() = default;
  explicit SamplingTree(std::span<const double> p) { assign(p); }

  // Rebuilds the tree for a new distribution, reusing storage.
  void assign(std::span<const double> p) {
    if (p.empty()) throw ValidationError("distribution must be nonempty");
    sites_ = p.size();
    height_ = 0;
    leaf_count_ = 1;
    while (leaf_count_ < sites_) {
      leaf_count_ <<= 1;
      ++height_;
    }
    mass_.assign(2 * leaf_count_, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < sites_; ++i) {
      if (!(p[i] >= 0.0) || !std::isfinite(p[i])) {
        throw ValidationError("probability p_" + std::to_string(i + 1) +
                              " is negative or not finite");
      }
      mass_[leaf_count_ + i] = p[i];
      total += p[i];
    }
    if (!(total > 0.0)) throw ValidationError("distribution has zero mass");
    if (!(std::abs(total - 1.0) <= 1e-9)) {
      throw ValidationError("distribution sums to " + std::to_string(total) +
                            ", not 1");
    }
    for (std::size_t j = leaf_count_ - 1; j >= 1; --j)
      mass_[j] = mass_[2 * j] + mass_[2 * j + 1];
  }

  std::size_t height() const { return height_; }
  std::size_t leaf_count() const { return leaf_count_; }
  std::size_t site_count() const { return sites_; }
  double root_mass() const { return mass_[1]; }
  // Node masses indexed by heap position; entry 0 is unused.
  std::span<const double> node_masses() const { return mass_; }

  // Draws a 1-based site; consumes exactly height() uniforms.
  template <typename Rng>
  std::size_t sample(Rng& rng) const {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::size_t node = 1;
    for (std::size_t depth = 0; depth < height_; ++depth) {
      const double left = mass_[2 * node];
      const double right = mass_[2 * node + 1];
      const double r = uniform(rng);
      if (!(left + right > 0.0))
        throw NumericError("sampling tree descended into a zero-mass node");
      if (left > 0.0 && r <= left / (left + right)) {
        node = 2 * node;
      } else {
        node = 2 * node + 1;
      }
    }
    return node - leaf_count_ + 1;
  }

 private:
  std::size_t sites_ = 0;
  std::size_t height_ = 0;
  std::size_t leaf_count_ = 1;
  std::vector<double> mass_;
};

// `count` draws with replacement, deduplicated.
template <typename Rng>
SiteSet sample_site_multiset(std::span<const double> p, std::size_t count,
                             Rng& rng) {
  return sample_site_multiset(SamplingTree(p), count, rng);
}

template <typename Rng>
SiteSet sample_site_multiset(const SamplingTree& tree, std::size_t count,
                             Rng& rng) {
  if (count < 1) throw ConfigError("sample count must be at least 1");
  std::vector<std::size_t> drawn;
  drawn.reserve(count);
  for (std::size_t i = 0; i < count; ++i) drawn.push_back(tree.sample(rng));
  return SiteSet(std::move(drawn), tree.site_count());
}

}  // namespace olfl

#endif  // OLFL_SAMPLER_HPP_
