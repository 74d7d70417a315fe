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

#ifndef OLFL_LEARNERS_HPP_
#define OLFL_LEARNERS_HPP_

// The three facility-location learners, each a strict play/update state
// machine:
//
//   FixedCardinalityLearner    competes with sets of exactly K sites,
//   BoundedCardinalityLearner  with sets of at most K sites (adds N dummy
//                              sites), and
//   DoublingLearner            with any set, restarting the bounded learner
//                              with a larger K whenever its accumulated
//                              surrogate loss crosses a threshold.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "olfl/core.hpp"
#include "olfl/eg.hpp"
#include "olfl/sampler.hpp"
#include "olfl/surrogate.hpp"

namespace olfl {

namespace detail {

class PhaseGuard {
 public:
  void begin_play(const char* who) {
    if (awaiting_update_)
      throw ProtocolError(std::string(who) + ": play called twice without update");
    awaiting_update_ = true;
  }
  void begin_update(const char* who) {
    if (!awaiting_update_)
      throw ProtocolError(std::string(who) + ": update called before play");
    awaiting_update_ = false;
  }
  bool awaiting_update() const { return awaiting_update_; }

 private:
  bool awaiting_update_ = false;
};

inline void check_costs(std::span<const double> opening,
                        std::span<const double> connection,
                        const GameConfig& cfg, const char* who) {
  if (opening.size() != cfg.sites || connection.size() != cfg.sites) {
    throw ValidationError(std::string(who) + ": cost vectors have " +
                          std::to_string(opening.size()) + " sites, expected " +
                          std::to_string(cfg.sites));
  }
  for (double c : opening)
    if (!(c >= 0.0 && c <= cfg.opening_max))
      throw ValidationError(std::string(who) + ": opening cost outside [0, C]");
  for (double d : connection)
    if (!(d >= 0.0 && d <= cfg.connection_max))
      throw ValidationError(std::string(who) + ": connection cost outside [0, D]");
}

inline void check_costs(const CostPair& costs, const GameConfig& cfg,
                        const char* who) {
  check_costs(costs.opening(), costs.connection(), cfg, who);
}

}  // namespace detail

// -- Known cardinality --------------------------------------------------------

class FixedCardinalityLearner {
 public:
  FixedCardinalityLearner(const GameConfig& cfg, std::size_t cardinality)
      : cfg_((cfg.validate(), cfg)),
        cardinality_(cardinality),
        upsilon_(checked_cardinality(cfg, cardinality) *
                 log_horizon_factor(cfg.trials)),
        weights_(cfg.sites,
                 (cfg.opening_max + cfg.connection_max) *
                     static_cast<double>(upsilon_),
                 cfg.trials) {}

  const GameConfig& config() const { return cfg_; }
  std::size_t cardinality() const { return cardinality_; }
  std::size_t upsilon() const { return upsilon_; }
  const ExponentiatedGradient& core() const { return weights_; }
  std::span<const double> weights() const { return weights_.play(); }

  // Draws upsilon sites from the current weights.
  template <typename Rng>
  SiteSet play(Rng& rng) {
    phase_.begin_play("fixed-cardinality learner");
    tree_.assign(weights_.play());
    return sample_site_multiset(tree_, upsilon_, rng);
  }

  // Returns the surrogate value at the pre-update weights.
  double update(const CostPair& costs) {
    return update(costs.opening(), costs.connection());
  }

  double update(std::span<const double> opening,
                std::span<const double> connection) {
    // Checked first so that rejected costs leave the trial open.
    detail::check_costs(opening, connection, cfg_, "fixed-cardinality learner");
    phase_.begin_update("fixed-cardinality learner");
    const double lambda = value_and_gradient(opening, connection, upsilon_,
                                             weights_.play(), workspace_);
    return weights_.update(lambda, workspace_.gradient);
  }

 private:
  static std::size_t checked_cardinality(const GameConfig& cfg,
                                         std::size_t k) {
    if (k < 1 || k > cfg.sites) {
      throw ConfigError("cardinality K = " + std::to_string(k) +
                        " outside 1.." + std::to_string(cfg.sites));
    }
    return k;
  }

  GameConfig cfg_;
  std::size_t cardinality_;
  std::size_t upsilon_;
  ExponentiatedGradient weights_;
  SamplingTree tree_;
  SurrogateWorkspace workspace_;
  detail::PhaseGuard phase_;
};

// -- Bounded cardinality ------------------------------------------------------

class BoundedCardinalityLearner {
 public:
  BoundedCardinalityLearner(const GameConfig& cfg, std::size_t cardinality)
      : cfg_((cfg.validate(), cfg)),
        inner_(extended_config(cfg), checked(cfg, cardinality)),
        opening_(2 * cfg.sites, 0.0),
        connection_(2 * cfg.sites, cfg.opening_max + cfg.connection_max) {}

  // N real sites followed by N dummies with opening cost 0 and connection
  // cost C + D.
  static GameConfig extended_config(const GameConfig& cfg) {
    return GameConfig{2 * cfg.sites, cfg.trials, cfg.opening_max,
                      cfg.opening_max + cfg.connection_max};
  }

  static CostPair extend_costs(const CostPair& costs, const GameConfig& cfg) {
    const std::size_t n = costs.size();
    const double dummy_connection = cfg.opening_max + cfg.connection_max;
    std::vector<double> c(2 * n, 0.0);
    std::vector<double> d(2 * n, dummy_connection);
    std::copy(costs.opening().begin(), costs.opening().end(), c.begin());
    std::copy(costs.connection().begin(), costs.connection().end(), d.begin());
    return CostPair(std::move(c), std::move(d), cfg.opening_max,
                    dummy_connection);
  }

  // Drops dummy sites from an extended selection; falls back to {1}.
  static SiteSet restrict_to_real(const SiteSet& extended, std::size_t sites) {
    std::vector<std::size_t> real;
    for (std::size_t s : extended)
      if (s <= sites) real.push_back(s);
    if (real.empty()) return SiteSet::singleton(1);
    return SiteSet(std::move(real), sites);
  }

  const GameConfig& config() const { return cfg_; }
  std::size_t cardinality() const { return inner_.cardinality(); }
  std::size_t upsilon() const { return inner_.upsilon(); }
  const FixedCardinalityLearner& inner() const { return inner_; }
  std::span<const double> weights() const { return inner_.weights(); }

  template <typename Rng>
  SiteSet play(Rng& rng) {
    return restrict_to_real(inner_.play(rng), cfg_.sites);
  }

  double update(const CostPair& costs) {
    detail::check_costs(costs, cfg_, "bounded-cardinality learner");
    // Only the real half changes; the dummy half keeps (0, C + D).
    std::copy(costs.opening().begin(), costs.opening().end(), opening_.begin());
    std::copy(costs.connection().begin(), costs.connection().end(),
              connection_.begin());
    return inner_.update(opening_, connection_);
  }

 private:
  static std::size_t checked(const GameConfig& cfg, std::size_t k) {
    if (k < 1 || k > cfg.sites) {
      throw ConfigError("cardinality K = " + std::to_string(k) +
                        " outside 1.." + std::to_string(cfg.sites));
    }
    return k;
  }

  GameConfig cfg_;
  FixedCardinalityLearner inner_;
  std::vector<double> opening_;
  std::vector<double> connection_;
};

// -- Doubling -----------------------------------------------------------------

struct DoublingReport {
  double lambda = 0.0;      // surrogate value of the finished trial
  double scale = 1.0;       // theta in force during the trial
  std::size_t cardinality = 1;  // K in force during the trial
  std::size_t segment = 0;      // segment the trial belonged to
  bool restarted = false;       // the trial closed its segment
};

class DoublingLearner {
 public:
  explicit DoublingLearner(const GameConfig& cfg)
      : cfg_((cfg.validate(), cfg)),
        slope_(static_cast<double>(log_horizon_factor(cfg.trials)) *
               (4.0 * cfg.opening_max + 2.0 * cfg.connection_max)),
        offset_(cfg.opening_max + cfg.connection_max) {
    restart(1.0);
  }

  // a = ceil(ln(T)/2) (4C + 2D)
  double slope() const { return slope_; }
  // b = C + D
  double offset() const { return offset_; }
  double scale() const { return scale_; }
  std::size_t cardinality() const { return cardinality_; }
  double accumulated() const { return accumulated_; }
  std::size_t segment() const { return segment_; }
  // 1-based trials that closed a segment.
  const std::vector<std::size_t>& boundaries() const { return boundaries_; }
  const BoundedCardinalityLearner& inner() const { return *inner_; }
  const GameConfig& config() const { return cfg_; }

  // ceil((theta (a+b) - b) / a), clamped to [1, N].
  std::size_t cardinality_for(double scale) const {
    const double raw = (scale * (slope_ + offset_) - offset_) / slope_;
    const double k = std::ceil(raw * (1.0 - 1e-12));
    return static_cast<std::size_t>(
        std::clamp(k, 1.0, static_cast<double>(cfg_.sites)));
  }

  // 2 (a+b) theta sqrt(ln(2N) T)
  double threshold(double scale) const {
    return 2.0 * (slope_ + offset_) * scale *
           std::sqrt(std::log(2.0 * static_cast<double>(cfg_.sites)) *
                     static_cast<double>(cfg_.trials));
  }

  template <typename Rng>
  SiteSet play(Rng& rng) {
    return inner_->play(rng);
  }

  DoublingReport update(const CostPair& costs) {
    DoublingReport report;
    report.scale = scale_;
    report.cardinality = cardinality_;
    report.segment = segment_;
    report.lambda = inner_->update(costs);
    ++trial_;
    accumulated_ += report.lambda;
    if (accumulated_ >= threshold(scale_)) {
      restart(2.0 * scale_);
      ++segment_;
      boundaries_.push_back(trial_);
      report.restarted = true;
    }
    return report;
  }

 private:
  void restart(double scale) {
    scale_ = scale;
    cardinality_ = cardinality_for(scale);
    inner_.emplace(cfg_, cardinality_);
    accumulated_ = 0.0;
  }

  GameConfig cfg_;
  double slope_;
  double offset_;
  double scale_ = 1.0;
  std::size_t cardinality_ = 1;
  double accumulated_ = 0.0;
  std::size_t segment_ = 0;
  std::size_t trial_ = 0;
  std::vector<std::size_t> boundaries_;
  std::optional<BoundedCardinalityLearner> inner_;
};

}  // namespace olfl

#endif  // OLFL_LEARNERS_HPP_
