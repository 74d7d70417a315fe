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

#ifndef OLFL_EG_HPP_
#define OLFL_EG_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "olfl/core.hpp"

namespace olfl {

// Exponentiated gradient over the N-simplex with a fixed learning rate
// eta = (1/G) sqrt(ln(N)/T). The loss function is never evaluated here; the
// caller passes its value at the current point together with the gradient.
class ExponentiatedGradient {
 public:
  ExponentiatedGradient(std::size_t dimension, double gradient_bound,
                        std::size_t horizon)
      : gradient_bound_(gradient_bound), horizon_(horizon) {
    if (dimension < 1) throw ConfigError("EG dimension must be positive");
    if (!(gradient_bound > 0.0) || !std::isfinite(gradient_bound))
      throw ConfigError("EG gradient bound must be positive and finite");
    if (horizon < 1) throw ConfigError("EG horizon must be positive");
    weights_.assign(dimension, 1.0 / static_cast<double>(dimension));
    eta_ = std::sqrt(std::log(static_cast<double>(dimension)) /
                     static_cast<double>(horizon)) /
           gradient_bound;
  }

  std::size_t dimension() const { return weights_.size(); }
  double eta() const { return eta_; }
  double gradient_bound() const { return gradient_bound_; }
  std::size_t horizon() const { return horizon_; }

  std::span<const double> play() const { return weights_; }

  // Multiplicative step w_i <- w_i exp(-eta g_i) / Z. `lambda` is the loss at
  // the pre-update point and is handed back unchanged.
  double update(double lambda, std::span<const double> gradient) {
    if (gradient.size() != weights_.size()) {
      throw ContractError("gradient has " + std::to_string(gradient.size()) +
                          " components, expected " +
                          std::to_string(weights_.size()));
    }
    const double limit = gradient_bound_ * (1.0 + 1e-9);
    double max_exponent = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gradient.size(); ++i) {
      if (!(std::abs(gradient[i]) <= limit)) {
        throw ContractError("gradient component " + std::to_string(i + 1) +
                            " = " + std::to_string(gradient[i]) +
                            " exceeds bound " + std::to_string(gradient_bound_));
      }
      if (weights_[i] > 0.0)
        max_exponent = std::max(max_exponent, -eta_ * gradient[i]);
    }
    if (!std::isfinite(max_exponent))
      throw NumericError("EG weights have no positive mass");

    // Shifting every exponent by the largest one cancels in Z.
    double total = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      weights_[i] *= std::exp(-eta_ * gradient[i] - max_exponent);
      total += weights_[i];
    }
    if (!(total > 0.0) || !std::isfinite(total))
      throw NumericError("EG normaliser is zero or not finite");
    for (double& w : weights_) w /= total;
    return lambda;
  }

 private:
  std::vector<double> weights_;
  double eta_ = 0.0;
  double gradient_bound_ = 1.0;
  std::size_t horizon_ = 1;
};

}  // namespace olfl

#endif  // OLFL_EG_HPP_
