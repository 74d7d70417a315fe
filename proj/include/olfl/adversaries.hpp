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

#ifndef OLFL_ADVERSARIES_HPP_
#define OLFL_ADVERSARIES_HPP_

// Sources of Nature's cost vectors: the adaptive adversary that defeats any
// deterministic learner, i.i.d. and drifting generators, and CSV traces.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "olfl/core.hpp"

namespace olfl {

// Costs against a learner's action with C = D = 1: every opening cost is
// 1/sqrt(N); if the action has at most sqrt(N) sites its members get
// connection cost 1 and all others 0, otherwise every connection cost is 0.
inline CostPair killer_costs(std::size_t sites, const SiteSet& action) {
  if (sites < 1) throw ConfigError("killer adversary needs at least one site");
  const double root = std::sqrt(static_cast<double>(sites));
  std::vector<double> c(sites, 1.0 / root);
  std::vector<double> d(sites, 0.0);
  if (static_cast<double>(action.size()) <= root) {
    for (std::size_t s : action) {
      if (s < 1 || s > sites)
        throw ValidationError("killer adversary: action outside 1..N");
      d[s - 1] = 1.0;
    }
  }
  return CostPair(std::move(c), std::move(d), 1.0, 1.0);
}

enum class ScenarioKind { kKiller, kIidUniform, kDrifting, kReplay };

inline std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kKiller: return "killer";
    case ScenarioKind::kIidUniform: return "iid";
    case ScenarioKind::kDrifting: return "drift";
    case ScenarioKind::kReplay: return "replay";
  }
  return "unknown";
}

inline ScenarioKind scenario_kind_from_string(std::string_view name) {
  if (name == "killer") return ScenarioKind::kKiller;
  if (name == "iid" || name == "iid-uniform") return ScenarioKind::kIidUniform;
  if (name == "drift" || name == "drifting") return ScenarioKind::kDrifting;
  if (name == "replay") return ScenarioKind::kReplay;
  throw ConfigError("unknown scenario kind '" + std::string(name) + "'");
}

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kIidUniform;
  std::uint64_t seed = 0;
  double drift_step = 0.05;   // std-dev of the user's per-trial move
  double drift_reach = 0.5;   // distance at which d_i saturates at D
  std::string trace_path;     // replay only

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

// -- Oblivious generators -----------------------------------------------------

inline std::vector<CostPair> generate_iid_uniform(const GameConfig& cfg,
                                                  std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<CostPair> out;
  out.reserve(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    std::vector<double> c(cfg.sites), d(cfg.sites);
    for (double& x : c) x = cfg.opening_max * unit(rng);
    for (double& x : d) x = cfg.connection_max * unit(rng);
    out.emplace_back(std::move(c), std::move(d), cfg.opening_max,
                     cfg.connection_max);
  }
  return out;
}

// Sites fixed at random points of the unit square with fixed opening costs;
// a user random-walks (reflecting at the border) and pays
// D * min(1, distance / reach) to reach each site.
inline std::vector<CostPair> generate_drifting(const GameConfig& cfg,
                                               std::uint64_t seed, double step,
                                               double reach) {
  cfg.validate();
  if (!(step >= 0.0)) throw ConfigError("drift step must be nonnegative");
  if (!(reach > 0.0)) throw ConfigError("drift reach must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> x(cfg.sites), y(cfg.sites), c(cfg.sites);
  for (std::size_t i = 0; i < cfg.sites; ++i) {
    x[i] = unit(rng);
    y[i] = unit(rng);
    c[i] = cfg.opening_max * unit(rng);
  }
  double ux = unit(rng);
  double uy = unit(rng);
  const auto reflect = [](double v) {
    v = std::fmod(std::abs(v), 2.0);
    return v > 1.0 ? 2.0 - v : v;
  };

  std::vector<CostPair> out;
  out.reserve(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    std::vector<double> d(cfg.sites);
    for (std::size_t i = 0; i < cfg.sites; ++i) {
      const double dist = std::hypot(x[i] - ux, y[i] - uy);
      d[i] = cfg.connection_max * std::min(1.0, dist / reach);
    }
    out.emplace_back(c, std::move(d), cfg.opening_max, cfg.connection_max);
    if (step > 0.0) {
      ux = reflect(ux + step * gauss(rng));
      uy = reflect(uy + step * gauss(rng));
    }
  }
  return out;
}

// -- Trace CSV ----------------------------------------------------------------

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace detail

// Parses "t,c_1,...,c_N,d_1,...,d_N" rows (t = 1, 2, ...), with an optional
// header line starting with "t". When `expected` is given, N, T and the cost
// bounds are checked against it.
inline std::vector<CostPair> parse_trace(std::istream& in,
                                         const std::string& source,
                                         std::optional<GameConfig> expected =
                                             std::nullopt) {
  const double c_max = expected ? expected->opening_max
                                : std::numeric_limits<double>::max();
  const double d_max = expected ? expected->connection_max
                                : std::numeric_limits<double>::max();
  std::vector<CostPair> out;
  std::optional<std::size_t> sites;
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) {
    throw ParseError(source + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = detail::trim(line);
    if (row.empty()) continue;
    const auto fields = detail::split_commas(row);
    if (out.empty() && !sites && detail::trim(fields[0]) == "t") {
      if (fields.size() < 3 || fields.size() % 2 == 0)
        fail("header must list t followed by 2N cost columns");
      sites = (fields.size() - 1) / 2;
      continue;
    }
    if (fields.size() < 3 || fields.size() % 2 == 0) {
      fail("expected t followed by 2N cost columns, got " +
           std::to_string(fields.size()) + " fields");
    }
    const std::size_t n = (fields.size() - 1) / 2;
    if (!sites) sites = n;
    if (n != *sites) {
      fail("row has " + std::to_string(n) + " sites, expected " +
           std::to_string(*sites));
    }
    std::size_t t = 0;
    if (!detail::parse_number(fields[0], t)) fail("trial index is not an integer");
    if (t != out.size() + 1) {
      fail("trial index " + std::to_string(t) + " out of sequence (expected " +
           std::to_string(out.size() + 1) + ")");
    }
    std::vector<double> c(n), d(n);
    for (std::size_t k = 0; k < 2 * n; ++k) {
      const bool opening = k < n;
      const std::size_t site = (opening ? k : k - n) + 1;
      const std::string name = (opening ? "c_" : "d_") + std::to_string(site);
      double value = 0.0;
      if (!detail::parse_number(fields[k + 1], value) || !std::isfinite(value))
        fail("field " + name + " is not a real number");
      const double bound = opening ? c_max : d_max;
      if (value < 0.0 || value > bound) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "field " << name << " = " << value << " outside [0, " << bound
            << "]";
        fail(msg.str());
      }
      (opening ? c : d)[site - 1] = value;
    }
    out.emplace_back(std::move(c), std::move(d), c_max, d_max);
  }
  if (out.empty()) throw ParseError(source + ": no trials");
  if (expected) {
    if (*sites != expected->sites) {
      throw ParseError(source + ": trace has " + std::to_string(*sites) +
                       " sites, configuration expects " +
                       std::to_string(expected->sites));
    }
    if (out.size() != expected->trials) {
      throw ParseError(source + ": trace has " + std::to_string(out.size()) +
                       " trials, configuration expects " +
                       std::to_string(expected->trials));
    }
  }
  return out;
}

inline std::vector<CostPair> load_trace(const std::string& path,
                                        std::optional<GameConfig> expected =
                                            std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open trace");
  return parse_trace(in, path, expected);
}

inline void write_trace(std::ostream& out, std::span<const CostPair> trace) {
  if (trace.empty()) return;
  const std::size_t n = trace.front().size();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",c_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",d_" << i;
  out << '\n';
  out.precision(17);
  for (std::size_t t = 0; t < trace.size(); ++t) {
    out << (t + 1);
    for (double c : trace[t].opening()) out << ',' << c;
    for (double d : trace[t].connection()) out << ',' << d;
    out << '\n';
  }
}

// -- Scenario source ----------------------------------------------------------

// Emits one CostPair per trial. The killer kind is adaptive and needs the
// learner action it reacts to; the other kinds are fixed in advance.
class ScenarioSource {
 public:
  ScenarioSource(const ScenarioSpec& spec, const GameConfig& cfg)
      : spec_(spec), cfg_((cfg.validate(), cfg)) {
    switch (spec.kind) {
      case ScenarioKind::kKiller:
        if (cfg.opening_max != 1.0 || cfg.connection_max != 1.0)
          throw ConfigError("killer scenario requires C = D = 1");
        break;
      case ScenarioKind::kIidUniform:
        costs_ = generate_iid_uniform(cfg, spec.seed);
        break;
      case ScenarioKind::kDrifting:
        costs_ = generate_drifting(cfg, spec.seed, spec.drift_step,
                                   spec.drift_reach);
        break;
      case ScenarioKind::kReplay:
        costs_ = load_trace(spec.trace_path, cfg);
        break;
    }
  }

  // Fixed sequence, for tests and in-memory replays.
  ScenarioSource(std::vector<CostPair> costs, const GameConfig& cfg)
      : cfg_((cfg.validate(), cfg)), costs_(std::move(costs)) {
    spec_.kind = ScenarioKind::kReplay;
    if (costs_.size() != cfg.trials)
      throw ConfigError("replay length differs from the trial horizon");
    for (const CostPair& c : costs_)
      if (c.size() != cfg.sites)
        throw ConfigError("replay site count differs from the configuration");
  }

  bool adaptive() const { return spec_.kind == ScenarioKind::kKiller; }
  const ScenarioSpec& spec() const { return spec_; }

  // Costs for the 0-based trial `t`. Adaptive sources react to `action`;
  // with no action to react to every connection cost is 0.
  CostPair costs(std::size_t t, const SiteSet* action) const {
    if (adaptive()) {
      if (action == nullptr) {
        const double c = 1.0 / std::sqrt(static_cast<double>(cfg_.sites));
        return CostPair(std::vector<double>(cfg_.sites, c),
                        std::vector<double>(cfg_.sites, 0.0), 1.0, 1.0);
      }
      return killer_costs(cfg_.sites, *action);
    }
    return costs_.at(t);
  }

  std::span<const CostPair> fixed_sequence() const { return costs_; }

 private:
  ScenarioSpec spec_;
  GameConfig cfg_;
  std::vector<CostPair> costs_;
};

}  // namespace olfl

#endif  // OLFL_ADVERSARIES_HPP_
