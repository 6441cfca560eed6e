// Copyright 2026 The banzhaf-lw Authors
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

/**
 * \file banzhaf/solver.hpp
 *
 * \brief Laruelle-Widgren iterative heuristic for the inverse Banzhaf problem.
 *
 * Each iteration measures the normalized Banzhaf index of the current
 * weights and divides every weight by the ratio power/target. The base
 * method cannot continue once some player has zero power. Three variants
 * address that:
 *
 *  - Restart: on a zero-power vector, jump to the midpoint of the best
 *    weights so far and the regular centroid.
 *  - MinCoalition(m): winning coalitions also need at least m members.
 *  - Scaling(s): the ratio becomes (power + s) / (target + s).
 *
 * Weights are never renormalized; the quota is compared against absolute
 * coalition weight.
 */

#ifndef BANZHAF_SOLVER_HPP
#define BANZHAF_SOLVER_HPP

#include <banzhaf/error.hpp>
#include <banzhaf/game.hpp>
#include <banzhaf/simplex.hpp>

#include <limits>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace banzhaf {

struct Omega0 {
  enum class Mode { Target, CentroidOrdered, OffsetTarget, Explicit };

  Mode mode = Mode::Target;
  Weights explicit_weights;

  static Omega0 target() { return {Mode::Target, {}}; }
  static Omega0 centroid() { return {Mode::CentroidOrdered, {}}; }
  static Omega0 offset() { return {Mode::OffsetTarget, {}}; }
  static Omega0 explicit_start(Weights w) { return {Mode::Explicit, std::move(w)}; }

  friend bool operator==(const Omega0&, const Omega0&) = default;
};

struct Variant {
  enum class Kind { Base, Restart, MinCoalition, Scaling };

  Kind kind = Kind::Base;
  int min_size = 1;
  double scaling = 0.0;

  static constexpr Variant base() { return {Kind::Base, 1, 0.0}; }
  static constexpr Variant restart() { return {Kind::Restart, 1, 0.0}; }
  static constexpr Variant min_coalition(int m) { return {Kind::MinCoalition, m, 0.0}; }
  static constexpr Variant scaled(double s) { return {Kind::Scaling, 1, s}; }

  friend bool operator==(const Variant&, const Variant&) = default;
};

inline constexpr double kDefaultMaxDistance = 1e-9;

struct SolverConfig {
  double quota = 0.5;
  Omega0 omega0 = Omega0::target();
  Variant variant = Variant::base();
  int max_iterations = 50;
  double max_distance = kDefaultMaxDistance;
  // Record the post-update weights of the best iteration, as the restart
  // pseudocode is literally written. Their power was never measured.
  bool literal_best_weights = false;

  ValuationRule rule() const {
    return variant.kind == Variant::Kind::MinCoalition
               ? ValuationRule::qualified_majority_min_size(variant.min_size)
               : ValuationRule::qualified_majority();
  }
  double scaling() const { return variant.kind == Variant::Kind::Scaling ? variant.scaling : 0.0; }
};

enum class Action { RatioUpdate, RestartJump, StopZeroPower, StopDistanceReached };
enum class StopReason { DistanceReached, IterationCap, ZeroPowerStop };

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::RatioUpdate: return "ratio_update";
    case Action::RestartJump: return "restart_jump";
    case Action::StopZeroPower: return "stop_zero_power";
    case Action::StopDistanceReached: return "stop_distance_reached";
  }
  return "?";
}

inline std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::DistanceReached: return "DistanceReached";
    case StopReason::IterationCap: return "IterationCap";
    case StopReason::ZeroPowerStop: return "ZeroPowerStop";
  }
  return "?";
}

struct IterationRecord {
  int index = 0;
  Weights weights_before;
  PowerVector power;
  double distance = 0.0;
  bool zero_power = false;  // some swing count is exactly zero
  Action action = Action::RatioUpdate;
};

struct SolverRun {
  SolverConfig config;
  TargetVector target;
  std::vector<IterationRecord> trace;
  Weights best_weights;
  PowerVector best_power;
  double best_distance = std::numeric_limits<double>::infinity();
  int best_iteration = -1;
  StopReason stop_reason = StopReason::IterationCap;

  /// Index of the iteration whose zero-power vector ended the run, or -1.
  int zero_stop_index() const {
    return stop_reason == StopReason::ZeroPowerStop ? static_cast<int>(trace.size()) - 1 : -1;
  }
  double initial_distance() const { return trace.empty() ? 0.0 : trace.front().distance; }
};

struct RatioResult {
  std::vector<double> ratio;
  bool zero_ratio = false;
};

inline RatioResult compute_ratio(const PowerVector& power, const TargetVector& target, double scaling) {
  if (power.size() != target.size()) throw Error(ErrorCode::LengthMismatch, "power and target lengths differ");
  if (!(scaling >= 0.0)) throw Error(ErrorCode::InvalidArgument, "scaling factor must be >= 0");
  RatioResult r;
  r.ratio.resize(power.size());
  for (std::size_t i = 0; i < power.size(); ++i) {
    if (!(target[i] > 0.0)) throw Error(ErrorCode::TargetContainsZero, "ratio needs positive targets");
    r.ratio[i] = (power[i] + scaling) / (target[i] + scaling);
    if (r.ratio[i] == 0.0) r.zero_ratio = true;
  }
  return r;
}

inline Weights resolve_omega0(const TargetVector& target, const Omega0& omega0) {
  switch (omega0.mode) {
    case Omega0::Mode::Target: return target.values();
    case Omega0::Mode::CentroidOrdered: return centroid_ordered(static_cast<int>(target.size())).values();
    case Omega0::Mode::OffsetTarget: return offset_target(target).values();
    case Omega0::Mode::Explicit:
      if (omega0.explicit_weights.size() != target.size()) {
        throw Error(ErrorCode::ExplicitLengthMismatch,
                    "explicit start has " + std::to_string(omega0.explicit_weights.size()) +
                        " weights for " + std::to_string(target.size()) + " players");
      }
      return omega0.explicit_weights;
  }
  return target.values();
}

/// Banzhaf index of the current weights and its distance to the target.
struct Evaluation {
  RawBanzhafVector raw;
  PowerVector power;
  double distance = 0.0;
  bool zero_power = false;
};

inline Evaluation evaluate_weights(const Weights& weights, const TargetVector& target, const SolverConfig& config) {
  for (double w : weights) {
    if (!(w > 0.0)) throw Error(ErrorCode::NonPositiveWeight, "solver weights must be strictly positive");
  }
  Evaluation e;
  e.raw = raw_banzhaf(WeightedVotingGame(config.quota, weights, config.rule()));
  e.power = normalize(e.raw);
  e.distance = d1_distance(e.power.values, target.values());
  e.zero_power = e.raw.has_zero();
  return e;
}

struct Advance {
  Weights weights;
  Action action = Action::RatioUpdate;
};

/// Weight update for an evaluated iteration. `best_weights` feeds the restart jump.
inline Advance advance_weights(const Weights& weights, const Evaluation& eval, const TargetVector& target,
                               const SolverConfig& config, std::span<const double> best_weights) {
  if (eval.distance < config.max_distance) return {weights, Action::StopDistanceReached};

  const RatioResult r = compute_ratio(eval.power, target, config.scaling());
  if (r.zero_ratio) {
    if (config.variant.kind != Variant::Kind::Restart) return {weights, Action::StopZeroPower};
    const double c = 1.0 / static_cast<double>(weights.size());
    Weights jump(weights.size());
    for (std::size_t i = 0; i < jump.size(); ++i) jump[i] = (best_weights[i] + c) / 2.0;
    return {std::move(jump), Action::RestartJump};
  }

  Weights next(weights.size());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = weights[i] / r.ratio[i];
  return {std::move(next), Action::RatioUpdate};
}

struct StepResult {
  Weights weights;
  IterationRecord record;
};

/// One iteration from `weights`. With an empty `best_weights` the restart jump uses `weights`.
inline StepResult step(const Weights& weights, const TargetVector& target, const SolverConfig& config,
                       std::span<const double> best_weights = {}, int index = 0) {
  if (weights.size() != target.size()) throw Error(ErrorCode::LengthMismatch, "weights and target lengths differ");
  if (!best_weights.empty() && best_weights.size() != weights.size()) {
    throw Error(ErrorCode::LengthMismatch, "best weights and weights lengths differ");
  }
  Evaluation eval = evaluate_weights(weights, target, config);
  Advance adv = advance_weights(weights, eval, target, config, best_weights.empty() ? std::span<const double>(weights) : best_weights);
  IterationRecord rec{index, weights, std::move(eval.power), eval.distance, eval.zero_power, adv.action};
  return {std::move(adv.weights), std::move(rec)};
}

namespace detail {

inline void validate_config(const SolverConfig& config, std::size_t n) {
  if (config.max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "maxIterations must be >= 1");
  if (!(config.max_distance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "maxDistance must be >= 0");
  if (!(config.quota >= 0.0)) throw Error(ErrorCode::InvalidArgument, "quota must be >= 0");
  if (config.variant.kind == Variant::Kind::MinCoalition &&
      (config.variant.min_size < 1 || static_cast<std::size_t>(config.variant.min_size) > n)) {
    throw Error(ErrorCode::InvalidArgument, "minimum coalition size must lie in [1, n]");
  }
  if (config.variant.kind == Variant::Kind::Scaling && !(config.variant.scaling >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "scaling factor must be >= 0");
  }
}

}  // namespace detail

inline SolverRun run(const TargetVector& target, const SolverConfig& config) {
  if (!target.strictly_positive()) throw Error(ErrorCode::TargetContainsZero, "target entries must be > 0");
  detail::validate_config(config, target.size());

  SolverRun result;
  result.config = config;
  result.target = target;

  Weights weights = resolve_omega0(target, config.omega0);
  Weights literal_best = weights;  // the restart pseudocode starts from omega0
  std::set<Weights> visited;
  result.trace.reserve(static_cast<std::size_t>(config.max_iterations));

  while (static_cast<int>(result.trace.size()) < config.max_iterations) {
    const int index = static_cast<int>(result.trace.size());
    Evaluation eval = evaluate_weights(weights, target, config);
    visited.insert(weights);

    const bool improved = eval.distance < result.best_distance;
    if (improved) {
      result.best_distance = eval.distance;
      result.best_power = eval.power;
      result.best_iteration = index;
      if (!config.literal_best_weights) result.best_weights = weights;
    }

    const Weights& jump_base = config.literal_best_weights ? literal_best : result.best_weights;
    Advance adv = advance_weights(weights, eval, target, config, jump_base);
    if (adv.action == Action::RestartJump && visited.count(adv.weights)) {
      // The deterministic iteration would only replay a visited state.
      adv.action = Action::StopZeroPower;
    }
    if (improved && config.literal_best_weights) {
      literal_best = adv.weights;
      result.best_weights = adv.weights;
    }

    result.trace.push_back(
        IterationRecord{index, weights, std::move(eval.power), eval.distance, eval.zero_power, adv.action});

    if (adv.action == Action::StopDistanceReached) {
      result.stop_reason = StopReason::DistanceReached;
      return result;
    }
    if (adv.action == Action::StopZeroPower) {
      result.stop_reason = StopReason::ZeroPowerStop;
      return result;
    }
    weights = std::move(adv.weights);
  }
  result.stop_reason = StopReason::IterationCap;
  return result;
}

// ---------------------------------------------------------------------------
// Text forms used by the CLI and experiment specs

inline std::string to_string(const Variant& v) {
  switch (v.kind) {
    case Variant::Kind::Base: return "base";
    case Variant::Kind::Restart: return "restart";
    case Variant::Kind::MinCoalition: return "mincoalition:" + std::to_string(v.min_size);
    case Variant::Kind::Scaling: return "scaling:" + detail::format_real(v.scaling, 10);
  }
  return "?";
}

/// `base`, `restart`, `mincoalition:<m>` or `scaling:<s>`.
inline Variant parse_variant(std::string_view text) {
  text = detail::trim(text);
  if (text == "base") return Variant::base();
  if (text == "restart") return Variant::restart();
  if (text.starts_with("mincoalition:")) {
    return Variant::min_coalition(static_cast<int>(detail::parse_integer(text.substr(13))));
  }
  if (text.starts_with("scaling:")) {
    const double s = detail::parse_real(text.substr(8));
    if (!(s >= 0.0)) throw Error(ErrorCode::ParseError, "scaling factor must be >= 0");
    return Variant::scaled(s);
  }
  throw Error(ErrorCode::ParseError, "unknown variant '" + std::string(text) + "'");
}

inline std::string to_string(const Omega0& o) {
  switch (o.mode) {
    case Omega0::Mode::Target: return "target";
    case Omega0::Mode::CentroidOrdered: return "centroid";
    case Omega0::Mode::OffsetTarget: return "offset";
    case Omega0::Mode::Explicit: return "explicit:" + format_vector(o.explicit_weights);
  }
  return "?";
}

/// `target`, `centroid`, `offset` or `explicit:<csv>`.
inline Omega0 parse_omega0(std::string_view text) {
  text = detail::trim(text);
  if (text == "target") return Omega0::target();
  if (text == "centroid") return Omega0::centroid();
  if (text == "offset") return Omega0::offset();
  if (text.starts_with("explicit:")) return Omega0::explicit_start(parse_vector(text.substr(9)));
  throw Error(ErrorCode::ParseError, "unknown omega0 mode '" + std::string(text) + "'");
}

}  // namespace banzhaf

#endif  // BANZHAF_SOLVER_HPP
