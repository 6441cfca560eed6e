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
 * \file banzhaf/game.hpp
 *
 * \brief Weighted voting games and exact Banzhaf indices.
 *
 * A game \f$[q; w_1,\ldots,w_n]\f$ is evaluated by enumerating all
 * \f$2^n\f$ coalitions as bitmasks. Player \f$i\f$ (0-based) is bit \f$i\f$.
 */

#ifndef BANZHAF_GAME_HPP
#define BANZHAF_GAME_HPP

#include <banzhaf/error.hpp>

#include <bit>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace banzhaf {

/// Tolerance on the strict quota comparison: a coalition wins iff w(C) > q + eps.
inline constexpr double kQuotaEpsilon = 1e-12;

/// Largest player count accepted by the exact enumeration.
inline constexpr int kDefaultPlayerCap = 24;

using Weights = std::vector<double>;

struct ValuationRule {
  enum class Kind { Unanimity, SimpleMajority, QualifiedMajority, QualifiedMajorityMinSize };

  Kind kind = Kind::QualifiedMajority;
  int min_size = 1;  // only meaningful for QualifiedMajorityMinSize

  static constexpr ValuationRule unanimity() { return {Kind::Unanimity, 1}; }
  static constexpr ValuationRule simple_majority() { return {Kind::SimpleMajority, 1}; }
  static constexpr ValuationRule qualified_majority() { return {Kind::QualifiedMajority, 1}; }
  static constexpr ValuationRule qualified_majority_min_size(int m) {
    return {Kind::QualifiedMajorityMinSize, m};
  }

  friend bool operator==(const ValuationRule&, const ValuationRule&) = default;
};

/// Subset of players as a bitmask; bit i is player i.
struct Coalition {
  std::uint64_t bits = 0;

  static Coalition of(std::initializer_list<int> players) {
    Coalition c;
    for (int p : players) c.bits |= std::uint64_t{1} << p;
    return c;
  }
  int size() const { return std::popcount(bits); }
  bool contains(int player) const { return (bits >> player) & 1U; }
};

class WeightedVotingGame {
 public:
  WeightedVotingGame(double quota, Weights weights,
                     ValuationRule rule = ValuationRule::qualified_majority())
      : quota_(quota), weights_(std::move(weights)), rule_(rule) {
    if (weights_.empty()) throw Error(ErrorCode::InvalidArgument, "game needs at least one player");
    if (!(quota_ >= 0.0)) throw Error(ErrorCode::InvalidArgument, "quota must be non-negative");
    for (double w : weights_) {
      if (!(w >= 0.0)) throw Error(ErrorCode::InvalidArgument, "weights must be non-negative");
    }
    if (rule_.kind == ValuationRule::Kind::QualifiedMajorityMinSize &&
        (rule_.min_size < 1 || rule_.min_size > players())) {
      throw Error(ErrorCode::InvalidArgument, "minimum coalition size must lie in [1, n]");
    }
  }

  int players() const { return static_cast<int>(weights_.size()); }
  double quota() const { return quota_; }
  const Weights& weights() const { return weights_; }
  const ValuationRule& rule() const { return rule_; }

 private:
  double quota_;
  Weights weights_;
  ValuationRule rule_;
};

/// Swing counts per player over the 2^(n-1) coalitions of the other players.
struct RawBanzhafVector {
  std::vector<std::uint64_t> counts;
  std::uint64_t denominator = 1;

  std::uint64_t total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }
  bool has_zero() const {
    for (auto c : counts) if (c == 0) return true;
    return false;
  }
};

/// Normalized Banzhaf index. Sums to 1, or is all zero for a game without swings.
struct PowerVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool is_degenerate() const {
    for (double v : values) if (v != 0.0) return false;
    return true;
  }
  friend bool operator==(const PowerVector&, const PowerVector&) = default;
};

namespace detail {

inline int simple_majority_threshold(int n) {
  // a coalition must exceed ceil(n/2) members
  return (n + 1) / 2 + 1;
}

inline bool wins(const WeightedVotingGame& game, std::uint64_t mask, double weight) {
  const int n = game.players();
  switch (game.rule().kind) {
    case ValuationRule::Kind::Unanimity:
      return mask == ((n == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    case ValuationRule::Kind::SimpleMajority:
      return std::popcount(mask) >= simple_majority_threshold(n);
    case ValuationRule::Kind::QualifiedMajority:
      return weight > game.quota() + kQuotaEpsilon;
    case ValuationRule::Kind::QualifiedMajorityMinSize:
      return weight > game.quota() + kQuotaEpsilon && std::popcount(mask) >= game.rule().min_size;
  }
  return false;
}

}  // namespace detail

/// Coalition weight summed in ascending player order.
inline double coalition_weight(const WeightedVotingGame& game, Coalition c) {
  double sum = 0.0;
  for (int i = 0; i < game.players(); ++i) {
    if (c.contains(i)) sum += game.weights()[i];
  }
  return sum;
}

inline bool evaluate_coalition(const WeightedVotingGame& game, Coalition c) {
  if (game.players() < 64 && (c.bits >> game.players()) != 0) {
    throw Error(ErrorCode::InvalidArgument, "coalition contains players outside the game");
  }
  return detail::wins(game, c.bits, coalition_weight(game, c));
}

/// Exact swing counts by full enumeration; Theta(n 2^n).
inline RawBanzhafVector raw_banzhaf(const WeightedVotingGame& game, int player_cap = kDefaultPlayerCap) {
  const int n = game.players();
  if (n > player_cap || n > 30) {
    throw Error(ErrorCode::PlayerCountTooLarge,
                "n=" + std::to_string(n) + " exceeds cap " + std::to_string(player_cap));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  const auto& w = game.weights();

  // Adding the highest member last reproduces the ascending-order sum of coalition_weight().
  std::vector<double> weight(total, 0.0);
  std::vector<std::uint8_t> win(total, 0);
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    const int high = std::bit_width(mask) - 1;
    weight[mask] = weight[mask ^ (std::uint64_t{1} << high)] + w[high];
  }
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    win[mask] = detail::wins(game, mask, weight[mask]) ? 1 : 0;
  }

  RawBanzhafVector raw;
  raw.counts.assign(n, 0);
  raw.denominator = total >> 1;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (win[mask]) continue;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if ((mask & bit) == 0 && win[mask | bit]) ++raw.counts[i];
    }
  }
  return raw;
}

inline PowerVector normalize(const RawBanzhafVector& raw) {
  PowerVector p;
  p.values.assign(raw.counts.size(), 0.0);
  const std::uint64_t sum = raw.total();
  if (sum == 0) return p;
  for (std::size_t i = 0; i < raw.counts.size(); ++i) {
    p.values[i] = static_cast<double>(raw.counts[i]) / static_cast<double>(sum);
  }
  return p;
}

inline PowerVector normalized_banzhaf(const WeightedVotingGame& game, int player_cap = kDefaultPlayerCap) {
  return normalize(raw_banzhaf(game, player_cap));
}

/// Coalitions able to win under a minimum size m: 2^n - 1 when m = 1, otherwise the count of size >= m minus one.
inline std::uint64_t count_possible_winning_coalitions(int n, int min_size) {
  if (n < 1 || n > 62 || min_size < 1 || min_size > n) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= minSize <= n <= 62");
  }
  std::uint64_t sum = 0;
  std::uint64_t binom = 1;  // C(n, 0)
  for (int i = 0; i <= n; ++i) {
    if (i >= min_size) sum += binom;
    binom = binom * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
  }
  // Size one is the unrestricted rule.
  return min_size == 1 ? sum : sum - 1;
}

// ---------------------------------------------------------------------------
// Text forms

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::ParseError, "not a decimal number: '" + std::string(s) + "'");
  }
  return value;
}

inline long long parse_integer(std::string_view s) {
  s = trim(s);
  long long value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(s) + "'");
  }
  return value;
}

inline std::string format_real(double v, int digits = 17) {
  std::ostringstream out;
  out.precision(digits);
  out << v;
  return out.str();
}

}  // namespace detail

/// Comma-separated decimals, e.g. "0.35,0.3,0.2,0.15".
inline std::vector<double> parse_vector(std::string_view text) {
  std::vector<double> out;
  text = detail::trim(text);
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty vector");
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(detail::parse_real(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string format_vector(std::span<const double> values, int digits = 17) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += detail::format_real(values[i], digits);
  }
  return out;
}

/// Game literal `q; w1,...,wn [minSize=m]`. Without minSize the rule is qualified majority.
inline WeightedVotingGame parse_game(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw Error(ErrorCode::ParseError, "game literal needs 'q; w1,...'");
  const double quota = detail::parse_real(text.substr(0, semi));
  std::string_view rest = detail::trim(text.substr(semi + 1));

  ValuationRule rule = ValuationRule::qualified_majority();
  const auto key = rest.find("minSize=");
  if (key != std::string_view::npos) {
    rule = ValuationRule::qualified_majority_min_size(
        static_cast<int>(detail::parse_integer(rest.substr(key + 8))));
    rest = detail::trim(rest.substr(0, key));
  }
  return WeightedVotingGame(quota, parse_vector(rest), rule);
}

inline std::string format_game(const WeightedVotingGame& game) {
  std::string out = detail::format_real(game.quota()) + "; " + format_vector(game.weights());
  if (game.rule().kind == ValuationRule::Kind::QualifiedMajorityMinSize) {
    out += " minSize=" + std::to_string(game.rule().min_size);
  }
  return out;
}

}  // namespace banzhaf

#endif  // BANZHAF_GAME_HPP
