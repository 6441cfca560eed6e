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

#include <banzhaf/game.hpp>
#include <banzhaf/rng.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace banzhaf {
namespace {

using Set = std::set<int>;

// Brute force over explicit player sets, 0-based.
std::vector<Set> all_subsets(int n) {
  std::vector<Set> out{Set{}};
  for (int p = 0; p < n; ++p) {
    const std::size_t size = out.size();
    for (std::size_t k = 0; k < size; ++k) {
      Set s = out[k];
      s.insert(p);
      out.push_back(s);
    }
  }
  return out;
}

bool set_wins(const std::vector<double>& w, double q, const ValuationRule& rule, const Set& c) {
  const int n = static_cast<int>(w.size());
  const int size = static_cast<int>(c.size());
  double weight = 0.0;
  for (int p : c) weight += w[p];
  switch (rule.kind) {
    case ValuationRule::Kind::Unanimity: return size == n;
    case ValuationRule::Kind::SimpleMajority: return size > std::ceil(n / 2.0);
    case ValuationRule::Kind::QualifiedMajority: return weight > q + 1e-12;
    case ValuationRule::Kind::QualifiedMajorityMinSize: return weight > q + 1e-12 && size >= rule.min_size;
  }
  return false;
}

std::vector<long long> set_counts(const std::vector<double>& w, double q, const ValuationRule& rule) {
  const int n = static_cast<int>(w.size());
  std::vector<long long> counts(n, 0);
  for (const Set& c : all_subsets(n)) {
    for (int i = 0; i < n; ++i) {
      if (c.count(i)) continue;
      Set with = c;
      with.insert(i);
      if (!set_wins(w, q, rule, c) && set_wins(w, q, rule, with)) ++counts[i];
    }
  }
  return counts;
}

std::vector<long long> counts_of(const RawBanzhafVector& raw) {
  return std::vector<long long>(raw.counts.begin(), raw.counts.end());
}

TEST(Coalition, StrictQuotaAtBoundary) {
  const WeightedVotingGame g(0.5, {0.5, 0.3, 0.2});
  EXPECT_FALSE(evaluate_coalition(g, Coalition::of({1, 2})));
  EXPECT_TRUE(evaluate_coalition(g, Coalition::of({0, 1})));
}

TEST(Coalition, HeavyPlayerWinsAlone) {
  EXPECT_TRUE(evaluate_coalition(WeightedVotingGame(0.5, {0.6, 0.3, 0.1}), Coalition::of({0})));
}

TEST(Coalition, MinimumSizeBlocksSingleton) {
  const WeightedVotingGame g(0.5, {1, 0, 0}, ValuationRule::qualified_majority_min_size(2));
  EXPECT_FALSE(evaluate_coalition(g, Coalition::of({0})));
  EXPECT_TRUE(evaluate_coalition(g, Coalition::of({0, 2})));
}

TEST(Coalition, SimpleMajorityNeedsNineOfFifteen) {
  const WeightedVotingGame g(0.0, Weights(15, 1.0), ValuationRule::simple_majority());
  EXPECT_FALSE(evaluate_coalition(g, Coalition::of({0, 1, 2, 3, 4, 5, 6, 7})));
  EXPECT_TRUE(evaluate_coalition(g, Coalition::of({0, 1, 2, 3, 4, 5, 6, 7, 8})));
  EXPECT_EQ(detail::simple_majority_threshold(15), 9);
}

TEST(Coalition, RejectsPlayersOutsideGame) {
  EXPECT_THROW(evaluate_coalition(WeightedVotingGame(0.5, {1, 1}), Coalition::of({2})), Error);
}

TEST(RawBanzhaf, ThreePlayerExample) {
  const auto raw = raw_banzhaf(WeightedVotingGame(0.5, {0.5, 0.3, 0.2}));
  EXPECT_EQ(counts_of(raw), (std::vector<long long>{3, 1, 1}));
  EXPECT_EQ(raw.denominator, 4U);
}

TEST(RawBanzhaf, Dictator) {
  EXPECT_EQ(counts_of(raw_banzhaf(WeightedVotingGame(0.5, {0.6, 0.3, 0.1}))), (std::vector<long long>{4, 0, 0}));
}

TEST(RawBanzhaf, UnanimityIsAllOnes) {
  for (int n = 1; n <= 6; ++n) {
    const auto raw = raw_banzhaf(WeightedVotingGame(0.3, Weights(n, 0.7), ValuationRule::unanimity()));
    EXPECT_EQ(counts_of(raw), std::vector<long long>(n, 1));
  }
}

TEST(RawBanzhaf, PlayerCap) {
  EXPECT_THROW(raw_banzhaf(WeightedVotingGame(0.5, Weights(25, 0.04))), Error);
  try {
    raw_banzhaf(WeightedVotingGame(0.5, Weights(5, 0.2)), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PlayerCountTooLarge);
  }
}

TEST(RawBanzhaf, MatchesExplicitSetEnumeration) {
  SplitMix64 rng(7);
  const std::vector<ValuationRule> rules{ValuationRule::qualified_majority(), ValuationRule::unanimity(),
                                         ValuationRule::simple_majority()};
  int cases = 0;
  for (int round = 0; round < 200; ++round) {
    for (int n = 1; n <= 4; ++n) {
      Weights w(n);
      for (auto& x : w) x = std::floor(rng.uniform() * 6.0) / 4.0;
      const double q = std::floor(rng.uniform() * 10.0) / 4.0;
      std::vector<ValuationRule> rs = rules;
      rs.push_back(ValuationRule::qualified_majority_min_size(1 + static_cast<int>(rng() % n)));
      for (const auto& rule : rs) {
        const auto raw = raw_banzhaf(WeightedVotingGame(q, w, rule));
        ASSERT_EQ(counts_of(raw), set_counts(w, q, rule)) << format_game(WeightedVotingGame(q, w, rule));
        ASSERT_EQ(raw.denominator, std::uint64_t{1} << (n - 1));
        ++cases;
      }
    }
  }
  EXPECT_GE(cases, 500);
}

TEST(Normalized, ThreePlayerRegions) {
  const auto a = normalized_banzhaf(WeightedVotingGame(0.5, {0.5, 0.3, 0.2})).values;
  EXPECT_DOUBLE_EQ(a[0], 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(a[1], 1.0 / 5.0);
  EXPECT_DOUBLE_EQ(a[2], 1.0 / 5.0);
  for (double x : normalized_banzhaf(WeightedVotingGame(0.5, {1.0 / 3, 1.0 / 3, 1.0 / 3})).values) {
    EXPECT_DOUBLE_EQ(x, 1.0 / 3.0);
  }
  EXPECT_EQ(normalized_banzhaf(WeightedVotingGame(0.5, {0.5, 0.5, 0})).values, (std::vector<double>{0.5, 0.5, 0.0}));
}

TEST(Normalized, DegenerateGameIsAllZero) {
  const auto p = normalized_banzhaf(WeightedVotingGame(5.0, {0.5, 0.3, 0.2}));
  EXPECT_TRUE(p.is_degenerate());
  EXPECT_EQ(p.values, (std::vector<double>{0, 0, 0}));
}

TEST(Normalized, SumsToOne) {
  SplitMix64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const int n = 1 + static_cast<int>(rng() % 9);
    Weights w(n);
    for (auto& x : w) x = rng.uniform();
    const auto p = normalized_banzhaf(WeightedVotingGame(rng.uniform() * 0.9, w));
    if (p.is_degenerate()) continue;
    double s = 0.0;
    for (double x : p.values) s += x;
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
}

TEST(WinningCoalitions, Counts) {
  EXPECT_EQ(count_possible_winning_coalitions(3, 1), 7U);
  EXPECT_EQ(count_possible_winning_coalitions(3, 2), 3U);
  EXPECT_EQ(count_possible_winning_coalitions(8, 4), 70U + 56U + 28U + 8U + 1U - 1U);
  EXPECT_THROW(count_possible_winning_coalitions(3, 4), Error);
}

TEST(Properties, ScaleInvariance) {
  SplitMix64 rng(21);
  for (int k = 0; k < 500; ++k) {
    const int n = 1 + static_cast<int>(rng() % 8);
    Weights w(n);
    // Dyadic weights and scales keep products exact.
    for (auto& x : w) x = std::floor(rng.uniform() * 64.0) / 64.0;
    const double q = std::floor(rng.uniform() * 64.0) / 64.0;
    const double lambda = std::ldexp(1.0, static_cast<int>(rng() % 9) - 4);
    Weights scaled(w);
    for (auto& x : scaled) x *= lambda;
    EXPECT_EQ(normalized_banzhaf(WeightedVotingGame(q, w)).values,
              normalized_banzhaf(WeightedVotingGame(q * lambda, scaled)).values);
  }
}

TEST(Properties, WeightMonotonicity) {
  SplitMix64 rng(22);
  for (int k = 0; k < 500; ++k) {
    const int n = 2 + static_cast<int>(rng() % 7);
    Weights w(n);
    for (auto& x : w) x = rng.uniform();
    const double q = rng.uniform() * 0.8;
    const int m = 1 + static_cast<int>(rng() % n);
    for (const auto& rule : {ValuationRule::qualified_majority(), ValuationRule::qualified_majority_min_size(m)}) {
      const auto p = normalized_banzhaf(WeightedVotingGame(q, w, rule)).values;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (w[i] >= w[j]) {
            EXPECT_GE(p[i], p[j]);
          }
        }
      }
    }
  }
}

TEST(Properties, MinSizeOneEqualsQualifiedMajority) {
  SplitMix64 rng(23);
  for (int k = 0; k < 500; ++k) {
    const int n = 1 + static_cast<int>(rng() % 8);
    Weights w(n);
    for (auto& x : w) x = rng.uniform();
    const double q = rng.uniform();
    EXPECT_EQ(normalized_banzhaf(WeightedVotingGame(q, w)).values,
              normalized_banzhaf(WeightedVotingGame(q, w, ValuationRule::qualified_majority_min_size(1))).values);
  }
}

TEST(Properties, ConstantRulesIgnoreWeights) {
  SplitMix64 rng(24);
  for (int n = 1; n <= 8; ++n) {
    const auto u = normalized_banzhaf(WeightedVotingGame(0.5, Weights(n, 1.0), ValuationRule::unanimity())).values;
    const auto s = normalized_banzhaf(WeightedVotingGame(0.5, Weights(n, 1.0), ValuationRule::simple_majority())).values;
    for (int k = 0; k < 20; ++k) {
      Weights w(n);
      for (auto& x : w) x = rng.uniform();
      EXPECT_EQ(normalized_banzhaf(WeightedVotingGame(rng.uniform(), w, ValuationRule::unanimity())).values, u);
      EXPECT_EQ(normalized_banzhaf(WeightedVotingGame(rng.uniform(), w, ValuationRule::simple_majority())).values, s);
    }
  }
}

TEST(Properties, DictatorTakesAll) {
  SplitMix64 rng(25);
  for (int k = 0; k < 500; ++k) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int d = static_cast<int>(rng() % n);
    Weights w(n);
    double others = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == d) continue;
      w[i] = rng.uniform() * 0.1;
      others += w[i];
    }
    const double q = others + 0.01;
    w[d] = q + 0.01 + rng.uniform();
    const auto p = normalized_banzhaf(WeightedVotingGame(q, w)).values;
    for (int i = 0; i < n; ++i) EXPECT_EQ(p[i], i == d ? 1.0 : 0.0);
  }
}

TEST(Game, ValidatesInput) {
  EXPECT_THROW(WeightedVotingGame(0.5, {}), Error);
  EXPECT_THROW(WeightedVotingGame(0.5, {0.5, -0.1}), Error);
  EXPECT_THROW(WeightedVotingGame(-0.1, {0.5}), Error);
  EXPECT_THROW(WeightedVotingGame(0.5, {0.5, 0.5}, ValuationRule::qualified_majority_min_size(3)), Error);
}

TEST(Literal, RoundTrip) {
  const auto g = parse_game("0.5; 0.6,0.3,0.1");
  EXPECT_EQ(g.quota(), 0.5);
  EXPECT_EQ(g.weights(), (Weights{0.6, 0.3, 0.1}));
  EXPECT_EQ(g.rule().kind, ValuationRule::Kind::QualifiedMajority);

  const auto m = parse_game(" 0.25 ; 1, 2 ,3 minSize=2");
  EXPECT_EQ(m.rule().kind, ValuationRule::Kind::QualifiedMajorityMinSize);
  EXPECT_EQ(m.rule().min_size, 2);
  const auto again = parse_game(format_game(m));
  EXPECT_EQ(again.quota(), m.quota());
  EXPECT_EQ(again.weights(), m.weights());
  EXPECT_EQ(again.rule().min_size, 2);
}

TEST(Literal, Malformed) {
  EXPECT_THROW(parse_game("0.5 0.6,0.4"), Error);
  EXPECT_THROW(parse_game("0.5; 0.6,,0.4"), Error);
  EXPECT_THROW(parse_game("0.5; 0.6,abc"), Error);
  EXPECT_THROW(parse_game("0.5; 0.6 minSize=x"), Error);
}

}  // namespace
}  // namespace banzhaf
