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
 * \file banzhaf/simplex.hpp
 *
 * \brief Points of the ordered regular simplex and the d1 metric on them.
 */

#ifndef BANZHAF_SIMPLEX_HPP
#define BANZHAF_SIMPLEX_HPP

#include <banzhaf/error.hpp>
#include <banzhaf/rng.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace banzhaf {

inline constexpr double kSimplexSumTolerance = 1e-9;

/// A non-negative, non-increasing vector summing to one.
class TargetVector {
 public:
  TargetVector() = default;

  explicit TargetVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::InvalidTarget, "target must have at least one entry");
    double sum = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= 0.0)) throw Error(ErrorCode::InvalidTarget, "target entries must be non-negative");
      if (i > 0 && values_[i] > values_[i - 1]) {
        throw Error(ErrorCode::InvalidTarget, "target entries must be non-increasing");
      }
      sum += values_[i];
    }
    if (std::abs(sum - 1.0) > kSimplexSumTolerance) {
      throw Error(ErrorCode::InvalidTarget, "target must sum to 1 (got " + std::to_string(sum) + ")");
    }
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  bool strictly_positive() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
  }

  friend bool operator==(const TargetVector&, const TargetVector&) = default;

 private:
  std::vector<double> values_;
};

/// Uniform draw from the ordered simplex: normalized -log(U) values, sorted descending.
inline TargetVector sample_ordered_simplex(int n, SplitMix64& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  std::vector<double> values(n);
  double sum = 0.0;
  for (auto& v : values) {
    double u = rng.uniform();
    while (u == 0.0) u = rng.uniform();
    v = -std::log(u);
    sum += v;
  }
  for (auto& v : values) v /= sum;
  std::stable_sort(values.begin(), values.end(), std::greater<>());
  return TargetVector(std::move(values));
}

/// Average of the ordered-simplex vertices [1/k,...,1/k,0,...,0], k = 1..n.
inline TargetVector centroid_ordered(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  std::vector<double> values(n, 0.0);
  // entry j collects 1/k from every vertex with k > j
  double tail = 0.0;
  for (int k = n; k >= 1; --k) {
    tail += 1.0 / k;
    values[k - 1] = tail / n;
  }
  return TargetVector(std::move(values));
}

inline TargetVector centroid_regular(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  return TargetVector(std::vector<double>(n, 1.0 / n));
}

/// Midpoint of t and the regular centroid.
inline TargetVector offset_target(const TargetVector& t) {
  const double c = 1.0 / static_cast<double>(t.size());
  std::vector<double> values(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) values[i] = (t[i] + c) / 2.0;
  return TargetVector(std::move(values));
}

inline double d1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "d1 of lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

/// Largest d1 between two points of the ordered n-simplex.
inline double max_d1_ordered(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  return 2.0 - 2.0 / n;
}

struct SignificanceThresholds {
  double improvement = 0.05;
  double error_upper = 7.0 / 185.0;
  double error_change = 0.0;

  static SignificanceThresholds for_players(int n) {
    SignificanceThresholds s;
    s.error_change = 0.01 * max_d1_ordered(n);
    return s;
  }
};

}  // namespace banzhaf

#endif  // BANZHAF_SIMPLEX_HPP
