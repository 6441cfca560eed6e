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
 * \file banzhaf/atlas.hpp
 *
 * \brief Databases of attainable Banzhaf vectors and the error metrics
 *        derived from them.
 *
 * An atlas stores each vector once, in canonical non-increasing order.
 * Two sources exist: an exact enumeration of integer-weight games for
 * n <= 5, and the solver-driven sampling protocol that keeps inserting every
 * per-iteration power vector until a window of consecutive samples adds
 * nothing new.
 */

#ifndef BANZHAF_ATLAS_HPP
#define BANZHAF_ATLAS_HPP

#include <banzhaf/error.hpp>
#include <banzhaf/game.hpp>
#include <banzhaf/rng.hpp>
#include <banzhaf/simplex.hpp>
#include <banzhaf/solver.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

namespace banzhaf {

inline constexpr int kOracleMaxPlayers = 5;
inline constexpr std::uint64_t kAtlasSampleCap = 10'000'000;

struct AtlasProvenance {
  enum class Kind { ExactOracle, SampledRuns, Imported };
  Kind kind = Kind::Imported;
  long long parameter = 0;  // maxWeight or stability window

  std::string to_string() const {
    switch (kind) {
      case Kind::ExactOracle: return "exact_oracle:max_weight=" + std::to_string(parameter);
      case Kind::SampledRuns: return "sampled_runs:stability=" + std::to_string(parameter);
      case Kind::Imported: return "imported";
    }
    return "imported";
  }

  static AtlasProvenance parse(std::string_view s) {
    if (s.starts_with("exact_oracle:max_weight=")) {
      return {Kind::ExactOracle, detail::parse_integer(s.substr(24))};
    }
    if (s.starts_with("sampled_runs:stability=")) {
      return {Kind::SampledRuns, detail::parse_integer(s.substr(23))};
    }
    return {Kind::Imported, 0};
  }
};

struct NearestResult {
  std::vector<double> vector;
  double distance = 0.0;
};

class BanzhafAtlas {
 public:
  /// Coordinates are quantized on this grid for deduplication.
  static constexpr double kDedupScale = 1e10;

  explicit BanzhafAtlas(int n, AtlasProvenance provenance = {}) : n_(n), provenance_(provenance) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "atlas needs n >= 1");
  }

  int players() const { return n_; }
  std::size_t size() const { return data_.size() / static_cast<std::size_t>(n_); }
  bool empty() const { return data_.empty(); }
  const AtlasProvenance& provenance() const { return provenance_; }
  void set_provenance(AtlasProvenance p) { provenance_ = p; }

  std::span<const double> at(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * n_, n_);
  }

  /// Inserts the canonical (sorted) form; false if already present or degenerate.
  bool insert(std::span<const double> values) {
    if (static_cast<int>(values.size()) != n_) throw Error(ErrorCode::LengthMismatch, "atlas vector length");
    std::vector<double> v(values.begin(), values.end());
    std::stable_sort(v.begin(), v.end(), std::greater<>());
    double sum = 0.0;
    for (double x : v) sum += x;
    if (std::abs(sum - 1.0) > kSimplexSumTolerance || v.back() < 0.0) return false;

    if (!keys_.insert(key_of(v)).second) return false;
    data_.insert(data_.end(), v.begin(), v.end());
    index_.clear();
    return true;
  }
  bool insert(const PowerVector& p) { return insert(std::span<const double>(p.values)); }

  bool contains(std::span<const double> values) const {
    std::vector<double> v(values.begin(), values.end());
    std::stable_sort(v.begin(), v.end(), std::greater<>());
    return keys_.count(key_of(v)) > 0;
  }

  /// Vectors in lexicographically descending order.
  std::vector<std::vector<double>> sorted_vectors() const {
    std::vector<std::vector<double>> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.emplace_back(at(i).begin(), at(i).end());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }

  /// Builds the query index. Must run before concurrent nearest() calls.
  void freeze() {
    index_.resize(size());
    std::iota(index_.begin(), index_.end(), std::size_t{0});
    std::sort(index_.begin(), index_.end(), [this](std::size_t a, std::size_t b) { return data_[a * n_] < data_[b * n_]; });
  }
  bool frozen() const { return index_.size() == size() && !empty(); }

  /**
   * Closest stored vector to `t` under d1. Ties go to the lexicographically
   * largest vector. A frozen atlas is scanned outward from t[0] along the
   * first coordinate, which bounds d1 from below; otherwise every vector is
   * visited.
   */
  NearestResult nearest(std::span<const double> t) const {
    if (empty()) throw Error(ErrorCode::EmptyAtlas, "nearest() on an empty atlas");
    if (static_cast<int>(t.size()) != n_) throw Error(ErrorCode::LengthMismatch, "query length differs from atlas n");

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    auto consider = [&](std::size_t i) {
      const double* v = &data_[i * n_];
      double d = 0.0;
      for (int k = 0; k < n_; ++k) {
        d += std::abs(v[k] - t[k]);
        if (d > best) return;
      }
      if (d < best || (d == best && lex_greater(i, best_i))) {
        best = d;
        best_i = i;
      }
    };

    if (!frozen()) {
      for (std::size_t i = 0; i < size(); ++i) consider(i);
    } else {
      const double t0 = t[0];
      auto mid = std::lower_bound(index_.begin(), index_.end(), t0,
                                  [this](std::size_t i, double x) { return data_[i * n_] < x; });
      auto up = mid;
      auto down = mid;
      while (up != index_.end() || down != index_.begin()) {
        if (up != index_.end()) {
          if (data_[*up * n_] - t0 > best) {
            up = index_.end();
          } else {
            consider(*up++);
          }
        }
        if (down != index_.begin()) {
          if (t0 - data_[*(down - 1) * n_] > best) {
            down = index_.begin();
          } else {
            consider(*--down);
          }
        }
      }
    }
    auto v = at(best_i);
    return {std::vector<double>(v.begin(), v.end()), best};
  }
  NearestResult nearest(const TargetVector& t) const { return nearest(std::span<const double>(t.values())); }

  /// Every vector of `other` is inserted; returns the number added.
  std::size_t merge(const BanzhafAtlas& other) {
    if (other.n_ != n_) throw Error(ErrorCode::LengthMismatch, "merging atlases of different n");
    std::size_t added = 0;
    for (std::size_t i = 0; i < other.size(); ++i) added += insert(other.at(i)) ? 1 : 0;
    return added;
  }

  // Text persistence: header `n=<n>,provenance=<...>` then one vector per
  // line, 17 significant digits, lexicographically descending.
  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    write(out);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
  }

  void write(std::ostream& out) const {
    out << "n=" << n_ << ",provenance=" << provenance_.to_string() << '\n';
    for (const auto& v : sorted_vectors()) out << format_vector(v, 17) << '\n';
  }

  static BanzhafAtlas load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    return read(in);
  }

  static BanzhafAtlas read(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || !line.starts_with("n=")) {
      throw Error(ErrorCode::ParseError, "atlas header must start with n=<n>");
    }
    const auto comma = line.find(',');
    const int n = static_cast<int>(detail::parse_integer(std::string_view(line).substr(2, comma - 2)));
    AtlasProvenance prov;
    if (comma != std::string::npos) {
      std::string_view rest = std::string_view(line).substr(comma + 1);
      if (rest.starts_with("provenance=")) prov = AtlasProvenance::parse(rest.substr(11));
    }
    BanzhafAtlas atlas(n, prov);
    while (std::getline(in, line)) {
      if (detail::trim(line).empty()) continue;
      atlas.insert(parse_vector(line));
    }
    return atlas;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<long long>& k) const noexcept {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (long long x : k) h = SplitMix64::mix(h ^ static_cast<std::uint64_t>(x));
      return static_cast<std::size_t>(h);
    }
  };

  static std::vector<long long> key_of(const std::vector<double>& v) {
    std::vector<long long> k(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) k[i] = std::llround(v[i] * kDedupScale);
    return k;
  }

  bool lex_greater(std::size_t a, std::size_t b) const {
    return std::lexicographical_compare(&data_[b * n_], &data_[b * n_] + n_, &data_[a * n_], &data_[a * n_] + n_);
  }

  int n_;
  AtlasProvenance provenance_;
  std::vector<double> data_;
  std::unordered_set<std::vector<long long>, KeyHash> keys_;
  std::vector<std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Builders

/**
 * Every game with integer weights maxWeight >= w_1 >= ... >= w_n >= 0 and an
 * integer quota in [0, sum(w) - 1], deduplicated by its set of winning
 * coalitions. Only distinct coalition sums need visiting: the quota s - 1
 * makes exactly the coalitions of weight >= s winning.
 */
inline BanzhafAtlas build_exact_oracle(int n, int max_weight) {
  if (n > kOracleMaxPlayers) {
    throw Error(ErrorCode::OracleTooLarge, "exact oracle supports n <= " + std::to_string(kOracleMaxPlayers));
  }
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "oracle needs n >= 1");
  if (max_weight < n) throw Error(ErrorCode::InvalidArgument, "oracle needs maxWeight >= n");

  BanzhafAtlas atlas(n, {AtlasProvenance::Kind::ExactOracle, max_weight});
  const std::uint32_t masks = std::uint32_t{1} << n;
  std::unordered_set<std::uint32_t> seen_games;
  std::vector<int> w(n, 0);
  std::vector<int> sums(masks, 0);

  std::function<void(int, int)> recurse = [&](int pos, int cap) {
    if (pos == n) {
      for (std::uint32_t m = 1; m < masks; ++m) {
        const int high = std::bit_width(m) - 1;
        sums[m] = sums[m ^ (std::uint32_t{1} << high)] + w[high];
      }
      std::vector<int> thresholds(sums.begin(), sums.end());
      std::sort(thresholds.begin(), thresholds.end());
      thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
      for (int s : thresholds) {
        if (s <= 0) continue;
        std::uint32_t winning = 0;  // n <= 5, so 32 coalitions fit
        for (std::uint32_t m = 0; m < masks; ++m) {
          if (sums[m] >= s) winning |= std::uint32_t{1} << m;
        }
        if (!seen_games.insert(winning).second) continue;
        Weights weights(w.begin(), w.end());
        atlas.insert(normalized_banzhaf(WeightedVotingGame(static_cast<double>(s - 1), weights)));
      }
      return;
    }
    for (int x = 0; x <= cap; ++x) {
      w[pos] = x;
      recurse(pos + 1, x);
    }
  };
  recurse(0, max_weight);
  atlas.freeze();
  return atlas;
}

struct SampledAtlasResult {
  BanzhafAtlas atlas;
  std::uint64_t samples = 0;
};

/**
 * Runs the solver on sample after sample (sub-stream i of `seed` for sample
 * i), inserting every per-iteration power vector, until `stability_window`
 * consecutive samples add nothing. Samples are solved in parallel batches but
 * merged in index order, so the result does not depend on `threads`.
 */
inline SampledAtlasResult build_sampled_atlas(int n, const SolverConfig& config, std::uint64_t seed,
                                              int stability_window = 250, unsigned threads = 0,
                                              std::uint64_t sample_cap = kAtlasSampleCap) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "atlas needs n >= 1");
  if (stability_window < 1) throw Error(ErrorCode::InvalidArgument, "stability window must be >= 1");
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());

  SampledAtlasResult result{BanzhafAtlas(n, {AtlasProvenance::Kind::SampledRuns, stability_window}), 0};
  const std::size_t batch = std::max<std::size_t>(64, 8 * threads);
  std::vector<std::vector<PowerVector>> found(batch);
  int quiet = 0;

  for (std::uint64_t first = 0; first < sample_cap; first += batch) {
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(batch, sample_cap - first));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k = next++; k < count; k = next++) {
        auto rng = substream(seed, first + k);
        const SolverRun r = run(sample_ordered_simplex(n, rng), config);
        found[k].clear();
        for (const auto& rec : r.trace) found[k].push_back(rec.power);
      }
    };
    {
      std::vector<std::jthread> pool;
      for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
      worker();
    }
    for (std::size_t k = 0; k < count; ++k) {
      bool added = false;
      for (const auto& p : found[k]) added = result.atlas.insert(p) || added;
      ++result.samples;
      quiet = added ? 0 : quiet + 1;
      if (quiet >= stability_window) {
        result.atlas.freeze();
        return result;
      }
    }
  }
  result.atlas.freeze();
  return result;
}

// ---------------------------------------------------------------------------
// Metrics

struct ErrorBounds {
  double upper = 0.0;
  double lower = 0.0;
  std::vector<double> best_known;
};

inline ErrorBounds error_bounds(const TargetVector& t, const PowerVector& alg_output, const BanzhafAtlas& atlas) {
  ErrorBounds b;
  b.upper = d1_distance(t.values(), alg_output.values);
  NearestResult near = atlas.nearest(t);
  b.lower = std::max(0.0, b.upper - near.distance);
  b.best_known = std::move(near.vector);
  return b;
}

/// (dBaseline - dCandidate) / dBaseline; negative when the candidate is worse.
inline double relative_improvement(double d_baseline, double d_candidate) {
  if (d_baseline == 0.0) throw Error(ErrorCode::BaselineZero, "baseline distance is zero");
  if (!(d_baseline > 0.0)) throw Error(ErrorCode::InvalidArgument, "baseline distance must be positive");
  return (d_baseline - d_candidate) / d_baseline;
}

}  // namespace banzhaf

#endif  // BANZHAF_ATLAS_HPP
