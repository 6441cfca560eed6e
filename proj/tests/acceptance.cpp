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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <banzhaf/banzhaf.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace banzhaf;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 42;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail.clear();
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double v) { return detail::format_real(v, 6); }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.ok = false;
    v.detail = std::string("exception: ") + e.what();
  }
  if (!v.ok) ++failures;
  std::printf("criterion %d: %s (%.2fs) %s\n", id, v.ok ? "PASS" : "FAIL", seconds_since(start), v.detail.c_str());
  std::fflush(stdout);
}

const ReportRow& row_of(const AggregateReport& r, double q, std::string_view omega0, std::string_view variant,
                        int iterations) {
  const ReportRow* row = r.find(q, omega0, variant, iterations);
  if (!row) throw std::runtime_error("missing row " + std::string(omega0) + "/" + std::string(variant));
  return *row;
}

// 1. Three-player oracle is exactly the four attainable vectors.
Verdict oracle_three() {
  Verdict v;
  const auto start = Clock::now();
  const auto atlas = build_exact_oracle(3, 8);
  const double took = seconds_since(start);
  const std::vector<std::vector<double>> expected{
      {1, 0, 0}, {0.5, 0.5, 0}, {0.6, 0.2, 0.2}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  v.require(atlas.size() == expected.size(), "size " + std::to_string(atlas.size()));
  for (const auto& e : expected) {
    bool found = false;
    for (std::size_t i = 0; i < atlas.size(); ++i) {
      if (d1_distance(atlas.at(i), e) <= 1e-9) found = true;
    }
    v.require(found, "missing " + format_vector(e, 6));
  }
  v.require(took < 1.0, "took " + fmt(took) + "s");
  if (v.ok) v.detail = "4 vectors in " + fmt(took) + "s";
  return v;
}

// 2. Region spot checks at q = 0.5 as exact rationals of swing counts.
Verdict regions() {
  Verdict v;
  struct Case {
    Weights w;
    std::vector<std::uint64_t> num;
    std::uint64_t den;
  };
  const std::vector<Case> cases{{{0.6, 0.3, 0.1}, {1, 0, 0}, 1},
                                {{0.5, 0.3, 0.2}, {3, 1, 1}, 5},
                                {{0.4, 0.35, 0.25}, {1, 1, 1}, 3},
                                {{0.5, 0.5, 0.0}, {1, 1, 0}, 2}};
  for (const auto& c : cases) {
    const auto raw = raw_banzhaf(WeightedVotingGame(0.5, c.w));
    const std::uint64_t total = raw.total();
    for (std::size_t i = 0; i < c.num.size(); ++i) {
      v.require(raw.counts[i] * c.den == c.num[i] * total, "beta(" + format_vector(c.w, 4) + ")");
    }
  }
  if (v.ok) v.detail = "4 games exact";
  return v;
}

// 3. Dictator start stops at once with distance one half.
Verdict dictator() {
  Verdict v;
  SolverConfig c;
  c.quota = 0.5;
  const auto r = run(TargetVector({0.75, 0.25}), c);
  v.require(r.stop_reason == StopReason::ZeroPowerStop, "stop " + std::string(to_string(r.stop_reason)));
  v.require(r.best_distance == 0.5, "bestDistance " + detail::format_real(r.best_distance));
  if (v.ok) v.detail = "ZeroPowerStop, bestDistance 0.5";
  return v;
}

ExperimentSpec zero_stop_spec() {
  ExperimentSpec s;
  s.n = 8;
  s.sample_count = 1000;
  s.master_seed = kSeed;
  s.quota_grid = {0.6};
  s.omega0_modes = {Omega0::target(), Omega0::centroid(), Omega0::offset()};
  s.iteration_grid.resize(100);
  std::iota(s.iteration_grid.begin(), s.iteration_grid.end(), 1);
  s.experiments = {ExperimentKind::ZeroStopCurve};
  return s;
}

// 4. Share of targets whose own weights already give a zero-power player.
Verdict zero_start(const AggregateReport& curve) {
  Verdict v;
  const double f = row_of(curve, 0.6, "target", "base", 1).zero_stop_frac;
  v.require(f >= 0.15 && f <= 0.25, "fraction " + fmt(f) + " outside [0.15, 0.25]");
  if (v.ok) v.detail = "fraction " + fmt(f);
  return v;
}

// 5. Cumulative zero stops after 100 iterations.
Verdict divergence(const AggregateReport& curve) {
  Verdict v;
  std::string seen;
  for (const char* mode : {"target", "centroid", "offset"}) {
    const double f = row_of(curve, 0.6, mode, "base", 100).zero_stop_frac;
    v.require(f >= 0.70, std::string(mode) + " " + fmt(f));
    seen += std::string(seen.empty() ? "" : ", ") + mode + " " + fmt(f);
  }
  if (v.ok) v.detail = seen;
  return v;
}

// 6. Start mode orderings.
Verdict start_modes() {
  Verdict v;
  ExperimentSpec s;
  s.n = 8;
  s.sample_count = 2000;
  s.master_seed = kSeed;
  s.quota_grid = {0.6};
  s.omega0_modes = {Omega0::target(), Omega0::centroid(), Omega0::offset()};
  s.experiments = {ExperimentKind::Omega0Comparison};
  const auto r = run_omega0_comparison(s);
  const auto& t = row_of(r, 0.6, "target", "base", 50);
  const auto& c = row_of(r, 0.6, "centroid", "base", 50);
  const auto& o = row_of(r, 0.6, "offset", "base", 50);
  v.require(t.mean_initial_dist < c.mean_initial_dist && c.mean_initial_dist < o.mean_initial_dist,
            "initial distance order");
  v.require(o.worst_err_upper < c.worst_err_upper && c.worst_err_upper < t.worst_err_upper, "worst final order");
  v.require(c.mean_err_upper < t.mean_err_upper && o.mean_err_upper < t.mean_err_upper, "error upper order");
  v.detail += (v.ok ? "" : " | ") + std::string("initial ") + fmt(t.mean_initial_dist) + "/" +
              fmt(c.mean_initial_dist) + "/" + fmt(o.mean_initial_dist) + ", worst " + fmt(t.worst_err_upper) +
              "/" + fmt(c.worst_err_upper) + "/" + fmt(o.worst_err_upper) + ", err " + fmt(t.mean_err_upper) + "/" +
              fmt(c.mean_err_upper) + "/" + fmt(o.mean_err_upper);
  return v;
}

// 7. Variant directions.
Verdict variants() {
  Verdict v;
  ExperimentSpec s;
  s.n = 8;
  s.sample_count = 1000;
  s.master_seed = kSeed;
  s.quota_grid = {0.6};
  s.omega0_modes = {Omega0::centroid()};
  s.variants = {VariantSpec::parse("base"), VariantSpec::parse("restart"), VariantSpec::parse("mincoalition:3"),
                VariantSpec::parse("scaling:0.4@0.5")};
  s.experiments = {ExperimentKind::VariantShowdown};
  const auto r = run_variant_showdown(s);
  const auto& base = row_of(r, 0.6, "centroid", "base", 50);
  const auto& restart = row_of(r, 0.6, "centroid", "restart", 50);
  const auto& scaling = row_of(r, 0.6, "centroid", s.variants[3].label(), 50);
  const double limit = 7.0 / 185.0;
  v.require(restart.pct_worse == 0.0, "restart worse " + fmt(restart.pct_worse) + "%");
  v.require(scaling.mean_err_upper <= base.mean_err_upper / 1.5, "scaling not 1.5x better");
  v.require(scaling.mean_err_upper < limit, "scaling error significant");
  v.detail += (v.ok ? "" : " | ") + std::string("base ") + fmt(base.mean_err_upper) + ", restart worse " +
              fmt(restart.pct_worse) + "%, scaling " + fmt(scaling.mean_err_upper);
  return v;
}

bool same_trace(const SolverRun& a, const SolverRun& b) {
  if (a.trace.size() != b.trace.size() || a.stop_reason != b.stop_reason) return false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    const auto &x = a.trace[i], &y = b.trace[i];
    if (x.weights_before != y.weights_before || x.power != y.power || x.distance != y.distance ||
        x.action != y.action) {
      return false;
    }
  }
  return a.best_weights == b.best_weights;
}

Weights random_weights(int n, SplitMix64& rng) {
  Weights w(n);
  for (auto& x : w) x = rng.uniform();
  return w;
}

// 8. Fuzzed properties, 500 cases each.
Verdict properties() {
  Verdict v;
  constexpr int kCases = 500;
  SplitMix64 rng(kSeed);

  int bad = 0;
  for (int k = 0; k < kCases; ++k) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const auto t = sample_ordered_simplex(n, rng);
    SolverConfig c;
    c.quota = 0.05 + 0.9 * rng.uniform();
    c.omega0 = k % 2 ? Omega0::centroid() : Omega0::target();
    const auto base = run(t, c);
    c.variant = Variant::scaled(0.0);
    const auto scaled = run(t, c);
    c.variant = Variant::min_coalition(1);
    const auto minc = run(t, c);
    if (!same_trace(base, scaled) || !same_trace(base, minc)) ++bad;
  }
  v.require(bad == 0, "neutral variants differ in " + std::to_string(bad));

  bad = 0;
  for (int k = 0; k < kCases; ++k) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const Weights w = random_weights(n, rng);
    const double q = std::accumulate(w.begin(), w.end(), 0.0) * rng.uniform();
    const double lambda = std::ldexp(1.0, static_cast<int>(rng() % 9) - 4);
    Weights scaled_w = w;
    for (auto& x : scaled_w) x *= lambda;
    if (normalized_banzhaf(WeightedVotingGame(q, w)) != normalized_banzhaf(WeightedVotingGame(lambda * q, scaled_w))) {
      ++bad;
    }
  }
  v.require(bad == 0, "scale invariance broken in " + std::to_string(bad));

  bad = 0;
  for (int k = 0; k < kCases; ++k) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const Weights w = random_weights(n, rng);
    const double q = std::accumulate(w.begin(), w.end(), 0.0) * rng.uniform();
    const auto rule = k % 2 ? ValuationRule::qualified_majority()
                            : ValuationRule::qualified_majority_min_size(1 + static_cast<int>(rng() % n));
    const auto p = normalized_banzhaf(WeightedVotingGame(q, w, rule));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (w[i] >= w[j] && p[i] < p[j]) ++bad;
      }
    }
  }
  v.require(bad == 0, "monotonicity broken in " + std::to_string(bad));

  bad = 0;
  for (int k = 0; k < kCases; ++k) {
    const int n = 1 + static_cast<int>(rng() % 10);
    std::vector<double> a(n), b(n), c(n);
    for (int i = 0; i < n; ++i) {
      a[i] = rng.uniform() - 0.5;
      b[i] = rng.uniform() - 0.5;
      c[i] = rng.uniform() - 0.5;
    }
    const double ab = d1_distance(a, b), ba = d1_distance(b, a);
    if (d1_distance(a, a) != 0.0 || ab < 0.0 || ab != ba || (a != b && ab == 0.0) ||
        d1_distance(a, c) > ab + d1_distance(b, c) + 1e-12) {
      ++bad;
    }
  }
  v.require(bad == 0, "d1 axioms broken in " + std::to_string(bad));

  bad = 0;
  for (int k = 0; k < kCases; ++k) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const auto t = sample_ordered_simplex(n, rng);
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!(t[i] > 0.0) || (i > 0 && t[i] > t[i - 1])) ++bad;
      sum += t[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) ++bad;
  }
  v.require(bad == 0, "sampler left the ordered simplex " + std::to_string(bad) + " times");

  bad = 0;
  for (int k = 0; k < kCases; ++k) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const auto t = sample_ordered_simplex(n, rng);
    SolverConfig c;
    c.quota = 0.05 + 0.9 * rng.uniform();
    c.omega0 = Omega0::explicit_start(centroid_regular(n).values());
    c.max_iterations = 2;
    const auto r = run(t, c);
    if (r.trace.size() < 2) continue;
    for (int i = 0; i < n; ++i) {
      if (std::abs(r.trace[1].weights_before[i] - t[i]) > 4 * std::numeric_limits<double>::epsilon() * t[i]) ++bad;
    }
  }
  v.require(bad == 0, "centre start missed the target " + std::to_string(bad) + " times");

  bad = 0;
  const auto four = build_exact_oracle(4, 16);
  for (int k = 0; k < kCases; ++k) {
    const auto t = sample_ordered_simplex(4, rng);
    SolverConfig c;
    c.quota = 0.05 + 0.9 * rng.uniform();
    const auto b = error_bounds(t, run(t, c).best_power, four);
    if (!(b.lower >= 0.0 && b.lower <= b.upper)) ++bad;
  }
  v.require(bad == 0, "bounds out of order " + std::to_string(bad));

  bad = 0;
  for (int k = 0; k < kCases; ++k) {
    ExperimentSpec s;
    s.n = 2 + static_cast<int>(rng() % 5);
    s.sample_count = 10;
    s.master_seed = rng();
    s.quota_grid = {0.05 + 0.9 * rng.uniform()};
    s.omega0_modes = {Omega0::target(), Omega0::offset()};
    s.iteration_grid = {1, 2, 3, 5, 8, 13, 21};
    s.experiments = {ExperimentKind::ZeroStopCurve};
    const auto r = run_zero_stop_curve(s, 1);
    for (const char* mode : {"target", "offset"}) {
      const auto series = zero_stop_series(r, s.quota_grid[0], mode);
      if (series.size() != s.iteration_grid.size()) ++bad;
      for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i] < series[i - 1]) ++bad;
      }
    }
  }
  v.require(bad == 0, "zero-stop curve decreased " + std::to_string(bad) + " times");

  if (v.ok) v.detail = "8 properties x " + std::to_string(kCases) + " cases";
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. Reruns give byte-identical CSV, whatever the thread count.
Verdict determinism() {
  Verdict v;
  ExperimentSpec s;
  s.n = 6;
  s.sample_count = 200;
  s.master_seed = kSeed;
  s.quota_grid = {0.5, 0.6};
  s.omega0_modes = {Omega0::target(), Omega0::centroid(), Omega0::offset()};
  s.variants = {VariantSpec::parse("base"), VariantSpec::parse("restart"), VariantSpec::parse("scaling:0.4@0.5")};
  s.iteration_grid = {1, 10, 50};
  s.experiments = {ExperimentKind::QSweep, ExperimentKind::Omega0Comparison, ExperimentKind::ZeroStopCurve,
                   ExperimentKind::VariantShowdown};
  const auto root = std::filesystem::temp_directory_path() / "banzhaf_acceptance";
  std::filesystem::remove_all(root);
  int files = 0;
  for (auto kind : s.experiments) {
    std::vector<std::string> outputs;
    for (unsigned threads : {1U, 4U, 1U}) {
      const auto dir = root / std::to_string(outputs.size());
      std::filesystem::create_directories(dir);
      const auto r = run_experiment(kind, s, threads);
      emit_report(r, dir / "report.csv");
      emit_detail(r, dir / "detail.csv");
      emit_points(r, dir / "points.csv");
      outputs.push_back(slurp(dir / "report.csv") + slurp(dir / "detail.csv") + slurp(dir / "points.csv"));
    }
    for (const auto& o : outputs) {
      v.require(o == outputs.front(), std::string(to_string(kind)) + " differs");
    }
    files += 3;
  }
  std::filesystem::remove_all(root);
  if (v.ok) v.detail = std::to_string(files) + " CSV files identical over 3 runs";
  return v;
}

}  // namespace

int main() {
  report(1, oracle_three);
  report(2, regions);
  report(3, dictator);

  AggregateReport curve;
  std::string curve_error;
  try {
    curve = run_zero_stop_curve(zero_stop_spec());
  } catch (const std::exception& e) {
    curve_error = e.what();
  }
  auto with_curve = [&](auto check) {
    return [&, check] {
      if (!curve_error.empty()) throw std::runtime_error(curve_error);
      return check(curve);
    };
  };
  report(4, with_curve(zero_start));
  report(5, with_curve(divergence));
  report(6, start_modes);
  report(7, variants);
  report(8, properties);
  report(9, determinism);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
