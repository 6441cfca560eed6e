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
 * \file banzhaf/experiment.hpp
 *
 * \brief Batch experiments over seeded target samples.
 *
 * Every cell of an experiment (quota, start mode, variant, iteration budget)
 * is run on the same list of targets, so comparisons are per-sample. Sample i
 * is drawn from sub-stream i of the master seed, and results are folded in
 * sample order; the thread count never changes the output.
 *
 * A run with budget K contains the run with any budget k < K as a prefix, so
 * each (quota, start, variant) is solved once with the largest budget of the
 * iteration grid and the smaller budgets are read off its trace.
 */

#ifndef BANZHAF_EXPERIMENT_HPP
#define BANZHAF_EXPERIMENT_HPP

#include <banzhaf/atlas.hpp>
#include <banzhaf/error.hpp>
#include <banzhaf/game.hpp>
#include <banzhaf/rng.hpp>
#include <banzhaf/simplex.hpp>
#include <banzhaf/solver.hpp>

#include "json.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace banzhaf {

enum class ExperimentKind { QSweep, Omega0Comparison, ZeroStopCurve, VariantShowdown };

inline std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::QSweep: return "q_sweep";
    case ExperimentKind::Omega0Comparison: return "omega0_comparison";
    case ExperimentKind::ZeroStopCurve: return "zero_stop_curve";
    case ExperimentKind::VariantShowdown: return "variant_showdown";
  }
  return "?";
}

inline ExperimentKind parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::QSweep, ExperimentKind::Omega0Comparison, ExperimentKind::ZeroStopCurve,
                 ExperimentKind::VariantShowdown}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorCode::SpecValidation, "unknown experiment kind '" + std::string(s) + "'");
}

/// A variant, optionally pinned to its own quota (`scaling:0.4@0.5`).
struct VariantSpec {
  Variant variant;
  std::optional<double> quota;

  std::string label() const {
    std::string s = to_string(variant);
    if (quota) s += "@" + detail::format_real(*quota, 10);
    return s;
  }

  static VariantSpec parse(std::string_view text) {
    VariantSpec v;
    const auto at = text.find('@');
    v.variant = parse_variant(text.substr(0, at));
    if (at != std::string_view::npos) v.quota = detail::parse_real(text.substr(at + 1));
    return v;
  }
};

struct ExperimentSpec {
  int n = 8;
  int sample_count = 1000;
  std::uint64_t master_seed = 42;
  std::vector<double> quota_grid{0.5};
  std::vector<Omega0> omega0_modes{Omega0::target()};
  std::vector<VariantSpec> variants{VariantSpec{Variant::base(), std::nullopt}};
  std::vector<int> iteration_grid{50};
  std::optional<std::string> atlas_path;
  std::vector<ExperimentKind> experiments;
  double baseline_quota = 0.5;
  bool exclude_unimprovable = false;

  void validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::SpecValidation, m); };
    if (n < 1 || n > kDefaultPlayerCap) fail("n must lie in [1, " + std::to_string(kDefaultPlayerCap) + "]");
    if (sample_count < 1) fail("sample_count must be >= 1");
    if (quota_grid.empty() || omega0_modes.empty() || variants.empty() || iteration_grid.empty()) {
      fail("quota_grid, omega0_modes, variants and iteration_grid must be non-empty");
    }
    for (double q : quota_grid) {
      if (!(q > 0.0 && q < 1.0)) fail("quota_grid values must lie in (0, 1)");
    }
    for (int k : iteration_grid) {
      if (k < 1) fail("iteration_grid values must be >= 1");
    }
    for (const auto& o : omega0_modes) {
      if (o.mode == Omega0::Mode::Explicit && static_cast<int>(o.explicit_weights.size()) != n) {
        fail("explicit omega0 must have n weights");
      }
    }
    for (const auto& v : variants) {
      if (v.variant.kind == Variant::Kind::MinCoalition && (v.variant.min_size < 1 || v.variant.min_size > n)) {
        fail("mincoalition size must lie in [1, n]");
      }
      if (v.quota && !(*v.quota > 0.0 && *v.quota < 1.0)) fail("variant quota must lie in (0, 1)");
    }
    for (auto k : experiments) {
      if (k == ExperimentKind::QSweep &&
          std::find(quota_grid.begin(), quota_grid.end(), baseline_quota) == quota_grid.end()) {
        fail("q_sweep needs baseline_quota in quota_grid");
      }
      if (k == ExperimentKind::VariantShowdown &&
          std::none_of(variants.begin(), variants.end(),
                       [](const VariantSpec& v) { return v.variant.kind == Variant::Kind::Base; })) {
        fail("variant_showdown needs the base variant");
      }
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["sample_count"] = sample_count;
    j["master_seed"] = master_seed;
    j["quota_grid"] = quota_grid;
    auto& modes = j["omega0_modes"] = nlohmann::json::array();
    for (const auto& o : omega0_modes) modes.push_back(to_string(o));
    auto& vars = j["variants"] = nlohmann::json::array();
    for (const auto& v : variants) vars.push_back(v.label());
    j["iteration_grid"] = iteration_grid;
    j["atlas_path"] = atlas_path ? nlohmann::json(*atlas_path) : nlohmann::json(nullptr);
    auto& kinds = j["experiments"] = nlohmann::json::array();
    for (auto k : experiments) kinds.push_back(std::string(to_string(k)));
    j["baseline_quota"] = baseline_quota;
    j["exclude_unimprovable"] = exclude_unimprovable;
    return j;
  }

  static ExperimentSpec from_json(const nlohmann::json& j) {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::SpecValidation, m); };
    if (!j.is_object()) fail("spec must be a JSON object");
    static const std::vector<std::string> known{"n",          "sample_count",   "master_seed", "quota_grid",
                                                "omega0_modes", "variants",     "iteration_grid", "atlas_path",
                                                "experiments",  "baseline_quota", "exclude_unimprovable"};
    for (const auto& item : j.items()) {
      if (std::find(known.begin(), known.end(), item.key()) == known.end()) fail("unknown field '" + item.key() + "'");
    }
    ExperimentSpec s;
    try {
      if (j.contains("n")) s.n = j.at("n").get<int>();
      if (j.contains("sample_count")) s.sample_count = j.at("sample_count").get<int>();
      if (j.contains("master_seed")) s.master_seed = j.at("master_seed").get<std::uint64_t>();
      if (j.contains("quota_grid")) s.quota_grid = j.at("quota_grid").get<std::vector<double>>();
      if (j.contains("omega0_modes")) {
        s.omega0_modes.clear();
        for (const auto& m : j.at("omega0_modes")) s.omega0_modes.push_back(parse_omega0(m.get<std::string>()));
      }
      if (j.contains("variants")) {
        s.variants.clear();
        for (const auto& v : j.at("variants")) s.variants.push_back(VariantSpec::parse(v.get<std::string>()));
      }
      if (j.contains("iteration_grid")) s.iteration_grid = j.at("iteration_grid").get<std::vector<int>>();
      if (j.contains("atlas_path") && !j.at("atlas_path").is_null()) s.atlas_path = j.at("atlas_path").get<std::string>();
      if (j.contains("experiments")) {
        for (const auto& k : j.at("experiments")) s.experiments.push_back(parse_experiment_kind(k.get<std::string>()));
      }
      if (j.contains("baseline_quota")) s.baseline_quota = j.at("baseline_quota").get<double>();
      if (j.contains("exclude_unimprovable")) s.exclude_unimprovable = j.at("exclude_unimprovable").get<bool>();
    } catch (const nlohmann::json::exception& e) {
      fail(std::string("malformed spec field: ") + e.what());
    } catch (const Error& e) {
      fail(e.what());
    }
    std::sort(s.iteration_grid.begin(), s.iteration_grid.end());
    s.iteration_grid.erase(std::unique(s.iteration_grid.begin(), s.iteration_grid.end()), s.iteration_grid.end());
    s.validate();
    return s;
  }

  static ExperimentSpec load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read spec " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::SpecValidation, std::string("spec is not valid JSON: ") + e.what());
    }
    return from_json(j);
  }

  /// FNV-1a over the canonical JSON dump.
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_json().dump()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

/// The paired sample list: target i comes from sub-stream i of the master seed.
inline std::vector<TargetVector> draw_samples(int n, int count, std::uint64_t master_seed) {
  std::vector<TargetVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    auto rng = substream(master_seed, static_cast<std::uint64_t>(i));
    out.push_back(sample_ordered_simplex(n, rng));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report

struct ReportRow {
  double q = 0.0;
  std::string omega0;
  std::string variant;
  int iterations = 0;
  double mean_rel_improvement = 0.0;
  double pct_improved = 0.0;
  double pct_worse = 0.0;
  double pct_best = 0.0;
  double mean_err_upper = 0.0;
  double mean_err_lower = 0.0;
  double worst_err_upper = 0.0;
  double zero_stop_frac = 0.0;
  double mean_initial_dist = 0.0;

  int samples = 0;
  int baseline_zero_count = 0;
  int excluded_count = 0;
  std::array<double, 7> rel_quantiles{};  // min, 5%, 25%, 50%, 75%, 95%, max
  bool significant_improvement = false;
  bool significant_err_upper = false;
  bool significant_err_change = false;

  auto key() const { return std::tie(q, omega0, variant, iterations); }
};

struct ScatterPoint {
  int sample_id = 0;
  double q = 0.0;
  std::string omega0;
  std::string variant;
  int iterations = 0;
  double initial_dist = 0.0;
  double final_dist = 0.0;
  double err_lower = 0.0;
  double rel_err_lower = 0.0;
  bool zero_stop = false;
};

struct AggregateReport {
  ExperimentKind kind = ExperimentKind::QSweep;
  int n = 0;
  std::vector<ReportRow> rows;
  std::vector<ScatterPoint> points;  // one per (sample, row) that is not synthetic
  std::size_t atlas_size = 0;

  void sort_rows() {
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) { return a.key() < b.key(); });
  }

  const ReportRow* find(double q, std::string_view omega0, std::string_view variant, int iterations) const {
    for (const auto& r : rows) {
      if (r.q == q && r.omega0 == omega0 && r.variant == variant && r.iterations == iterations) return &r;
    }
    return nullptr;
  }
};

namespace detail {

struct Outcome {
  double initial = 0.0;
  std::vector<double> best_at;        // per iteration-grid entry
  std::vector<std::uint8_t> zero_at;  // zero-power stop within that budget
};

struct CellRun {
  double quota = 0.0;
  Omega0 omega0;
  VariantSpec variant;
  std::vector<Outcome> outcomes;  // per sample
};

inline Outcome summarize(const SolverRun& r, const std::vector<int>& grid) {
  Outcome o;
  o.initial = r.initial_distance();
  const int zero_index = r.zero_stop_index();
  double best = std::numeric_limits<double>::infinity();
  std::size_t seen = 0;
  for (int k : grid) {
    while (seen < r.trace.size() && static_cast<int>(seen) < k) best = std::min(best, r.trace[seen++].distance);
    o.best_at.push_back(best);
    o.zero_at.push_back(zero_index >= 0 && zero_index < k ? 1 : 0);
  }
  return o;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&](unsigned id) {
    for (std::size_t i = next++; i < count; i = next++) fn(i, id);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
}

/// Solves every cell on every sample; observed power vectors feed `atlas`.
inline void run_cells(const std::vector<TargetVector>& samples, std::vector<CellRun>& cells,
                      const std::vector<int>& grid, BanzhafAtlas& atlas, unsigned threads) {
  const int budget = grid.back();
  for (auto& c : cells) c.outcomes.assign(samples.size(), {});
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  std::vector<BanzhafAtlas> local(threads, BanzhafAtlas(atlas.players()));
  parallel_for(samples.size(), threads, [&](std::size_t i, unsigned id) {
    for (auto& c : cells) {
      SolverConfig config;
      config.quota = c.quota;
      config.omega0 = c.omega0;
      config.variant = c.variant.variant;
      config.max_iterations = budget;
      const SolverRun r = run(samples[i], config);
      for (const auto& rec : r.trace) local[id].insert(rec.power);
      c.outcomes[i] = summarize(r, grid);
    }
  });
  for (const auto& l : local) atlas.merge(l);
  atlas.freeze();
}

inline std::vector<double> nearest_distances(const std::vector<TargetVector>& samples, const BanzhafAtlas& atlas,
                                             unsigned threads) {
  std::vector<double> out(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i, unsigned) { out[i] = atlas.nearest(samples[i]).distance; });
  return out;
}

inline double quantile(std::vector<double> xs, double p) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

/// Per-sample view of one row: distances, zero flags, initial distances.
struct Column {
  std::vector<double> dist;
  std::vector<std::uint8_t> zero;
  std::vector<double> initial;
};

inline Column column_of(const CellRun& c, std::size_t grid_index) {
  Column col;
  for (const auto& o : c.outcomes) {
    col.dist.push_back(o.best_at[grid_index]);
    col.zero.push_back(o.zero_at[grid_index]);
    col.initial.push_back(o.initial);
  }
  return col;
}

struct RowContext {
  const Column* baseline = nullptr;          // relative improvement and % improved/worse
  std::vector<const Column*> group;          // competitors for % best; includes this column
  const std::vector<std::uint8_t>* exclude = nullptr;
  double baseline_err_upper = std::numeric_limits<double>::quiet_NaN();
};

inline void fill_row(ReportRow& row, const Column& col, const RowContext& ctx, const std::vector<double>& nearest,
                     int n) {
  const std::size_t m = col.dist.size();
  const auto thresholds = SignificanceThresholds::for_players(n);
  row.samples = static_cast<int>(m);

  double sum_upper = 0.0, sum_lower = 0.0, sum_init = 0.0, worst = 0.0;
  std::size_t zero = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sum_upper += col.dist[i];
    sum_lower += std::max(0.0, col.dist[i] - nearest[i]);
    sum_init += col.initial[i];
    worst = std::max(worst, col.dist[i]);
    zero += col.zero[i];
  }
  row.mean_err_upper = sum_upper / m;
  row.mean_err_lower = sum_lower / m;
  row.mean_initial_dist = sum_init / m;
  row.worst_err_upper = worst;
  row.zero_stop_frac = static_cast<double>(zero) / m;

  std::vector<double> rel;
  std::size_t improved = 0, worse = 0;
  if (ctx.baseline) {
    for (std::size_t i = 0; i < m; ++i) {
      const double base = ctx.baseline->dist[i];
      if (col.dist[i] < base) ++improved;
      if (col.dist[i] > base) ++worse;
      if (ctx.exclude && (*ctx.exclude)[i]) {
        ++row.excluded_count;
        continue;
      }
      if (base == 0.0) {
        ++row.baseline_zero_count;
        continue;
      }
      rel.push_back(relative_improvement(base, col.dist[i]));
    }
  }
  row.pct_improved = 100.0 * static_cast<double>(improved) / m;
  row.pct_worse = 100.0 * static_cast<double>(worse) / m;
  if (ctx.baseline) {
    double s = 0.0;
    for (double r : rel) s += r;
    row.mean_rel_improvement = rel.empty() ? std::numeric_limits<double>::quiet_NaN() : s / rel.size();
  }
  const std::array<double, 7> ps{0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0};
  for (std::size_t k = 0; k < ps.size(); ++k) row.rel_quantiles[k] = quantile(rel, ps[k]);

  if (ctx.group.size() >= 2) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < m; ++i) {
      bool strictly = true;
      for (const Column* other : ctx.group) {
        if (other != &col && other->dist[i] <= col.dist[i]) {
          strictly = false;
          break;
        }
      }
      best += strictly ? 1 : 0;
    }
    row.pct_best = 100.0 * static_cast<double>(best) / m;
  }

  row.significant_improvement = row.mean_rel_improvement > thresholds.improvement;
  row.significant_err_upper = row.mean_err_upper > thresholds.error_upper;
  row.significant_err_change = std::abs(row.mean_err_upper - ctx.baseline_err_upper) > thresholds.error_change;
}

inline void add_points(AggregateReport& report, const ReportRow& row, const Column& col,
                       const std::vector<double>& nearest) {
  for (std::size_t i = 0; i < col.dist.size(); ++i) {
    ScatterPoint p;
    p.sample_id = static_cast<int>(i);
    p.q = row.q;
    p.omega0 = row.omega0;
    p.variant = row.variant;
    p.iterations = row.iterations;
    p.initial_dist = col.initial[i];
    p.final_dist = col.dist[i];
    p.err_lower = std::max(0.0, col.dist[i] - nearest[i]);
    p.rel_err_lower = p.initial_dist > 0.0 ? p.err_lower / p.initial_dist : 0.0;
    p.zero_stop = col.zero[i] != 0;
    report.points.push_back(std::move(p));
  }
}

inline void check_samples(const ExperimentSpec& spec, const std::vector<TargetVector>& samples) {
  spec.validate();
  if (samples.empty()) throw Error(ErrorCode::SpecValidation, "experiment needs at least one sample");
  for (const auto& t : samples) {
    if (static_cast<int>(t.size()) != spec.n) throw Error(ErrorCode::LengthMismatch, "sample length differs from n");
  }
}

/// Exact oracle up to four players, otherwise the loaded atlas or an empty one.
inline BanzhafAtlas starting_atlas(const ExperimentSpec& spec) {
  if (!spec.atlas_path) return spec.n <= 4 ? build_exact_oracle(spec.n, 1 << spec.n) : BanzhafAtlas(spec.n);
  BanzhafAtlas a = BanzhafAtlas::load(*spec.atlas_path);
  if (a.players() != spec.n) throw Error(ErrorCode::SpecValidation, "atlas n does not match spec n");
  return a;
}

inline double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / xs.size();
}

/// Cells over quota x omega0 x variant. A variant's own quota replaces the grid quota.
inline std::vector<CellRun> grid_cells(const ExperimentSpec& spec, const std::vector<double>& quotas) {
  std::vector<CellRun> cells;
  for (double q : quotas) {
    for (const auto& o : spec.omega0_modes) {
      for (const auto& v : spec.variants) cells.push_back(CellRun{v.quota.value_or(q), o, v, {}});
    }
  }
  return cells;
}

}  // namespace detail

/**
 * Relative improvement of every quota against `baseline_quota` for the same
 * start mode, variant and budget. Samples whose baseline distance is zero are
 * left out of the mean and counted.
 */
inline AggregateReport run_q_sweep(const ExperimentSpec& spec, const std::vector<TargetVector>& samples,
                                   unsigned threads = 0) {
  detail::check_samples(spec, samples);
  auto cells = detail::grid_cells(spec, spec.quota_grid);
  BanzhafAtlas atlas = detail::starting_atlas(spec);
  detail::run_cells(samples, cells, spec.iteration_grid, atlas, threads);
  const auto nearest = detail::nearest_distances(samples, atlas, threads);

  AggregateReport report{ExperimentKind::QSweep, spec.n, {}, {}, atlas.size()};
  const std::size_t per_q = spec.omega0_modes.size() * spec.variants.size();
  const auto base_q = static_cast<std::size_t>(
      std::find(spec.quota_grid.begin(), spec.quota_grid.end(), spec.baseline_quota) - spec.quota_grid.begin());

  for (std::size_t g = 0; g < spec.iteration_grid.size(); ++g) {
    std::vector<detail::Column> cols;
    for (const auto& c : cells) cols.push_back(detail::column_of(c, g));
    for (std::size_t within = 0; within < per_q; ++within) {
      const detail::Column& base = cols[base_q * per_q + within];
      std::vector<std::uint8_t> unimprovable(samples.size(), 0);
      if (spec.exclude_unimprovable) {
        for (std::size_t i = 0; i < samples.size(); ++i) unimprovable[i] = base.dist[i] == base.initial[i];
      }
      detail::RowContext ctx;
      ctx.baseline = &base;
      ctx.exclude = spec.exclude_unimprovable ? &unimprovable : nullptr;
      for (std::size_t qi = 0; qi < spec.quota_grid.size(); ++qi) ctx.group.push_back(&cols[qi * per_q + within]);
      ctx.baseline_err_upper = detail::mean_of(base.dist);
      for (std::size_t qi = 0; qi < spec.quota_grid.size(); ++qi) {
        const auto& cell = cells[qi * per_q + within];
        ReportRow row;
        row.q = cell.quota;
        row.omega0 = to_string(cell.omega0);
        row.variant = cell.variant.label();
        row.iterations = spec.iteration_grid[g];
        detail::fill_row(row, cols[qi * per_q + within], ctx, nearest, spec.n);
        detail::add_points(report, row, cols[qi * per_q + within], nearest);
        report.rows.push_back(row);
      }
    }
  }
  report.sort_rows();
  return report;
}

inline AggregateReport run_q_sweep(const ExperimentSpec& spec, unsigned threads = 0) {
  spec.validate();
  return run_q_sweep(spec, draw_samples(spec.n, spec.sample_count, spec.master_seed), threads);
}

/**
 * Start modes compared at each quota: initial distance, worst final
 * distance, mean upper and lower error. The first listed mode is the
 * reference for relative improvement. One scatter point per sample and row.
 */
inline AggregateReport run_omega0_comparison(const ExperimentSpec& spec, const std::vector<TargetVector>& samples,
                                             unsigned threads = 0) {
  detail::check_samples(spec, samples);
  auto cells = detail::grid_cells(spec, spec.quota_grid);
  BanzhafAtlas atlas = detail::starting_atlas(spec);
  detail::run_cells(samples, cells, spec.iteration_grid, atlas, threads);
  if (atlas.empty()) throw Error(ErrorCode::EmptyAtlas, "no Banzhaf vectors available");
  const auto nearest = detail::nearest_distances(samples, atlas, threads);

  AggregateReport report{ExperimentKind::Omega0Comparison, spec.n, {}, {}, atlas.size()};
  const std::size_t nv = spec.variants.size();
  const std::size_t per_q = spec.omega0_modes.size() * nv;
  for (std::size_t g = 0; g < spec.iteration_grid.size(); ++g) {
    std::vector<detail::Column> cols;
    for (const auto& c : cells) cols.push_back(detail::column_of(c, g));
    for (std::size_t qi = 0; qi < spec.quota_grid.size(); ++qi) {
      for (std::size_t vi = 0; vi < nv; ++vi) {
        detail::RowContext ctx;
        ctx.baseline = &cols[qi * per_q + vi];
        for (std::size_t oi = 0; oi < spec.omega0_modes.size(); ++oi) ctx.group.push_back(&cols[qi * per_q + oi * nv + vi]);
        ctx.baseline_err_upper = detail::mean_of(ctx.baseline->dist);
        for (std::size_t oi = 0; oi < spec.omega0_modes.size(); ++oi) {
          const std::size_t idx = qi * per_q + oi * nv + vi;
          ReportRow row;
          row.q = cells[idx].quota;
          row.omega0 = to_string(cells[idx].omega0);
          row.variant = cells[idx].variant.label();
          row.iterations = spec.iteration_grid[g];
          detail::fill_row(row, cols[idx], ctx, nearest, spec.n);
          detail::add_points(report, row, cols[idx], nearest);
          report.rows.push_back(row);
        }
      }
    }
  }
  report.sort_rows();
  return report;
}

inline AggregateReport run_omega0_comparison(const ExperimentSpec& spec, unsigned threads = 0) {
  spec.validate();
  return run_omega0_comparison(spec, draw_samples(spec.n, spec.sample_count, spec.master_seed), threads);
}

/**
 * Cumulative fraction of samples that stopped on a zero-power vector within
 * k iterations, for every k of the iteration grid. Relative improvement and
 * % improved/worse compare budget k with the previous grid entry.
 */
inline AggregateReport run_zero_stop_curve(const ExperimentSpec& spec, const std::vector<TargetVector>& samples,
                                           unsigned threads = 0) {
  detail::check_samples(spec, samples);
  auto cells = detail::grid_cells(spec, spec.quota_grid);
  BanzhafAtlas atlas = detail::starting_atlas(spec);
  detail::run_cells(samples, cells, spec.iteration_grid, atlas, threads);
  const auto nearest = detail::nearest_distances(samples, atlas, threads);

  AggregateReport report{ExperimentKind::ZeroStopCurve, spec.n, {}, {}, atlas.size()};
  for (const auto& cell : cells) {
    std::vector<detail::Column> cols;
    for (std::size_t g = 0; g < spec.iteration_grid.size(); ++g) cols.push_back(detail::column_of(cell, g));
    for (std::size_t g = 0; g < spec.iteration_grid.size(); ++g) {
      detail::RowContext ctx;
      ctx.baseline = g > 0 ? &cols[g - 1] : nullptr;
      ctx.baseline_err_upper = g > 0 ? detail::mean_of(cols[g - 1].dist) : std::numeric_limits<double>::quiet_NaN();
      ReportRow row;
      row.q = cell.quota;
      row.omega0 = to_string(cell.omega0);
      row.variant = cell.variant.label();
      row.iterations = spec.iteration_grid[g];
      detail::fill_row(row, cols[g], ctx, nearest, spec.n);
      if (g == 0) row.mean_rel_improvement = 0.0;
      detail::add_points(report, row, cols[g], nearest);
      report.rows.push_back(row);
    }
  }
  report.sort_rows();
  return report;
}

inline AggregateReport run_zero_stop_curve(const ExperimentSpec& spec, unsigned threads = 0) {
  spec.validate();
  return run_zero_stop_curve(spec, draw_samples(spec.n, spec.sample_count, spec.master_seed), threads);
}

/// Cumulative zero-stop fractions of one (q, omega0, variant) series, in iteration-grid order.
inline std::vector<double> zero_stop_series(const AggregateReport& report, double q, std::string_view omega0,
                                            std::string_view variant = "base") {
  std::vector<double> out;
  for (const auto& r : report.rows) {
    if (r.q == q && r.omega0 == omega0 && r.variant == variant) out.push_back(r.zero_stop_frac);
  }
  return out;
}

/**
 * Every variant against base on the same samples. % best counts samples where
 * a variant is strictly closer than all others, base included. The extra
 * `best_of` row takes the closest variant per sample.
 */
inline AggregateReport run_variant_showdown(const ExperimentSpec& spec, const std::vector<TargetVector>& samples,
                                            unsigned threads = 0) {
  detail::check_samples(spec, samples);
  BanzhafAtlas atlas = detail::starting_atlas(spec);
  AggregateReport report{ExperimentKind::VariantShowdown, spec.n, {}, {}, 0};

  auto cells = detail::grid_cells(spec, spec.quota_grid);
  detail::run_cells(samples, cells, spec.iteration_grid, atlas, threads);
  if (atlas.empty()) throw Error(ErrorCode::EmptyAtlas, "no Banzhaf vectors available");
  const auto nearest = detail::nearest_distances(samples, atlas, threads);
  report.atlas_size = atlas.size();

  const std::size_t nv = spec.variants.size();
  const std::size_t base_vi = static_cast<std::size_t>(
      std::find_if(spec.variants.begin(), spec.variants.end(),
                   [](const VariantSpec& v) { return v.variant.kind == Variant::Kind::Base; }) -
      spec.variants.begin());

  for (std::size_t g = 0; g < spec.iteration_grid.size(); ++g) {
    for (std::size_t qi = 0; qi < spec.quota_grid.size(); ++qi) {
      for (std::size_t oi = 0; oi < spec.omega0_modes.size(); ++oi) {
        const std::size_t first = (qi * spec.omega0_modes.size() + oi) * nv;
        std::vector<detail::Column> cols;
        for (std::size_t vi = 0; vi < nv; ++vi) cols.push_back(detail::column_of(cells[first + vi], g));

        detail::RowContext ctx;
        ctx.baseline = &cols[base_vi];
        for (const auto& c : cols) ctx.group.push_back(&c);
        ctx.baseline_err_upper = detail::mean_of(cols[base_vi].dist);

        double best_pct_sum = 0.0;
        for (std::size_t vi = 0; vi < nv; ++vi) {
          ReportRow row;
          row.q = spec.quota_grid[qi];
          row.omega0 = to_string(spec.omega0_modes[oi]);
          row.variant = spec.variants[vi].label();
          row.iterations = spec.iteration_grid[g];
          detail::fill_row(row, cols[vi], ctx, nearest, spec.n);
          best_pct_sum += row.pct_best;
          detail::add_points(report, row, cols[vi], nearest);
          report.rows.push_back(row);
        }

        // Closest variant per sample; ties keep the earlier variant.
        detail::Column best;
        for (std::size_t i = 0; i < samples.size(); ++i) {
          std::size_t pick = 0;
          for (std::size_t vi = 1; vi < nv; ++vi) {
            if (cols[vi].dist[i] < cols[pick].dist[i]) pick = vi;
          }
          best.dist.push_back(cols[pick].dist[i]);
          best.zero.push_back(cols[pick].zero[i]);
          best.initial.push_back(cols[pick].initial[i]);
        }
        detail::RowContext best_ctx;
        best_ctx.baseline = &cols[base_vi];
        best_ctx.baseline_err_upper = ctx.baseline_err_upper;
        ReportRow row;
        row.q = spec.quota_grid[qi];
        row.omega0 = to_string(spec.omega0_modes[oi]);
        row.variant = "best_of";
        row.iterations = spec.iteration_grid[g];
        detail::fill_row(row, best, best_ctx, nearest, spec.n);
        row.pct_best = best_pct_sum;
        report.rows.push_back(row);
      }
    }
  }
  report.sort_rows();
  return report;
}

inline AggregateReport run_variant_showdown(const ExperimentSpec& spec, unsigned threads = 0) {
  spec.validate();
  return run_variant_showdown(spec, draw_samples(spec.n, spec.sample_count, spec.master_seed), threads);
}

inline AggregateReport run_experiment(ExperimentKind kind, const ExperimentSpec& spec, unsigned threads = 0) {
  switch (kind) {
    case ExperimentKind::QSweep: return run_q_sweep(spec, threads);
    case ExperimentKind::Omega0Comparison: return run_omega0_comparison(spec, threads);
    case ExperimentKind::ZeroStopCurve: return run_zero_stop_curve(spec, threads);
    case ExperimentKind::VariantShowdown: return run_variant_showdown(spec, threads);
  }
  throw Error(ErrorCode::SpecValidation, "unknown experiment kind");
}

// ---------------------------------------------------------------------------
// CSV output

inline constexpr std::string_view kReportHeader =
    "q,omega0,variant,iterations,mean_rel_improvement,pct_improved,pct_worse,pct_best,mean_err_upper,"
    "mean_err_lower,worst_err_upper,zero_stop_frac,mean_initial_dist";

inline constexpr std::string_view kDetailHeader =
    "q,omega0,variant,iterations,samples,baseline_zero_count,excluded_count,rel_min,rel_p05,rel_p25,rel_p50,"
    "rel_p75,rel_p95,rel_max,significant_improvement,significant_err_upper,significant_err_change";

inline constexpr std::string_view kPointsHeader =
    "sample_id,q,omega0,variant,iterations,initial_dist,final_dist,err_lower,rel_err_lower,zero_stop";

namespace detail {

/// 10 significant digits; negative zero prints as 0.
inline std::string csv_real(double v) {
  if (v == 0.0) v = 0.0;
  if (std::isnan(v)) return "nan";
  return format_real(v, 10);
}

/// Quoted when the field holds a comma (explicit omega0 vectors).
inline std::string csv_text(const std::string& s) {
  return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

inline std::string row_prefix(const ReportRow& r) {
  return csv_real(r.q) + "," + csv_text(r.omega0) + "," + csv_text(r.variant) + "," + std::to_string(r.iterations);
}

}  // namespace detail

inline void write_report(std::ostream& out, const AggregateReport& report) {
  out << kReportHeader << '\n';
  for (const auto& r : report.rows) {
    out << detail::row_prefix(r) << ',' << detail::csv_real(r.mean_rel_improvement) << ','
        << detail::csv_real(r.pct_improved) << ',' << detail::csv_real(r.pct_worse) << ','
        << detail::csv_real(r.pct_best) << ',' << detail::csv_real(r.mean_err_upper) << ','
        << detail::csv_real(r.mean_err_lower) << ',' << detail::csv_real(r.worst_err_upper) << ','
        << detail::csv_real(r.zero_stop_frac) << ',' << detail::csv_real(r.mean_initial_dist) << '\n';
  }
}

inline void emit_report(const AggregateReport& report, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  write_report(out, report);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

inline void emit_detail(const AggregateReport& report, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << kDetailHeader << '\n';
  for (const auto& r : report.rows) {
    out << detail::row_prefix(r) << ',' << r.samples << ',' << r.baseline_zero_count << ',' << r.excluded_count;
    for (double x : r.rel_quantiles) out << ',' << detail::csv_real(x);
    out << ',' << int(r.significant_improvement) << ',' << int(r.significant_err_upper) << ','
        << int(r.significant_err_change) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

inline void emit_points(const AggregateReport& report, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << kPointsHeader << '\n';
  for (const auto& p : report.points) {
    out << p.sample_id << ',' << detail::csv_real(p.q) << ',' << detail::csv_text(p.omega0) << ','
        << detail::csv_text(p.variant) << ',' << p.iterations << ',' << detail::csv_real(p.initial_dist) << ','
        << detail::csv_real(p.final_dist) << ',' << detail::csv_real(p.err_lower) << ','
        << detail::csv_real(p.rel_err_lower) << ',' << int(p.zero_stop) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

/// Targets as long-form CSV: `sample_id,i,t_i`, players 1-based.
inline void write_samples(std::ostream& out, const std::vector<TargetVector>& samples) {
  out << "sample_id,i,t_i\n";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t i = 0; i < samples[s].size(); ++i) {
      out << s << ',' << (i + 1) << ',' << detail::format_real(samples[s][i], 17) << '\n';
    }
  }
}

}  // namespace banzhaf

#endif  // BANZHAF_EXPERIMENT_HPP
