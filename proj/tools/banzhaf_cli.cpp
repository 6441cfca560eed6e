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

#include <banzhaf/banzhaf.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitError = 1;
constexpr int kExitSpecInvalid = 2;

// nlohmann prints doubles with round-trip precision already.
json to_json(const std::vector<double>& v) { return json(v); }

void write_trace(const std::string& path, const banzhaf::SolverRun& run) {
  std::ofstream out(path);
  if (!out) throw banzhaf::Error(banzhaf::ErrorCode::IoError, "cannot write " + path);
  const std::size_t n = run.target.size();
  out << "iter,action,distance";
  for (std::size_t i = 1; i <= n; ++i) out << ",w_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",beta_" << i;
  out << '\n';
  for (const auto& rec : run.trace) {
    out << rec.index << ',' << banzhaf::to_string(rec.action) << ',' << banzhaf::detail::format_real(rec.distance);
    for (double w : rec.weights_before) out << ',' << banzhaf::detail::format_real(w);
    for (double b : rec.power.values) out << ',' << banzhaf::detail::format_real(b);
    out << '\n';
  }
}

struct SolveOptions {
  std::string target;
  double quota = 0.5;
  std::string omega0 = "target";
  std::string variant = "base";
  int max_iterations = 50;
  double max_distance = banzhaf::kDefaultMaxDistance;
  std::string trace;
  bool literal_best = false;
};

int cmd_solve(const SolveOptions& o) {
  banzhaf::SolverConfig config;
  config.quota = o.quota;
  config.omega0 = banzhaf::parse_omega0(o.omega0);
  config.variant = banzhaf::parse_variant(o.variant);
  config.max_iterations = o.max_iterations;
  config.max_distance = o.max_distance;
  config.literal_best_weights = o.literal_best;

  const banzhaf::TargetVector target(banzhaf::parse_vector(o.target));
  const banzhaf::SolverRun run = banzhaf::run(target, config);
  if (!o.trace.empty()) write_trace(o.trace, run);

  json result;
  result["bestWeights"] = to_json(run.best_weights);
  result["bestPower"] = to_json(run.best_power.values);
  result["bestDistance"] = run.best_distance;
  result["stopReason"] = std::string(banzhaf::to_string(run.stop_reason));
  result["iterations"] = run.trace.size();
  std::cout << result.dump() << '\n';
  return 0;
}

int cmd_power(const std::string& literal, const std::string& rule) {
  banzhaf::WeightedVotingGame parsed = banzhaf::parse_game(literal);
  banzhaf::ValuationRule r = parsed.rule();
  if (rule == "unanimity") r = banzhaf::ValuationRule::unanimity();
  if (rule == "majority") r = banzhaf::ValuationRule::simple_majority();
  const banzhaf::WeightedVotingGame game(parsed.quota(), parsed.weights(), r);
  const auto raw = banzhaf::raw_banzhaf(game);
  json out;
  out["counts"] = raw.counts;
  out["denominator"] = raw.denominator;
  out["power"] = to_json(banzhaf::normalize(raw).values);
  std::cout << out.dump() << '\n';
  return 0;
}

void write_atlas(const banzhaf::BanzhafAtlas& atlas, const std::string& path) {
  if (path.empty() || path == "-") {
    atlas.write(std::cout);
  } else {
    atlas.save(path);
  }
}

int cmd_oracle(int n, int max_weight, const std::string& out) {
  if (max_weight <= 0) max_weight = 1 << n;
  write_atlas(banzhaf::build_exact_oracle(n, max_weight), out);
  return 0;
}

struct AtlasBuildOptions {
  int n = 8;
  double quota = 0.5;
  int stability = 250;
  std::uint64_t seed = 42;
  std::string out;
  std::string omega0 = "target";
  std::string variant = "base";
  int max_iterations = 50;
  unsigned threads = 0;
};

int cmd_atlas_build(const AtlasBuildOptions& o) {
  banzhaf::SolverConfig config;
  config.quota = o.quota;
  config.omega0 = banzhaf::parse_omega0(o.omega0);
  config.variant = banzhaf::parse_variant(o.variant);
  config.max_iterations = o.max_iterations;
  const auto built = banzhaf::build_sampled_atlas(o.n, config, o.seed, o.stability, o.threads);
  write_atlas(built.atlas, o.out);
  std::cerr << "atlas: " << built.atlas.size() << " vectors after " << built.samples << " samples\n";
  return 0;
}

int cmd_atlas_query(const std::string& path, const std::string& target) {
  banzhaf::BanzhafAtlas atlas = banzhaf::BanzhafAtlas::load(path);
  atlas.freeze();
  const auto near = atlas.nearest(std::span<const double>(banzhaf::parse_vector(target)));
  json out;
  out["nearest"] = to_json(near.vector);
  out["distance"] = near.distance;
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_sample(int n, int count, std::uint64_t seed) {
  banzhaf::write_samples(std::cout, banzhaf::draw_samples(n, count, seed));
  return 0;
}

void render_svgs(const banzhaf::AggregateReport& report, const fs::path& dir) {
  using banzhaf::svg::Plot;
  using banzhaf::svg::Series;
  const std::string kind(banzhaf::to_string(report.kind));
  std::map<std::string, Series> by_series;
  auto series_for = [&](std::string label, bool line) -> Series& {
    auto& s = by_series[label];
    s.label = std::move(label);
    s.line = line;
    return s;
  };

  Plot plot;
  switch (report.kind) {
    case banzhaf::ExperimentKind::QSweep:
      plot = {"Mean relative improvement vs quota", "q", "mean relative improvement", {}};
      for (const auto& r : report.rows) {
        series_for(r.omega0 + " " + r.variant + " " + std::to_string(r.iterations), true)
            .points.emplace_back(r.q, r.mean_rel_improvement);
      }
      break;
    case banzhaf::ExperimentKind::Omega0Comparison:
      plot = {"Relative lower error vs initial distance", "initial distance", "lower error / initial", {}};
      for (const auto& p : report.points) {
        by_series[p.omega0].label = p.omega0;
        by_series[p.omega0].line = false;
        by_series[p.omega0].points.emplace_back(p.initial_dist, p.rel_err_lower);
      }
      break;
    case banzhaf::ExperimentKind::ZeroStopCurve:
      plot = {"Runs stopped on a zero-power vector", "iterations", "cumulative fraction", {}};
      for (const auto& r : report.rows) {
        series_for(r.omega0 + " q=" + banzhaf::detail::format_real(r.q, 4), true)
            .points.emplace_back(r.iterations, r.zero_stop_frac);
      }
      break;
    case banzhaf::ExperimentKind::VariantShowdown:
      plot = {"Mean upper error per variant", "iterations", "mean upper error", {}};
      for (const auto& r : report.rows) {
        series_for(r.variant, false).points.emplace_back(r.iterations, r.mean_err_upper);
      }
      break;
  }
  for (auto& [_, s] : by_series) plot.series.push_back(std::move(s));
  banzhaf::svg::save(dir / (kind + ".svg"), plot);
}

int cmd_experiment(const std::string& spec_path, const std::string& out_dir, unsigned threads, bool dump_samples,
                   bool svg) {
  banzhaf::ExperimentSpec spec;
  try {
    spec = banzhaf::ExperimentSpec::load(spec_path);
    if (spec.experiments.empty()) {
      throw banzhaf::Error(banzhaf::ErrorCode::SpecValidation, "spec lists no experiments");
    }
  } catch (const banzhaf::Error& e) {
    std::cerr << "invalid spec: " << e.what() << '\n';
    return e.code() == banzhaf::ErrorCode::IoError ? kExitError : kExitSpecInvalid;
  }

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  json files = json::array();
  for (auto kind : spec.experiments) {
    const std::string name(banzhaf::to_string(kind));
    const auto report = banzhaf::run_experiment(kind, spec, threads);
    banzhaf::emit_report(report, dir / (name + ".csv"));
    banzhaf::emit_detail(report, dir / (name + "_detail.csv"));
    files.push_back(name + ".csv");
    files.push_back(name + "_detail.csv");
    if (dump_samples || kind == banzhaf::ExperimentKind::Omega0Comparison) {
      banzhaf::emit_points(report, dir / (name + "_points.csv"));
      files.push_back(name + "_points.csv");
    }
    if (svg) {
      render_svgs(report, dir);
      files.push_back(name + ".svg");
    }
    std::cerr << name << ": " << report.rows.size() << " rows, atlas " << report.atlas_size << " vectors\n";
  }
  if (dump_samples) {
    std::ofstream targets(dir / "targets.csv");
    banzhaf::write_samples(targets, banzhaf::draw_samples(spec.n, spec.sample_count, spec.master_seed));
    files.push_back("targets.csv");
  }

  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(spec.hash()));
  json manifest;
  manifest["spec_hash"] = hash;
  manifest["master_seed"] = spec.master_seed;
  manifest["spec"] = spec.to_json();
  manifest["files"] = files;
  manifest["versions"] = {{"banzhaf", banzhaf::kVersion}, {"compiler", __VERSION__}, {"cplusplus", __cplusplus}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Banzhaf power indices and the Laruelle-Widgren inverse heuristic"};
  app.require_subcommand(1);

  std::string game_literal, rule = "game";
  auto* power = app.add_subcommand("power", "Banzhaf index of a game literal `q; w1,...,wn [minSize=m]`");
  power->add_option("--game", game_literal, "game literal")->required();
  power->add_option("--rule", rule, "game | unanimity | majority")
      ->check(CLI::IsMember({"game", "unanimity", "majority"}));

  SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Run the inverse heuristic on one target");
  solve->add_option("--target", solve_opts.target, "target vector, comma-separated, non-increasing")->required();
  solve->add_option("--quota", solve_opts.quota, "quota q")->capture_default_str();
  solve->add_option("--omega0", solve_opts.omega0, "target | centroid | offset | explicit:<csv>")->capture_default_str();
  solve->add_option("--variant", solve_opts.variant, "base | restart | mincoalition:<m> | scaling:<s>")
      ->capture_default_str();
  solve->add_option("--max-iterations", solve_opts.max_iterations)->capture_default_str();
  solve->add_option("--max-distance", solve_opts.max_distance)->capture_default_str();
  solve->add_option("--trace", solve_opts.trace, "write the per-iteration trace as CSV");
  solve->add_flag("--literal-best-weights", solve_opts.literal_best,
                  "report the post-update weights of the best iteration");

  int oracle_n = 3, oracle_max_weight = 0;
  std::string oracle_out;
  auto* oracle = app.add_subcommand("oracle", "Exact set of Banzhaf vectors for n <= 5");
  oracle->add_option("--n", oracle_n)->required();
  oracle->add_option("--max-weight", oracle_max_weight, "largest integer weight (default 2^n)");
  oracle->add_option("--out", oracle_out, "output path (default stdout)");

  auto* atlas = app.add_subcommand("atlas", "Sampled Banzhaf atlases");
  atlas->require_subcommand(1);
  AtlasBuildOptions build_opts;
  auto* build = atlas->add_subcommand("build", "Grow an atlas from solver runs until it is stable");
  build->add_option("--n", build_opts.n)->required();
  build->add_option("--quota", build_opts.quota)->capture_default_str();
  build->add_option("--stability", build_opts.stability)->capture_default_str();
  build->add_option("--seed", build_opts.seed)->capture_default_str();
  build->add_option("--out", build_opts.out, "output path (default stdout)");
  build->add_option("--omega0", build_opts.omega0)->capture_default_str();
  build->add_option("--variant", build_opts.variant)->capture_default_str();
  build->add_option("--max-iterations", build_opts.max_iterations)->capture_default_str();
  build->add_option("--threads", build_opts.threads, "worker threads (0 = all cores)");
  std::string query_atlas, query_target;
  auto* query = atlas->add_subcommand("query", "Nearest stored vector to a target");
  query->add_option("--atlas", query_atlas)->required();
  query->add_option("--target", query_target)->required();

  int sample_n = 8, sample_count = 10;
  std::uint64_t sample_seed = 42;
  auto* sample = app.add_subcommand("sample", "Seeded targets from the ordered simplex as CSV");
  sample->add_option("--n", sample_n)->capture_default_str();
  sample->add_option("--count", sample_count)->capture_default_str();
  sample->add_option("--seed", sample_seed)->capture_default_str();

  std::string spec_path, out_dir;
  unsigned threads = 0;
  bool dump_samples = false, svg = false;
  auto* experiment = app.add_subcommand("experiment", "Run the experiments listed in a JSON spec");
  experiment->add_option("--spec", spec_path)->required();
  experiment->add_option("--out", out_dir)->required();
  experiment->add_option("--threads", threads, "worker threads (0 = all cores)");
  experiment->add_flag("--dump-samples", dump_samples, "also write per-sample results and targets");
  experiment->add_flag("--svg", svg, "render minimal SVG plots");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*power) return cmd_power(game_literal, rule);
    if (*solve) return cmd_solve(solve_opts);
    if (*oracle) return cmd_oracle(oracle_n, oracle_max_weight, oracle_out);
    if (*build) return cmd_atlas_build(build_opts);
    if (*query) return cmd_atlas_query(query_atlas, query_target);
    if (*sample) return cmd_sample(sample_n, sample_count, sample_seed);
    if (*experiment) return cmd_experiment(spec_path, out_dir, threads, dump_samples, svg);
  } catch (const banzhaf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
