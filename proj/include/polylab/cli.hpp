/* Copyright 2026 The polylab Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line front end: flag parsing, campaign files, acceptance checks
// and artifact writing. All file I/O happens on the calling thread.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "polylab/experiments.hpp"
#include "polylab/report.hpp"
#include "polylab/surface_body.hpp"

namespace polylab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCheck = 3;

// ---------------------------------------------------------------------------
// Grid syntax

/// Parses "start:stop:xK" (geometric, ratio K, stop inclusive), a comma list,
/// or a single integer.
inline std::vector<long> parse_n_grid(std::string_view spec) {
  auto to_long = [&](std::string_view s) {
    long v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
      throw ConfigError("bad n grid '" + std::string(spec) + "'");
    }
    return v;
  };
  std::vector<long> grid;
  const auto c1 = spec.find(':');
  if (c1 != std::string_view::npos) {
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string_view::npos || spec.size() <= c2 + 2 || spec[c2 + 1] != 'x') {
      throw ConfigError("bad n grid '" + std::string(spec) + "', expected start:stop:xK");
    }
    const long start = to_long(spec.substr(0, c1));
    const long stop = to_long(spec.substr(c1 + 1, c2 - c1 - 1));
    const long ratio = to_long(spec.substr(c2 + 2));
    if (start < 1 || ratio < 2 || stop < start) {
      throw ConfigError("bad n grid '" + std::string(spec) + "'");
    }
    for (long n = start; n <= stop; n *= ratio) grid.push_back(n);
    return grid;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = std::min(spec.find(',', pos), spec.size());
    grid.push_back(to_long(spec.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return grid;
}

inline std::optional<std::uint64_t> seed_from_env() {
  const char* env = std::getenv("POLYLAB_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  std::uint64_t v = 0;
  const std::string_view s(env);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ConfigError("POLYLAB_SEED is not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Checks

struct CheckOutcome {
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

namespace detail {

inline void check_slope(CheckOutcome& out, const std::string& what, double slope, double target,
                        double tol) {
  if (!(std::abs(slope - target) <= tol)) {
    out.failures.push_back(what + " slope " + format_fixed(slope, 3) + " not within " +
                           format_fixed(tol, 2) + " of " + format_fixed(target, 3));
  }
}

}  // namespace detail

/// Acceptance thresholds: variance slope within 0.35 of the target.
inline CheckOutcome check_report(const ExperimentConfig& cfg, const VarianceReport& rep) {
  CheckOutcome out;
  detail::check_slope(out, "variance", rep.fit.slope, variance_exponent(cfg.body.dim()), 0.35);
  return out;
}

/// Slope within 0.15 of the target; plateau at the two largest n within 10%.
inline CheckOutcome check_report(const ExperimentConfig& cfg, const MeanDeficitReport& rep) {
  CheckOutcome out;
  detail::check_slope(out, "mean deficit", rep.fit.slope, mean_deficit_exponent(cfg.body.dim()),
                      0.15);
  if (!(std::abs(rep.plateau - rep.plateau_previous) <= 0.1 * std::abs(rep.plateau_previous))) {
    out.failures.push_back("plateau constants differ by more than 10%");
  }
  return out;
}

/// d_K at n = 256 (or the largest n) below 0.05 for d = 2 and 0.06 otherwise;
/// d_K at the largest n at most 0.02 above d_K at the smallest.
inline double clt_threshold(int d) { return d == 2 ? 0.05 : 0.06; }

inline CheckOutcome check_report(const ExperimentConfig& cfg, const CltResult& res) {
  CheckOutcome out;
  const CltRow* probe = &res.per_n.back();
  for (const auto& r : res.per_n) {
    if (r.n == 256) probe = &r;
  }
  if (!(probe->kolmogorov < clt_threshold(cfg.body.dim()))) {
    out.failures.push_back("d_K " + format_fixed(probe->kolmogorov, 4) + " at n=" +
                           std::to_string(probe->n) + " not below " +
                           format_fixed(clt_threshold(cfg.body.dim()), 2));
  }
  if (res.per_n.back().kolmogorov > res.per_n.front().kolmogorov + 0.02) {
    out.failures.push_back("d_K does not decrease over the n grid");
  }
  return out;
}

/// Failure fraction at the largest n at most 0.01.
inline CheckOutcome check_report(const ExperimentConfig&, const ContainmentReport& rep) {
  CheckOutcome out;
  if (!(rep.rows.back().failure <= 0.01)) {
    out.failures.push_back("containment failure " + format_fixed(rep.rows.back().failure, 4) +
                           " at n=" + std::to_string(rep.rows.back().n) + " above 0.01");
  }
  return out;
}

inline CheckOutcome check_report(const ExperimentConfig& cfg, const GrassmannReport& rep) {
  CheckOutcome out;
  detail::check_slope(out, "grassmann", rep.fit.slope, cfg.body.dim() - cfg.ell, 0.15);
  return out;
}

/// J slope within 0.4 of the variance target; J / Var at least 0.8 everywhere.
inline CheckOutcome check_report(const ExperimentConfig& cfg, const EfronSteinReport& rep) {
  CheckOutcome out;
  detail::check_slope(out, "efron-stein", rep.fit.slope, variance_exponent(cfg.body.dim()), 0.4);
  for (const auto& r : rep.rows) {
    if (!(r.ratio >= 0.8)) {
      out.failures.push_back("J/Var " + format_fixed(r.ratio, 3) + " at n=" +
                             std::to_string(r.n) + " below 0.8");
    }
  }
  return out;
}

inline CheckOutcome check_report(const ExperimentConfig& cfg, const CapExponents& caps) {
  const double d = cfg.body.dim();
  CheckOutcome out;
  detail::check_slope(out, "cap boundary", caps.boundary_vs_volume.slope, (d - 1) / (d + 1), 0.02);
  detail::check_slope(out, "cap volume", caps.volume_vs_boundary.slope, (d + 1) / (d - 1), 0.02);
  return out;
}

// ---------------------------------------------------------------------------
// Execution

struct Artifacts {
  Json summary;
  std::vector<RunRecord> records;
  std::optional<FitResult> fit;
  std::optional<double> reference_slope;
  CheckOutcome check;
};

namespace detail {

template <class Report>
Artifacts package(const ExperimentConfig& cfg, const Report& rep) {
  Artifacts a;
  a.summary = summarize(cfg, rep);
  a.check = check_report(cfg, rep);
  Json c;
  c["passed"] = a.check.passed();
  c["failures"] = a.check.failures;
  a.summary["check"] = c;
  return a;
}

}  // namespace detail

/// Runs one configured experiment; no file I/O.
inline Artifacts execute(const ExperimentConfig& cfg, int threads) {
  validate(cfg);
  const int d = cfg.body.dim();
  switch (cfg.kind) {
    case ExperimentKind::Variance: {
      auto rep = run_variance_experiment(cfg, threads);
      auto a = detail::package(cfg, rep);
      a.fit = rep.fit;
      a.reference_slope = variance_exponent(d);
      a.records = std::move(rep.records);
      return a;
    }
    case ExperimentKind::MeanDeficit: {
      auto rep = run_mean_deficit_experiment(cfg, threads);
      auto a = detail::package(cfg, rep);
      a.fit = rep.fit;
      a.reference_slope = mean_deficit_exponent(d);
      a.records = std::move(rep.records);
      return a;
    }
    case ExperimentKind::Clt: {
      auto res = run_clt_experiment(cfg, threads);
      auto a = detail::package(cfg, res);
      a.records = std::move(res.records);
      return a;
    }
    case ExperimentKind::Containment: {
      auto rep = run_containment_experiment(cfg, threads);
      auto a = detail::package(cfg, rep);
      a.records = std::move(rep.records);
      return a;
    }
    case ExperimentKind::GrassmannAngle: {
      auto rep = run_grassmannian_experiment(cfg);
      auto a = detail::package(cfg, rep);
      a.fit = rep.fit;
      a.reference_slope = d - cfg.ell;
      return a;
    }
    case ExperimentKind::EfronStein: {
      auto rep = efron_stein_estimate(cfg, threads);
      auto a = detail::package(cfg, rep);
      a.fit = rep.fit;
      a.reference_slope = variance_exponent(d);
      a.records = std::move(rep.records);
      return a;
    }
    case ExperimentKind::Caps: {
      const auto caps = cap_exponent_check(d, cfg.eps_grid);
      auto a = detail::package(cfg, caps);
      a.fit = caps.boundary_vs_volume;
      a.reference_slope = (d - 1.0) / (d + 1.0);
      return a;
    }
  }
  throw InvariantError("execute: unhandled experiment kind");
}

/// Writes <name>_records.csv, <name>_summary.json and, when the experiment
/// has a power-law fit, <name>_loglog.svg.
inline void write_artifacts(const ExperimentConfig& cfg, const Artifacts& a,
                            const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  emit_csv(cfg, a.records, dir / (cfg.name + "_records.csv"));
  write_text_file(dir / (cfg.name + "_summary.json"), a.summary.dump(2) + "\n");
  if (a.fit && a.fit->points.size() >= 3) {
    const char* x_label = cfg.kind == ExperimentKind::GrassmannAngle ? "log a"
                          : cfg.kind == ExperimentKind::Caps             ? "log eps"
                                                                          : "log n";
    write_text_file(dir / (cfg.name + "_loglog.svg"),
                    format_svg_loglog(*a.fit, a.reference_slope,
                                      cfg.name + " (" + std::string(to_string(cfg.kind)) + ")",
                                      x_label));
  }
}

struct CampaignFile {
  std::vector<ExperimentConfig> experiments;
  std::filesystem::path output_dir = ".";
  int threads = 0;
};

/// Accepts a campaign object {experiments, output_dir, threads}, a single
/// experiment config, or an emitted summary (its "config" member).
inline CampaignFile parse_campaign(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  CampaignFile file;
  if (!j.is_object()) throw ConfigError("campaign file must hold a JSON object");
  if (j.contains("experiments")) {
    if (!j["experiments"].is_array()) throw ConfigError("'experiments' must be an array");
    for (const auto& e : j["experiments"]) file.experiments.push_back(config_from_json(e));
    try {
      file.output_dir = j.value("output_dir", std::string("."));
      file.threads = j.value("threads", 0);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed campaign: ") + e.what());
    }
  } else if (j.contains("config")) {
    file.experiments.push_back(config_from_json(j["config"]));
  } else {
    file.experiments.push_back(config_from_json(j));
  }
  std::set<std::string> names;
  for (const auto& e : file.experiments) {
    if (!names.insert(e.name).second) throw ConfigError("duplicate experiment name '" + e.name + "'");
  }
  if (file.threads < 0) throw ConfigError("threads must be >= 0");
  return file;
}

// ---------------------------------------------------------------------------
// Command line

namespace detail {

struct CommandOptions {
  std::string body = "ball";
  int d = 0;
  int ell = 0;
  std::vector<double> axes;
  std::string n = "32:1024:x2";
  int reps = 1000;
  std::uint64_t seed = 0;
  int panel = 0;
  double c_alpha = 1.0;
  int threads = 0;
  std::string out = ".";
  std::string name;
  bool check = false;
  std::string config;
  long samples = 1000000;
  std::vector<double> a{0.05, 0.075, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> eps{1e-6, 3e-6, 1e-5, 3e-5, 1e-4, 3e-4, 1e-3};
};

inline ConvexBody body_from_options(const CommandOptions& o) {
  if (o.body == "ball") {
    return ConvexBody::ball(o.d == 0 ? 2 : o.d);
  }
  if (o.axes.empty()) throw ConfigError("--body ellipsoid needs --axes");
  auto body = ConvexBody::ellipsoid(o.axes);
  if (o.d != 0 && o.d != body.dim()) throw ConfigError("--d does not match the number of --axes");
  return body;
}

}  // namespace detail

inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  CLI::App app{"Monte Carlo experiments on random polytopes inscribed in smooth bodies", "polylab"};
  app.require_subcommand(1);
  detail::CommandOptions o;

  auto add_seed_threads = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Master seed (overrides POLYLAB_SEED and config)");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", o.out, "Output directory");
    sub->add_flag("--check", o.check, "Exit with status 3 when acceptance thresholds fail");
  };
  auto add_body = [&](CLI::App* sub) {
    sub->add_option("--body", o.body, "ball or ellipsoid")->check(CLI::IsMember({"ball", "ellipsoid"}));
    sub->add_option("--d", o.d, "Dimension")->check(CLI::Range(kMinDim, kMaxDim));
    sub->add_option("--axes", o.axes, "Ellipsoid semiaxes")->delimiter(',');
    sub->add_option("--ell", o.ell, "Intrinsic volume index (default d)");
    sub->add_option("--name", o.name, "Artifact name prefix");
  };
  auto add_replicated = [&](CLI::App* sub) {
    add_body(sub);
    add_seed_threads(sub);
    sub->add_option("--n", o.n, "n grid: start:stop:xK, comma list, or single value");
    sub->add_option("--reps", o.reps, "Replications per n");
    sub->add_option("--panel", o.panel, "Kubota panel size when no exact path exists");
  };

  std::vector<std::pair<CLI::App*, ExperimentKind>> subs;
  for (const auto& [kind, about] :
       {std::pair{ExperimentKind::Variance, "Variance of V_ell(K_n) versus n"},
        std::pair{ExperimentKind::MeanDeficit, "Mean of V_ell(K) - V_ell(K_n) versus n"},
        std::pair{ExperimentKind::Clt, "Kolmogorov distance of standardized V_ell(K_n) to N(0,1)"},
        std::pair{ExperimentKind::Containment, "Surface body inside K_n (unit ball)"},
        std::pair{ExperimentKind::EfronStein, "Efron-Stein jackknife n E[(V(K_{n+1}) - V(K_n))^2]"}}) {
    auto* sub = app.add_subcommand(std::string(to_string(kind)), about);
    add_replicated(sub);
    if (kind == ExperimentKind::Containment) {
      sub->add_option("--c-alpha", o.c_alpha, "Surface-body threshold constant");
    }
    subs.emplace_back(sub, kind);
  }
  auto* grass = app.add_subcommand("grassmann", "Angle measure of Haar-random subspaces");
  add_body(grass);
  add_seed_threads(grass);
  grass->add_option("--a", o.a, "Angle grid in radians")->delimiter(',');
  grass->add_option("--samples", o.samples, "Haar samples");
  subs.emplace_back(grass, ExperimentKind::GrassmannAngle);
  auto* caps = app.add_subcommand("caps", "Cap volume versus cap boundary exponents (unit ball)");
  caps->add_option("--d", o.d, "Dimension")->check(CLI::Range(kMinDim, kMaxDim));
  caps->add_option("--eps", o.eps, "Cap size grid")->delimiter(',');
  caps->add_option("--name", o.name, "Artifact name prefix");
  add_seed_threads(caps);
  subs.emplace_back(caps, ExperimentKind::Caps);
  auto* campaign = app.add_subcommand("campaign", "Run every experiment in a JSON campaign file");
  campaign->add_option("--config", o.config, "Campaign file")->required();
  add_seed_threads(campaign);

  std::vector<const char*> argv{"polylab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "polylab: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    auto has = [&](const char* flag) { return chosen->count(flag) > 0; };
    std::optional<std::uint64_t> seed_override;
    if (has("--seed")) {
      seed_override = o.seed;
    } else {
      seed_override = seed_from_env();
    }

    CampaignFile file;
    if (chosen == campaign) {
      file = parse_campaign(read_text_file(o.config));
      if (has("--out")) file.output_dir = o.out;
      if (has("--threads")) file.threads = o.threads;
    } else {
      ExperimentConfig cfg;
      for (const auto& [sub, kind] : subs) {
        if (sub == chosen) cfg.kind = kind;
      }
      cfg.name = o.name.empty() ? std::string(to_string(cfg.kind)) : o.name;
      cfg.body = cfg.kind == ExperimentKind::Caps ? ConvexBody::ball(o.d == 0 ? 2 : o.d)
                                                  : detail::body_from_options(o);
      cfg.ell = o.ell == 0 ? cfg.body.dim() : o.ell;
      if (is_replicated(cfg.kind)) cfg.n_grid = parse_n_grid(o.n);
      cfg.replications = o.reps;
      cfg.panel_size = o.panel;
      cfg.c_alpha = o.c_alpha;
      if (cfg.kind == ExperimentKind::GrassmannAngle) {
        cfg.a_grid = o.a;
        cfg.samples = o.samples;
      }
      if (cfg.kind == ExperimentKind::Caps) cfg.eps_grid = o.eps;
      file.experiments.push_back(cfg);
      file.output_dir = o.out;
      file.threads = o.threads;
    }
    if (seed_override) {
      for (auto& cfg : file.experiments) cfg.master_seed = *seed_override;
    }
    for (const auto& cfg : file.experiments) validate(cfg);

    bool all_passed = true;
    for (const auto& cfg : file.experiments) {
      const Artifacts a = execute(cfg, file.threads);
      write_artifacts(cfg, a, file.output_dir);
      out << cfg.name << ": wrote " << (file.output_dir / (cfg.name + "_summary.json")).string()
          << (a.check.passed() ? "" : " (check failed)") << "\n";
      for (const auto& f : a.check.failures) {
        if (o.check) err << "polylab: " << cfg.name << ": " << f << "\n";
      }
      all_passed = all_passed && a.check.passed();
    }
    return o.check && !all_passed ? kExitCheck : kExitOk;
  } catch (const ConfigError& e) {
    err << "polylab: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "polylab: invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedReference& e) {
    err << "polylab: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "polylab: error: " << e.what() << "\n";
    return kExitInternal;
  }
}

inline int run_command(int argc, char** argv) {
  return run_command(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace polylab
