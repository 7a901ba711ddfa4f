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

// Seeded Monte Carlo campaigns on random polytopes with vertices on the
// boundary of a smooth body.
//
// Every replication draws its points from the stream (master_seed, index)
// where the index depends only on (n, replication), so records are identical
// for any worker count. Aggregation always walks records in (n, replication)
// order.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polylab/errors.hpp"
#include "polylab/geometry.hpp"
#include "polylab/hull.hpp"
#include "polylab/measures.hpp"
#include "polylab/parallel.hpp"
#include "polylab/rng.hpp"
#include "polylab/stats.hpp"
#include "polylab/surface_body.hpp"

namespace polylab {

enum class ExperimentKind { Variance, MeanDeficit, Clt, Containment, GrassmannAngle, EfronStein, Caps };

inline std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Variance: return "variance";
    case ExperimentKind::MeanDeficit: return "mean-deficit";
    case ExperimentKind::Clt: return "clt";
    case ExperimentKind::Containment: return "containment";
    case ExperimentKind::GrassmannAngle: return "grassmann";
    case ExperimentKind::EfronStein: return "efron-stein";
    case ExperimentKind::Caps: return "caps";
  }
  return "unknown";
}

inline std::optional<ExperimentKind> parse_kind(std::string_view s) {
  for (auto k : {ExperimentKind::Variance, ExperimentKind::MeanDeficit, ExperimentKind::Clt,
                 ExperimentKind::Containment, ExperimentKind::GrassmannAngle,
                 ExperimentKind::EfronStein, ExperimentKind::Caps}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// True for kinds that replicate random polytopes.
constexpr bool is_replicated(ExperimentKind kind) {
  return kind != ExperimentKind::GrassmannAngle && kind != ExperimentKind::Caps;
}

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::Variance;
  ConvexBody body = ConvexBody::ball(2);
  int ell = 2;
  std::vector<long> n_grid;
  int replications = 100;
  std::uint64_t master_seed = 0;
  int panel_size = 0;  // 0: an exact path is required
  double c_alpha = 1.0;
  // GrassmannAngle uses body.dim() and ell.
  std::vector<double> a_grid;
  long samples = 1000000;
  // Caps uses body.dim().
  std::vector<double> eps_grid;
};

inline constexpr int kMinReplications = 100;

struct RunRecord {
  long n = 0;
  int replication = 0;
  double value = 0.0;
  std::optional<double> aux;
};

/// Throws ContractViolation (or MissingPanel / UnsupportedReference) when the
/// configuration cannot be run.
inline void validate(const ExperimentConfig& cfg) {
  const int d = cfg.body.dim();
  if (cfg.name.empty()) throw ContractViolation("experiment name must not be empty");
  if (cfg.kind == ExperimentKind::Caps) {
    if (cfg.eps_grid.size() < 3) throw ContractViolation("caps: eps_grid needs >= 3 values");
    return;
  }
  if (cfg.ell < 1 || cfg.ell > d) throw ContractViolation("ell must lie in [1, d]");
  if (cfg.kind == ExperimentKind::GrassmannAngle) {
    if (cfg.a_grid.size() < 3) throw ContractViolation("grassmann: a_grid needs >= 3 values");
    for (double a : cfg.a_grid) {
      if (!(a > 0.0 && a <= 0.5)) throw ContractViolation("grassmann: a must lie in (0, 0.5]");
    }
    if (cfg.samples < 1) throw ContractViolation("grassmann: samples must be positive");
    return;
  }
  if (cfg.n_grid.empty()) throw ContractViolation("n_grid must not be empty");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] < d + 1) throw ContractViolation("n_grid values must be at least d+1");
    if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
      throw ContractViolation("n_grid must be strictly increasing");
    }
    if (cfg.n_grid[i] >= (1L << 31)) throw ContractViolation("n_grid values too large");
  }
  const bool fits = cfg.kind == ExperimentKind::Variance || cfg.kind == ExperimentKind::MeanDeficit ||
                    cfg.kind == ExperimentKind::EfronStein;
  if (fits && cfg.n_grid.size() < 3) {
    throw ContractViolation("n_grid needs at least 3 values for a power-law fit");
  }
  if (cfg.replications < kMinReplications) {
    throw ContractViolation("replications must be at least " + std::to_string(kMinReplications));
  }
  if (cfg.kind == ExperimentKind::Containment) {
    if (cfg.body.kind() != BodyKind::Ball || cfg.body.radius() != 1.0) {
      throw ContractViolation("containment experiments need the unit ball");
    }
    if (!(cfg.c_alpha > 0.0)) throw ContractViolation("c_alpha must be positive");
    return;
  }
  if (!has_exact_path(d, cfg.ell) && cfg.panel_size < 2) {
    throw MissingPanel("ell=" + std::to_string(cfg.ell) + " in d=" + std::to_string(d) +
                       " has no exact path; set panel_size >= 2");
  }
  if (cfg.kind == ExperimentKind::MeanDeficit) {
    (void)reference_intrinsic_volume(cfg.body, cfg.ell);  // throws if unsupported
  }
}

/// Stream index of replication `rep` at sample size n. Mean-deficit runs share
/// one stream per replication across all n (common random numbers: K_n and
/// K_{2n} share their first n points); other kinds use disjoint streams.
inline std::uint64_t stream_index(ExperimentKind kind, long n, int rep) {
  const auto r = static_cast<std::uint64_t>(static_cast<std::uint32_t>(rep));
  if (kind == ExperimentKind::MeanDeficit) return r;
  return (static_cast<std::uint64_t>(n) << 32) | r;
}

inline std::uint64_t panel_seed(std::uint64_t master_seed) {
  return mix64(master_seed ^ 0x70616e656c5eedULL);
}

/// A validated configuration plus everything shared by its replications.
/// Several intrinsic volumes can be measured on the same hulls.
struct PreparedExperiment {
  ExperimentConfig config;
  std::vector<int> ells;
  std::vector<std::optional<ProjectionPanel>> panels;  // one per ell
};

inline PreparedExperiment prepare(const ExperimentConfig& cfg, std::vector<int> ells = {}) {
  if (ells.empty()) ells.push_back(cfg.ell);
  PreparedExperiment prep{cfg, std::move(ells), {}};
  for (int ell : prep.ells) {
    ExperimentConfig single = cfg;
    single.ell = ell;
    validate(single);
    const int d = cfg.body.dim();
    if (is_replicated(cfg.kind) && cfg.kind != ExperimentKind::Containment &&
        !has_exact_path(d, ell)) {
      prep.panels.emplace_back(make_panel(d, ell, cfg.panel_size, panel_seed(cfg.master_seed)));
    } else {
      prep.panels.emplace_back(std::nullopt);
    }
  }
  return prep;
}

namespace detail {

struct ReplicationValues {
  std::vector<double> value;
  std::vector<std::optional<double>> aux;
};

inline ReplicationValues measure_once(const PreparedExperiment& prep, long n,
                                      std::uint64_t stream) {
  const auto& cfg = prep.config;
  const int d = cfg.body.dim();
  const bool extra = cfg.kind == ExperimentKind::EfronStein;
  RngStream rng(cfg.master_seed, stream);
  std::vector<Vector> pts;
  pts.reserve(n + 1);
  for (long i = 0; i < n + (extra ? 1 : 0); ++i) pts.push_back(sample_boundary(cfg.body, rng));

  ReplicationValues out;
  const Polytope hull = convex_hull(std::span<const Vector>(pts.data(), n), d);
  if (cfg.kind == ExperimentKind::Containment) {
    const bool ok = contains_surface_body(hull, tau_threshold(n, cfg.c_alpha));
    out.value.assign(prep.ells.size(), ok ? 0.0 : 1.0);
    out.aux.assign(prep.ells.size(), std::nullopt);
    return out;
  }
  std::optional<Polytope> grown;
  if (extra) grown = convex_hull(pts, d);
  for (std::size_t k = 0; k < prep.ells.size(); ++k) {
    const ProjectionPanel* panel = prep.panels[k] ? &*prep.panels[k] : nullptr;
    out.value.push_back(intrinsic_volume(hull, prep.ells[k], panel));
    out.aux.push_back(grown ? std::optional(intrinsic_volume(*grown, prep.ells[k], panel))
                            : std::nullopt);
  }
  return out;
}

inline ReplicationValues measure_replication(const PreparedExperiment& prep, long n, int rep) {
  const std::uint64_t stream = stream_index(prep.config.kind, n, rep);
  try {
    return measure_once(prep, n, stream);
  } catch (const DegeneracyError&) {
    // Probability zero for boundary samples; one retry on a sibling stream.
    return measure_once(prep, n, stream | (1ULL << 63));
  }
}

}  // namespace detail

/// One replication: hull of n boundary points and its intrinsic volume.
/// For Containment, value is 1 when the surface body escapes the hull.
inline RunRecord run_replication(const PreparedExperiment& prep, long n, int rep) {
  const auto v = detail::measure_replication(prep, n, rep);
  return {n, rep, v.value.front(), v.aux.front()};
}

inline RunRecord run_replication(const ExperimentConfig& cfg, long n, int rep) {
  return run_replication(prepare(cfg), n, rep);
}

/// Records for every (n, replication), ordered by n then replication; one
/// table per prepared ell.
inline std::vector<std::vector<RunRecord>> collect_records(const PreparedExperiment& prep,
                                                           int threads = 0) {
  const auto& cfg = prep.config;
  const std::size_t reps = static_cast<std::size_t>(cfg.replications);
  const std::size_t total = cfg.n_grid.size() * reps;
  std::vector<detail::ReplicationValues> raw(total);
  parallel_for(total, threads, [&](std::size_t i) {
    raw[i] = detail::measure_replication(prep, cfg.n_grid[i / reps], static_cast<int>(i % reps));
  });
  std::vector<std::vector<RunRecord>> tables(prep.ells.size());
  for (std::size_t k = 0; k < prep.ells.size(); ++k) {
    tables[k].reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
      tables[k].push_back({cfg.n_grid[i / reps], static_cast<int>(i % reps), raw[i].value[k],
                           raw[i].aux[k]});
    }
  }
  return tables;
}

inline std::vector<RunRecord> collect_records(const ExperimentConfig& cfg, int threads = 0) {
  return std::move(collect_records(prepare(cfg), threads).front());
}

namespace detail {

/// Values grouped by n, in grid order.
inline std::vector<std::pair<long, std::vector<double>>> group_by_n(
    std::span<const RunRecord> records) {
  std::vector<std::pair<long, std::vector<double>>> groups;
  for (const auto& r : records) {
    if (groups.empty() || groups.back().first != r.n) groups.emplace_back(r.n, std::vector<double>{});
    groups.back().second.push_back(r.value);
  }
  return groups;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Variance

inline double variance_exponent(int d) { return -(d + 3.0) / (d - 1.0); }

struct VarianceRow {
  long n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double variance_stderr = 0.0;
};

struct VarianceReport {
  FitResult fit;
  std::vector<VarianceRow> rows;
  std::vector<std::string> warnings;
  std::vector<RunRecord> records;
};

inline constexpr double kVarianceFloor = 1e-28;

inline VarianceReport variance_from_records(std::vector<RunRecord> records) {
  VarianceReport rep;
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, values] : detail::group_by_n(records)) {
    VarianceRow row{n, mean(values), sample_variance(values), jackknife_variance_stderr(values)};
    rep.rows.push_back(row);
    if (row.variance < kVarianceFloor) {
      rep.warnings.push_back("n=" + std::to_string(n) + ": variance below 1e-28, dropped from fit");
      continue;
    }
    pts.emplace_back(static_cast<double>(n), row.variance);
  }
  rep.fit = fit_power_law(pts);
  rep.records = std::move(records);
  return rep;
}

/// Sample variance of V_ell(K_n) per n and its log-log slope in n.
inline VarianceReport run_variance_experiment(const ExperimentConfig& cfg, int threads = 0) {
  return variance_from_records(collect_records(cfg, threads));
}

// ---------------------------------------------------------------------------
// Mean deficit

inline double mean_deficit_exponent(int d) { return -2.0 / (d - 1.0); }

struct DeficitRow {
  long n = 0;
  double deficit = 0.0;
  double stderr_of_mean = 0.0;
  double scaled = 0.0;  // deficit * n^{2/(d-1)}
};

struct MeanDeficitReport {
  FitResult fit;
  std::vector<DeficitRow> rows;
  double reference = 0.0;
  /// deficit * n^{2/(d-1)} at the largest n; estimates the limiting constant.
  double plateau = 0.0;
  double plateau_previous = 0.0;  // same at the second-largest n
  std::vector<RunRecord> records;
};

inline MeanDeficitReport mean_deficit_from_records(const ExperimentConfig& cfg,
                                                   std::vector<RunRecord> records) {
  MeanDeficitReport rep;
  const int d = cfg.body.dim();
  rep.reference = reference_intrinsic_volume(cfg.body, cfg.ell);
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, values] : detail::group_by_n(records)) {
    std::vector<double> deficits;
    for (double v : values) deficits.push_back(rep.reference - v);
    const double m = mean(deficits);
    const double se = std::sqrt(sample_variance(deficits) / static_cast<double>(deficits.size()));
    rep.rows.push_back({n, m, se, m * std::pow(static_cast<double>(n), 2.0 / (d - 1.0))});
    pts.emplace_back(static_cast<double>(n), m);
  }
  rep.fit = fit_power_law(pts);
  rep.plateau = rep.rows.back().scaled;
  rep.plateau_previous = rep.rows.size() > 1 ? rep.rows[rep.rows.size() - 2].scaled : rep.plateau;
  rep.records = std::move(records);
  return rep;
}

/// Mean of V_ell(K) - V_ell(K_n) per n and its log-log slope in n.
inline MeanDeficitReport run_mean_deficit_experiment(const ExperimentConfig& cfg, int threads = 0) {
  validate(cfg);
  return mean_deficit_from_records(cfg, collect_records(cfg, threads));
}

// ---------------------------------------------------------------------------
// Central limit behaviour

struct CltRow {
  long n = 0;
  double kolmogorov = 0.0;  // d_K of the standardized values to N(0, 1)
  double skewness = 0.0;
};

struct CltResult {
  std::vector<CltRow> per_n;
  std::string standardization = "SampleMoments";
  std::vector<RunRecord> records;
};

/// Standardizes each n-group by its sample mean and standard deviation.
inline CltResult clt_from_records(std::vector<RunRecord> records) {
  CltResult res;
  for (const auto& [n, values] : detail::group_by_n(records)) {
    const double mu = mean(values);
    const double sd = std::sqrt(sample_variance(values));
    if (!(sd > 0.0)) {
      throw ContractViolation("clt: zero sample variance at n=" + std::to_string(n));
    }
    std::vector<double> w;
    w.reserve(values.size());
    for (double v : values) w.push_back((v - mu) / sd);
    res.per_n.push_back({n, kolmogorov_distance(w), sample_skewness(values)});
  }
  res.records = std::move(records);
  return res;
}

inline CltResult run_clt_experiment(const ExperimentConfig& cfg, int threads = 0) {
  return clt_from_records(collect_records(cfg, threads));
}

// ---------------------------------------------------------------------------
// Surface-body containment

struct ContainmentRow {
  long n = 0;
  double tau = 0.0;
  double radius = 0.0;
  double failure = 0.0;  // fraction of replications with K(s >= tau) not inside K_n
};

struct ContainmentReport {
  std::vector<ContainmentRow> rows;
  std::vector<RunRecord> records;
};

inline ContainmentReport run_containment_experiment(const ExperimentConfig& cfg, int threads = 0) {
  ContainmentReport rep;
  rep.records = collect_records(cfg, threads);
  for (const auto& [n, values] : detail::group_by_n(rep.records)) {
    const double tau = tau_threshold(n, cfg.c_alpha);
    rep.rows.push_back({n, tau, surface_body_radius(tau, cfg.body.dim()), mean(values)});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Grassmannian angle measure

struct GrassmannRow {
  double a = 0.0;
  long hits = 0;
  double probability = 0.0;
};

struct GrassmannReport {
  FitResult fit;
  std::vector<GrassmannRow> rows;
  std::vector<std::string> warnings;
};

/// Estimates nu_ell{L : angle(e_1, L) <= a} from Haar samples and fits its
/// log-log slope in a.
inline GrassmannReport run_grassmannian_experiment(int d, int ell, std::span<const double> a_grid,
                                                   long samples, RngStream& rng) {
  if (samples < 1) throw ContractViolation("grassmann: samples must be positive");
  for (double a : a_grid) {
    if (!(a > 0.0 && a <= 0.5)) throw ContractViolation("grassmann: a must lie in (0, 0.5]");
  }
  const Vector z = unit_vector(d, 0);
  std::vector<long> hits(a_grid.size(), 0);
  for (long s = 0; s < samples; ++s) {
    const double angle = subspace_angle(z, sample_grassmannian(d, ell, rng));
    for (std::size_t i = 0; i < a_grid.size(); ++i) hits[i] += angle <= a_grid[i];
  }
  GrassmannReport rep;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    const double p = static_cast<double>(hits[i]) / static_cast<double>(samples);
    rep.rows.push_back({a_grid[i], hits[i], p});
    if (hits[i] == 0) {
      rep.warnings.push_back("a=" + std::to_string(a_grid[i]) + ": no hits, dropped from fit");
      continue;
    }
    pts.emplace_back(a_grid[i], p);
  }
  rep.fit = fit_power_law(pts);
  return rep;
}

inline GrassmannReport run_grassmannian_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  RngStream rng(cfg.master_seed, 0);
  return run_grassmannian_experiment(cfg.body.dim(), cfg.ell, cfg.a_grid, cfg.samples, rng);
}

// ---------------------------------------------------------------------------
// Efron-Stein jackknife

struct EfronSteinRow {
  long n = 0;
  double jackknife = 0.0;  // n * mean((V(K_{n+1}) - V(K_n))^2)
  double variance = 0.0;
  double ratio = 0.0;
};

struct EfronSteinReport {
  FitResult fit;
  std::vector<EfronSteinRow> rows;
  std::vector<RunRecord> records;
};

/// n * mean((aux - value)^2) over records that share one n.
inline double efron_stein_statistic(std::span<const RunRecord> records) {
  if (records.empty()) throw ContractViolation("efron_stein_statistic: no records");
  double acc = 0.0;
  for (const auto& r : records) {
    if (!r.aux) throw ContractViolation("efron_stein_statistic: record without V(K_{n+1})");
    const double diff = *r.aux - r.value;
    acc += diff * diff;
  }
  return static_cast<double>(records.front().n) * acc / static_cast<double>(records.size());
}

inline EfronSteinReport efron_stein_from_records(std::vector<RunRecord> records) {
  EfronSteinReport rep;
  std::vector<std::pair<double, double>> pts;
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    while (end < records.size() && records[end].n == records[begin].n) ++end;
    const std::span<const RunRecord> group(records.data() + begin, end - begin);
    std::vector<double> values;
    for (const auto& r : group) values.push_back(r.value);
    const double j = efron_stein_statistic(group);
    const double var = sample_variance(values);
    rep.rows.push_back({group.front().n, j, var, var > 0.0 ? j / var : 0.0});
    if (j > 0.0) pts.emplace_back(static_cast<double>(group.front().n), j);
    begin = end;
  }
  rep.fit = fit_power_law(pts);
  rep.records = std::move(records);
  return rep;
}

/// Paired samples: V(K_n) and V(K_{n+1}) share their first n points.
inline EfronSteinReport efron_stein_estimate(const ExperimentConfig& cfg, int threads = 0) {
  if (cfg.kind != ExperimentKind::EfronStein) {
    throw ContractViolation("efron_stein_estimate: config kind must be efron-stein");
  }
  return efron_stein_from_records(collect_records(cfg, threads));
}

}  // namespace polylab
