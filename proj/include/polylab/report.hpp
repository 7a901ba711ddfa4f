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

// Serialization of configurations, records and summaries: JSON, CSV and a
// hand-written log-log SVG chart.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polylab/experiments.hpp"
#include "polylab/hull.hpp"
#include "polylab/surface_body.hpp"

namespace polylab {

using Json = nlohmann::ordered_json;

/// Raised on unreadable, unwritable or malformed configuration files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Configuration

inline Json body_to_json(const ConvexBody& body) {
  Json j;
  j["kind"] = to_string(body.kind());
  j["dim"] = body.dim();
  if (body.kind() == BodyKind::Ball) {
    j["radius"] = body.radius();
  } else {
    j["semiaxes"] = body.semiaxes();
  }
  return j;
}

inline ConvexBody body_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "ball") return ConvexBody::ball(j.at("dim").get<int>(), j.value("radius", 1.0));
  if (kind == "ellipsoid") {
    auto body = ConvexBody::ellipsoid(j.at("semiaxes").get<std::vector<double>>());
    if (j.contains("dim") && j["dim"].get<int>() != body.dim()) {
      throw ConfigError("body: dim does not match the number of semiaxes");
    }
    return body;
  }
  throw ConfigError("body: unknown kind '" + kind + "'");
}

inline Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["name"] = cfg.name;
  j["kind"] = to_string(cfg.kind);
  j["body"] = body_to_json(cfg.body);
  j["ell"] = cfg.ell;
  j["n_grid"] = cfg.n_grid;
  j["replications"] = cfg.replications;
  j["master_seed"] = cfg.master_seed;
  j["panel_size"] = cfg.panel_size;
  j["c_alpha"] = cfg.c_alpha;
  j["a_grid"] = cfg.a_grid;
  j["samples"] = cfg.samples;
  j["eps_grid"] = cfg.eps_grid;
  return j;
}

/// Missing fields take their ExperimentConfig defaults; name, kind and body
/// are required.
inline ExperimentConfig config_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ConfigError("experiment entry must be an object");
    ExperimentConfig cfg;
    cfg.name = j.at("name").get<std::string>();
    const auto kind = parse_kind(j.at("kind").get<std::string>());
    if (!kind) throw ConfigError("unknown experiment kind '" + j["kind"].get<std::string>() + "'");
    cfg.kind = *kind;
    cfg.body = body_from_json(j.at("body"));
    cfg.ell = j.value("ell", cfg.body.dim());
    cfg.n_grid = j.value("n_grid", cfg.n_grid);
    cfg.replications = j.value("replications", cfg.replications);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.panel_size = j.value("panel_size", cfg.panel_size);
    cfg.c_alpha = j.value("c_alpha", cfg.c_alpha);
    cfg.a_grid = j.value("a_grid", cfg.a_grid);
    cfg.samples = j.value("samples", cfg.samples);
    cfg.eps_grid = j.value("eps_grid", cfg.eps_grid);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw ConfigError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr const char* kCsvHeader = "experiment,body,d,ell,n,replication,value,aux";

inline std::string format_csv(const ExperimentConfig& cfg, std::span<const RunRecord> records) {
  std::string out = kCsvHeader;
  out += '\n';
  const std::string prefix = cfg.name + ',' + to_string(cfg.body.kind()) + ',' +
                             std::to_string(cfg.body.dim()) + ',' + std::to_string(cfg.ell) + ',';
  for (const auto& r : records) {
    out += prefix;
    out += std::to_string(r.n) + ',' + std::to_string(r.replication) + ',';
    out += format_g17(r.value);
    out += ',';
    if (r.aux) out += format_g17(*r.aux);
    out += '\n';
  }
  return out;
}

inline void emit_csv(const ExperimentConfig& cfg, std::span<const RunRecord> records,
                     const std::filesystem::path& path) {
  write_text_file(path, format_csv(cfg, records));
}

// ---------------------------------------------------------------------------
// SVG

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

/// Log-log scatter of fit.points with the fitted line and, when given, a
/// dashed reference line of slope `reference_slope` through the centroid.
inline std::string format_svg_loglog(const FitResult& fit, std::optional<double> reference_slope,
                                     const std::string& title = "",
                                     const std::string& x_label = "log n",
                                     const std::string& y_label = "log y") {
  if (fit.points.size() < 3) throw ContractViolation("emit_svg_loglog: needs at least 3 points");
  constexpr double W = 640, H = 480, L = 70, R = 20, T = 40, B = 60;
  double x0 = fit.points.front().first, x1 = x0, y0 = fit.points.front().second, y1 = y0;
  for (const auto& [x, y] : fit.points) {
    x0 = std::min(x0, x), x1 = std::max(x1, x);
    y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  const double padx = std::max(0.05 * (x1 - x0), 1e-9), pady = std::max(0.05 * (y1 - y0), 1e-9);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  auto num = [](double v) { return format_fixed(v, 2); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<rect class=\"frame\" x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R
    << "\" height=\"" << H - T - B << "\" fill=\"none\" stroke=\"#444\"/>\n";
  if (!title.empty()) s << "<text x=\"" << L << "\" y=\"24\">" << title << "</text>\n";
  s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 20 << "\" text-anchor=\"middle\">"
    << x_label << "</text>\n";
  s << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 18 " << (T + H - B) / 2
    << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  for (double x : {x0 + padx, x1 - padx}) {
    s << "<text class=\"tick\" x=\"" << num(px(x)) << "\" y=\"" << H - B + 18
      << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  for (double y : {y0 + pady, y1 - pady}) {
    s << "<text class=\"tick\" x=\"" << L - 6 << "\" y=\"" << num(py(y) + 4)
      << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  // Lines are clipped to the plot frame.
  s << "<clipPath id=\"plot\"><rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R
    << "\" height=\"" << H - T - B << "\"/></clipPath>\n";
  auto line = [&](const char* cls, double slope, double intercept, const char* extra) {
    s << "<line class=\"" << cls << "\" clip-path=\"url(#plot)\" x1=\"" << num(px(x0))
      << "\" y1=\"" << num(py(intercept + slope * x0)) << "\" x2=\"" << num(px(x1)) << "\" y2=\""
      << num(py(intercept + slope * x1)) << "\" " << extra << "/>\n";
  };
  line("fit", fit.slope, fit.intercept, "stroke=\"#c0392b\" stroke-width=\"2\"");
  if (reference_slope) {
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : fit.points) mx += x, my += y;
    mx /= static_cast<double>(fit.points.size());
    my /= static_cast<double>(fit.points.size());
    line("reference", *reference_slope, my - *reference_slope * mx,
         "stroke=\"#555\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
  }
  for (const auto& [x, y] : fit.points) {
    s << "<circle class=\"point\" cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
      << "\" r=\"4\" fill=\"#2c3e50\"/>\n";
  }
  s << "<text class=\"slope\" x=\"" << W - R - 8 << "\" y=\"" << T + 20
    << "\" text-anchor=\"end\">slope=" << num(fit.slope) << "</text>\n";
  if (reference_slope) {
    s << "<text class=\"reference\" x=\"" << W - R - 8 << "\" y=\"" << T + 38
      << "\" text-anchor=\"end\">reference=" << num(*reference_slope) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

inline void emit_svg_loglog(const FitResult& fit, const std::filesystem::path& path,
                            std::optional<double> reference_slope = std::nullopt,
                            const std::string& title = "") {
  write_text_file(path, format_svg_loglog(fit, reference_slope, title));
}

// ---------------------------------------------------------------------------
// Summaries

inline Json fit_to_json(const FitResult& fit) {
  Json j;
  j["slope"] = fit.slope;
  j["slope_stderr"] = fit.slope_stderr;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  Json pts = Json::array();
  for (const auto& [x, y] : fit.points) pts.push_back({x, y});
  j["points"] = pts;
  return j;
}

inline Json summary_header(const ExperimentConfig& cfg) {
  Json j;
  j["experiment"] = cfg.name;
  j["kind"] = to_string(cfg.kind);
  j["config"] = config_to_json(cfg);
  return j;
}

inline Json summarize(const ExperimentConfig& cfg, const VarianceReport& rep) {
  Json j = summary_header(cfg);
  j["target_slope"] = variance_exponent(cfg.body.dim());
  j["fit"] = fit_to_json(rep.fit);
  for (const auto& r : rep.rows) {
    j["per_n"].push_back({{"n", r.n}, {"mean", r.mean}, {"variance", r.variance},
                          {"variance_stderr", r.variance_stderr}});
  }
  j["warnings"] = rep.warnings;
  return j;
}

inline Json summarize(const ExperimentConfig& cfg, const MeanDeficitReport& rep) {
  Json j = summary_header(cfg);
  j["target_slope"] = mean_deficit_exponent(cfg.body.dim());
  j["reference"] = rep.reference;
  j["fit"] = fit_to_json(rep.fit);
  j["plateau"] = rep.plateau;
  j["plateau_previous"] = rep.plateau_previous;
  for (const auto& r : rep.rows) {
    j["per_n"].push_back({{"n", r.n}, {"deficit", r.deficit}, {"deficit_stderr", r.stderr_of_mean},
                          {"scaled", r.scaled}});
  }
  return j;
}

inline Json summarize(const ExperimentConfig& cfg, const CltResult& res) {
  Json j = summary_header(cfg);
  j["standardization"] = res.standardization;
  for (const auto& r : res.per_n) {
    j["per_n"].push_back({{"n", r.n}, {"d_K", r.kolmogorov}, {"skewness", r.skewness}});
  }
  j["d_K"] = res.per_n.back().kolmogorov;
  return j;
}

inline Json summarize(const ExperimentConfig& cfg, const ContainmentReport& rep) {
  Json j = summary_header(cfg);
  for (const auto& r : rep.rows) {
    j["per_n"].push_back({{"n", r.n}, {"tau", r.tau}, {"radius", r.radius},
                          {"failure_fraction", r.failure}});
  }
  return j;
}

inline Json summarize(const ExperimentConfig& cfg, const GrassmannReport& rep) {
  Json j = summary_header(cfg);
  j["target_slope"] = cfg.body.dim() - cfg.ell;
  j["fit"] = fit_to_json(rep.fit);
  for (const auto& r : rep.rows) {
    j["per_a"].push_back({{"a", r.a}, {"hits", r.hits}, {"probability", r.probability}});
  }
  j["warnings"] = rep.warnings;
  return j;
}

inline Json summarize(const ExperimentConfig& cfg, const EfronSteinReport& rep) {
  Json j = summary_header(cfg);
  j["target_slope"] = variance_exponent(cfg.body.dim());
  j["fit"] = fit_to_json(rep.fit);
  for (const auto& r : rep.rows) {
    j["per_n"].push_back({{"n", r.n}, {"J", r.jackknife}, {"variance", r.variance},
                          {"ratio", r.ratio}});
  }
  return j;
}

inline Json summarize(const ExperimentConfig& cfg, const CapExponents& caps) {
  const double d = cfg.body.dim();
  Json j = summary_header(cfg);
  j["boundary_vs_volume"] = fit_to_json(caps.boundary_vs_volume);
  j["boundary_vs_volume"]["target_slope"] = (d - 1.0) / (d + 1.0);
  j["volume_vs_boundary"] = fit_to_json(caps.volume_vs_boundary);
  j["volume_vs_boundary"]["target_slope"] = (d + 1.0) / (d - 1.0);
  return j;
}

// ---------------------------------------------------------------------------
// Debug dump

inline Json polytope_to_json(const Polytope& p) {
  Json j;
  j["dim"] = p.dim();
  Json verts = Json::array();
  for (const auto& v : p.vertices()) verts.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  j["vertices"] = verts;
  Json facets = Json::array();
  for (const auto& f : p.facets()) {
    facets.push_back({{"vertex_ids", f.vertex_ids},
                      {"normal", std::vector<double>(f.normal.data(), f.normal.data() + f.normal.size())},
                      {"offset", f.offset}});
  }
  j["facets"] = facets;
  return j;
}

}  // namespace polylab
