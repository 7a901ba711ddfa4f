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

// Small statistics toolkit: log-log regression, sample moments, and the
// Kolmogorov distance to the standard normal.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "polylab/errors.hpp"

namespace polylab {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (ln x, ln y)
};

/// Ordinary least squares of ln y on ln x.
inline FitResult fit_power_law(std::span<const std::pair<double, double>> xy) {
  if (xy.size() < 3) throw ContractViolation("fit_power_law: need at least 3 points");
  FitResult fit;
  for (const auto& [x, y] : xy) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw ContractViolation("fit_power_law: x and y must be positive");
    }
    fit.points.emplace_back(std::log(x), std::log(y));
  }
  const double m = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [lx, ly] : fit.points) {
    mx += lx;
    my += ly;
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [lx, ly] : fit.points) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
    syy += (ly - my) * (ly - my);
  }
  if (sxx == 0.0) throw ContractViolation("fit_power_law: x values must not all coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (const auto& [lx, ly] : fit.points) {
    const double r = ly - (fit.intercept + fit.slope * lx);
    ssr += r * r;
  }
  fit.slope_stderr = std::sqrt(ssr / (m - 2.0) / sxx);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  return fit;
}

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Unbiased sample variance (two-pass).
inline double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw ContractViolation("sample_variance: need at least 2 samples");
  const double mu = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - mu) * (v - mu);
  return s / static_cast<double>(x.size() - 1);
}

/// Jackknife standard error of the unbiased sample variance.
inline double jackknife_variance_stderr(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3) throw ContractViolation("jackknife_variance_stderr: need at least 3 samples");
  const double mu = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  const double nn = static_cast<double>(n);
  // Leave-one-out: mean shifts by (mu - x_i)/(n-1), and the centred sum of
  // squares loses n/(n-1) (x_i - mu)^2.
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = x[i] - mu;
    loo[i] = (ss - nn / (nn - 1.0) * dev * dev) / (nn - 2.0);
  }
  const double loo_mean = mean(loo);
  double acc = 0.0;
  for (double v : loo) acc += (v - loo_mean) * (v - loo_mean);
  return std::sqrt((nn - 1.0) / nn * acc);
}

inline double sample_skewness(std::span<const double> x) {
  const double mu = mean(x);
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - mu;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

/// Standard normal CDF. Negative arguments are reflected, so
/// normal_cdf(-x) == 1 - normal_cdf(x) holds exactly for x > 0.
inline double normal_cdf(double x) {
  if (x < 0.0) return 1.0 - normal_cdf(-x);
  return 1.0 - 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// sup_u |F_m(u) - cdf(u)| for the empirical CDF F_m of the samples.
template <class Cdf>
double kolmogorov_distance(std::span<const double> samples, Cdf cdf) {
  if (samples.empty()) throw ContractViolation("kolmogorov_distance: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double best = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    best = std::max({best, std::abs((i + 1) / m - f), std::abs(i / m - f)});
  }
  return best;
}

inline double kolmogorov_distance(std::span<const double> samples) {
  return kolmogorov_distance(samples, [](double u) { return normal_cdf(u); });
}

/// Dvoretzky-Kiefer-Wolfowitz radius: P(d_K > eps) <= alpha for m samples.
inline double dkw_radius(std::size_t m, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(m)));
}

}  // namespace polylab
