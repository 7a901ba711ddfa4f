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

// Caps, wet parts and surface bodies of the unit ball.
//
// For the ball every s-level and v-level set is a concentric ball, so the
// surface body K(s >= t) is the ball of radius rho(t), where the cap cut off
// by the plane at distance rho carries normalized boundary measure t.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "polylab/errors.hpp"
#include "polylab/geometry.hpp"
#include "polylab/hull.hpp"
#include "polylab/quadrature.hpp"
#include "polylab/stats.hpp"

namespace polylab {

/// The cap {x in B^d : <x, e> >= rho}; its height is 1 - rho.
struct CapSpec {
  int dim = 2;
  double rho = 0.0;
};

namespace detail {

inline void check_cap(const CapSpec& c) {
  if (c.dim < kMinDim || c.dim > kMaxDim) throw ContractViolation("CapSpec: bad dimension");
  if (!(c.rho >= -1.0 && c.rho <= 1.0)) throw ContractViolation("CapSpec: rho outside [-1, 1]");
}

inline double sin_power(double theta, int p) {
  const double s = std::sin(theta);
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= s;
  return r;
}

/// int_0^pi sin^{d-2}, the normalizer of the polar-angle density on S^{d-1}.
inline double polar_normalizer(int d) {
  static const auto table = [] {
    std::array<double, kMaxDim + 1> t{};
    for (int k = kMinDim; k <= kMaxDim; ++k) {
      t[k] = adaptive_simpson([k](double th) { return sin_power(th, k - 2); }, 0.0,
                              std::numbers::pi, {.absolute = 1e-14, .relative = 1e-14});
    }
    return t;
  }();
  return table[d];
}

}  // namespace detail

/// Normalized boundary measure of the cap: the fraction of S^{d-1} with
/// <u, e> >= rho.
inline double boundary_cap_measure(const CapSpec& c) {
  detail::check_cap(c);
  // arccos(rho) written via the height, accurate for thin caps.
  const double height = 1.0 - c.rho;
  const double theta = 2.0 * std::asin(std::min(1.0, std::sqrt(0.5 * height)));
  if (c.dim == 2) return theta / std::numbers::pi;
  const int p = c.dim - 2;
  const double part = adaptive_simpson([p](double th) { return detail::sin_power(th, p); }, 0.0,
                                       theta, {.absolute = 1e-12, .relative = 1e-12});
  return part / detail::polar_normalizer(c.dim);
}

/// Volume of the cap, int_rho^1 kappa_{d-1} (1 - t^2)^{(d-1)/2} dt.
inline double cap_volume(const CapSpec& c) {
  detail::check_cap(c);
  const int d = c.dim;
  const double k = kappa(d - 1);
  // t = 1 - s, so 1 - t^2 = s (2 - s) without cancellation near the pole.
  auto slice = [d, k](double s) { return k * std::pow(std::max(0.0, s * (2.0 - s)), 0.5 * (d - 1)); };
  return adaptive_simpson(slice, 0.0, 1.0 - c.rho, {.absolute = 1e-12, .relative = 1e-12});
}

/// Radius of the surface body K(s >= t) of the unit ball, 0 <= t <= 1/2.
inline double surface_body_radius(double t, int d) {
  if (!(t >= 0.0 && t <= 0.5)) throw ContractViolation("surface_body_radius: t outside [0, 1/2]");
  if (d < kMinDim || d > kMaxDim) throw ContractViolation("surface_body_radius: bad dimension");
  double lo = 0.0, hi = 1.0;  // measure(lo) = 1/2 >= t >= measure(hi) = 0
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (boundary_cap_measure({d, mid}) > t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// tau_n = c_alpha ln(n) / n, capped at 1/2.
inline double tau_threshold(long n, double c_alpha) {
  if (n < 2) throw ContractViolation("tau_threshold: n must be at least 2");
  if (!(c_alpha > 0.0)) throw ContractViolation("tau_threshold: c_alpha must be positive");
  const double nn = static_cast<double>(n);
  return std::min(0.5, c_alpha * std::log(nn) / nn);
}

/// Whether K(s >= t) of the unit ball lies inside the polytope: the centre
/// is inside and every facet hyperplane is at distance >= rho(t).
inline bool contains_surface_body(const Polytope& p, double t) {
  const double radius = surface_body_radius(t, p.dim());
  if (!contains_point(p, Vector::Zero(p.dim()))) return false;
  const double tol = p.tolerance();
  for (const auto& f : p.facets()) {
    if (f.offset < radius - tol) return false;
  }
  return true;
}

namespace detail {

/// Height h in (0, 2] with g(h) = target, for g increasing in h.
template <class G>
double solve_height(G g, double target) {
  double lo = 0.0, hi = 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

struct CapExponents {
  FitResult boundary_vs_volume;  // slope (d-1)/(d+1)
  FitResult volume_vs_boundary;  // slope (d+1)/(d-1)
};

/// Fits the power laws linking cap volume and cap boundary measure.
///
/// For each eps: the eps-cap (volume eps) is located and its boundary
/// measure recorded; and the eps-boundary cap (boundary measure eps) is
/// located and its volume recorded.
inline CapExponents cap_exponent_check(int d, std::span<const double> eps_grid) {
  if (d < kMinDim || d > kMaxDim) throw ContractViolation("cap_exponent_check: bad dimension");
  std::vector<std::pair<double, double>> forward, reverse;
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps <= 1e-2)) {
      throw ContractViolation("cap_exponent_check: eps must lie in (0, 1e-2]");
    }
    const double h_vol =
        detail::solve_height([d](double h) { return cap_volume({d, 1.0 - h}); }, eps);
    forward.emplace_back(eps, boundary_cap_measure({d, 1.0 - h_vol}));
    const double h_bdry =
        detail::solve_height([d](double h) { return boundary_cap_measure({d, 1.0 - h}); }, eps);
    reverse.emplace_back(eps, cap_volume({d, 1.0 - h_bdry}));
  }
  return {fit_power_law(forward), fit_power_law(reverse)};
}

}  // namespace polylab
