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

// Convex bodies (balls and axis-aligned ellipsoids), their support functions,
// reference intrinsic volumes, and uniform sampling on their boundaries.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string>
#include <vector>

#include "polylab/errors.hpp"
#include "polylab/quadrature.hpp"
#include "polylab/rng.hpp"

namespace polylab {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 6;

/// Point or direction in R^d, d <= kMaxDim. Storage is inline (no heap).
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                             kMaxDim, kMaxDim>;

inline Vector make_vector(std::initializer_list<double> coords) {
  Vector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v[i++] = c;
  return v;
}

inline Vector unit_vector(int dim, int axis) {
  Vector v = Vector::Zero(dim);
  v[axis] = 1.0;
  return v;
}

/// Volume of the unit d-ball, by the recurrence kappa_d = kappa_{d-2} * 2 pi / d.
constexpr double kappa(int d) {
  if (d < 0) throw ContractViolation("kappa: negative dimension");
  double k = (d % 2 == 0) ? 1.0 : 2.0;
  for (int j = (d % 2 == 0) ? 2 : 3; j <= d; j += 2) k *= 2.0 * std::numbers::pi / j;
  return k;
}

constexpr double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

/// C(d, l) kappa_d / (kappa_l kappa_{d-l}): the Kubota normalization.
constexpr double kubota_prefactor(int d, int ell) {
  return binomial(d, ell) * kappa(d) / (kappa(ell) * kappa(d - ell));
}

enum class BodyKind { Ball, Ellipsoid };

inline std::string to_string(BodyKind kind) {
  return kind == BodyKind::Ball ? "ball" : "ellipsoid";
}

/// A smooth convex body with positive curvature: ball or axis-aligned
/// ellipsoid centred at the origin.
class ConvexBody {
 public:
  static ConvexBody ball(int dim, double radius = 1.0) {
    return ConvexBody(BodyKind::Ball, std::vector<double>(dim < 0 ? 0 : dim, radius), dim);
  }

  static ConvexBody ellipsoid(std::vector<double> semiaxes) {
    const int dim = static_cast<int>(semiaxes.size());
    return ConvexBody(BodyKind::Ellipsoid, std::move(semiaxes), dim);
  }

  BodyKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  const std::vector<double>& semiaxes() const noexcept { return semiaxes_; }
  double radius() const noexcept { return semiaxes_.front(); }
  double min_semiaxis() const { return *std::min_element(semiaxes_.begin(), semiaxes_.end()); }
  double max_semiaxis() const { return *std::max_element(semiaxes_.begin(), semiaxes_.end()); }

  bool operator==(const ConvexBody&) const = default;

 private:
  ConvexBody(BodyKind kind, std::vector<double> semiaxes, int dim)
      : kind_(kind), dim_(dim), semiaxes_(std::move(semiaxes)) {
    if (dim_ < kMinDim || dim_ > kMaxDim) {
      throw ContractViolation("ConvexBody: dimension must lie in [2, 6], got " +
                              std::to_string(dim_));
    }
    for (double a : semiaxes_) {
      if (!(a > 0.0) || !std::isfinite(a)) {
        throw ContractViolation("ConvexBody: semiaxes must be positive and finite");
      }
    }
  }

  BodyKind kind_;
  int dim_;
  std::vector<double> semiaxes_;
};

inline void require_unit(const Vector& u, const char* who) {
  if (std::abs(u.norm() - 1.0) > 1e-10) {
    throw ContractViolation(std::string(who) + ": direction must have unit norm");
  }
}

/// h_K(u) = sup <x, u> over K, i.e. sqrt(sum a_i^2 u_i^2).
inline double support_function(const ConvexBody& body, const Vector& u) {
  if (u.size() != body.dim()) throw ContractViolation("support_function: dimension mismatch");
  require_unit(u, "support_function");
  double s = 0.0;
  for (int i = 0; i < body.dim(); ++i) {
    const double t = body.semiaxes()[i] * u[i];
    s += t * t;
  }
  return std::sqrt(s);
}

/// Uniform point on S^{d-1} by normalizing a standard Gaussian vector.
inline Vector sample_sphere(int d, RngStream& rng) {
  if (d < 1 || d > kMaxDim) throw ContractViolation("sample_sphere: bad dimension");
  Vector g(d);
  for (;;) {
    for (int i = 0; i < d; ++i) g[i] = rng.normal();
    const double r = g.norm();
    if (r > 1e-150) return g / r;
  }
}

/// Uniform point on the boundary with respect to surface measure.
///
/// Ellipsoids use rejection from the sphere: x = A u is accepted with
/// probability a_min * |A^{-1} u|, the surface-area element of u -> A u
/// relative to its maximum.
inline Vector sample_boundary(const ConvexBody& body, RngStream& rng) {
  const int d = body.dim();
  if (body.kind() == BodyKind::Ball) return body.radius() * sample_sphere(d, rng);
  const auto& a = body.semiaxes();
  const double a_min = body.min_semiaxis();
  for (;;) {
    const Vector u = sample_sphere(d, rng);
    double q = 0.0;
    for (int i = 0; i < d; ++i) q += (u[i] / a[i]) * (u[i] / a[i]);
    if (rng.uniform() < a_min * std::sqrt(q)) {
      Vector x(d);
      for (int i = 0; i < d; ++i) x[i] = a[i] * u[i];
      return x;
    }
  }
}

/// E|M g| for g standard Gaussian in R^d and M = diag(m).
///
/// Uses |y| = pi^{-1/2} int_0^inf (1 - e^{-t|y|^2}) t^{-3/2} dt / 2 and the
/// Gaussian Laplace transform, with t = (s / (1 - s))^2 mapping to [0, 1].
inline double gaussian_norm_mean(const std::vector<double>& m) {
  double sum_sq = 0.0;
  for (double x : m) sum_sq += x * x;
  auto integrand = [&](double s) {
    if (s <= 0.0) return sum_sq;
    if (s >= 1.0) return 1.0;
    const double r = s / (1.0 - s);
    const double t = r * r;
    double log_prod = 0.0;
    for (double x : m) log_prod += std::log1p(2.0 * t * x * x);
    return -std::expm1(-0.5 * log_prod) / (s * s);
  };
  return adaptive_simpson(integrand, 0.0, 1.0, {.absolute = 1e-14, .relative = 1e-13}) /
         std::sqrt(std::numbers::pi);
}

/// Surface area of the ellipsoid: prod(a) * |S^{d-1}| * E|A^{-1} g| / E|g|.
inline double ellipsoid_surface_area(const std::vector<double>& semiaxes) {
  const int d = static_cast<int>(semiaxes.size());
  double prod = 1.0;
  std::vector<double> inv(semiaxes.size());
  for (std::size_t i = 0; i < semiaxes.size(); ++i) {
    prod *= semiaxes[i];
    inv[i] = 1.0 / semiaxes[i];
  }
  const std::vector<double> ones(semiaxes.size(), 1.0);
  return prod * d * kappa(d) * gaussian_norm_mean(inv) / gaussian_norm_mean(ones);
}

/// Exact intrinsic volume V_ell(K) where a closed form or a one-dimensional
/// quadrature exists. Ellipsoids support ell = d and ell = d - 1 only.
inline double reference_intrinsic_volume(const ConvexBody& body, int ell) {
  const int d = body.dim();
  if (ell < 1 || ell > d) throw ContractViolation("reference_intrinsic_volume: ell out of range");
  if (body.kind() == BodyKind::Ball) {
    return binomial(d, ell) * kappa(d) / kappa(d - ell) * std::pow(body.radius(), ell);
  }
  if (ell == d) {
    double v = kappa(d);
    for (double a : body.semiaxes()) v *= a;
    return v;
  }
  if (ell == d - 1) return 0.5 * ellipsoid_surface_area(body.semiaxes());
  throw UnsupportedReference("reference_intrinsic_volume: no exact route for ellipsoid with d=" +
                             std::to_string(d) + ", ell=" + std::to_string(ell));
}

}  // namespace polylab
