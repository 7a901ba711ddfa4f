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

// Intrinsic volumes of polytopes: exact facet formulas for V_d and V_{d-1},
// the edge formula for V_1 in R^3, and the Kubota projection average for
// everything else.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "polylab/errors.hpp"
#include "polylab/geometry.hpp"
#include "polylab/hull.hpp"
#include "polylab/rng.hpp"

namespace polylab {

/// An ell-dimensional linear subspace of R^d; basis vectors are the columns.
struct Subspace {
  int ambient_dim = 0;
  int dim = 0;
  Matrix basis;
};

/// A fixed set of Haar-random subspaces discretizing the Grassmannian.
/// Subspace j is drawn from stream (seed, j), so the panel is a function of
/// (d, ell, size, seed).
struct ProjectionPanel {
  int ambient_dim = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  std::vector<Subspace> subspaces;
};

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace detail

/// (d-1)-volume of one boundary simplex, from the Gram determinant of its
/// edge vectors.
inline double piece_volume(const Polytope& p, const FacetPiece& piece) {
  const int d = p.dim();
  if (d == 1) return 1.0;
  const auto& verts = p.vertices();
  const Vector& base = verts[piece.vertex_ids[0]];
  if (d == 2) return (verts[piece.vertex_ids[1]] - base).norm();
  if (d == 3) {
    const Vector a = verts[piece.vertex_ids[1]] - base;
    const Vector b = verts[piece.vertex_ids[2]] - base;
    const double aa = a.squaredNorm(), bb = b.squaredNorm(), ab = a.dot(b);
    return 0.5 * std::sqrt(std::max(0.0, aa * bb - ab * ab));
  }
  Matrix edges(d - 1, d);
  for (int i = 1; i < d; ++i) edges.row(i - 1) = (verts[piece.vertex_ids[i]] - base).transpose();
  const Matrix gram = edges * edges.transpose();
  const double det = gram.determinant();
  return det > 0.0 ? std::sqrt(det) / detail::factorial(d - 1) : 0.0;
}

/// Lebesgue volume: cones from the interior point over the boundary simplices.
inline double volume(const Polytope& p) {
  const Vector& c = p.interior_point();
  double v = 0.0;
  for (const auto& piece : p.pieces()) {
    const Facet& f = p.facets()[piece.facet];
    v += (f.offset - f.normal.dot(c)) * piece_volume(p, piece);
  }
  return v / p.dim();
}

/// V_{d-1}: half the surface area.
inline double surface_area_half(const Polytope& p) {
  double s = 0.0;
  for (const auto& piece : p.pieces()) s += piece_volume(p, piece);
  return 0.5 * s;
}

/// Haar-distributed subspace: modified Gram-Schmidt (applied twice) on ell
/// standard Gaussian vectors.
inline Subspace sample_grassmannian(int d, int ell, RngStream& rng) {
  if (d < 1 || d > kMaxDim || ell < 1 || ell > d) {
    throw ContractViolation("sample_grassmannian: need 1 <= ell <= d <= 6");
  }
  Subspace s{d, ell, Matrix(d, ell)};
  for (;;) {
    bool ok = true;
    for (int j = 0; j < ell && ok; ++j) {
      Vector g(d);
      for (int i = 0; i < d; ++i) g[i] = rng.normal();
      const double scale = g.norm();
      for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < j; ++k) g -= s.basis.col(k).dot(g) * s.basis.col(k);
      }
      const double len = g.norm();
      if (!(len > 1e-8 * scale)) {
        ok = false;  // breakdown; draw a fresh set
        break;
      }
      s.basis.col(j) = g / len;
    }
    if (ok) return s;
  }
}

inline ProjectionPanel make_panel(int d, int ell, int size, std::uint64_t seed) {
  if (size < 1) throw ContractViolation("make_panel: size must be positive");
  ProjectionPanel panel{d, ell, seed, {}};
  panel.subspaces.reserve(size);
  for (int j = 0; j < size; ++j) {
    if (ell == d) {
      panel.subspaces.push_back(Subspace{d, d, Matrix::Identity(d, d)});
      continue;
    }
    RngStream rng(seed, static_cast<std::uint64_t>(j));
    panel.subspaces.push_back(sample_grassmannian(d, ell, rng));
  }
  return panel;
}

/// Angle between a unit vector and a subspace, in [0, pi/2].
inline double subspace_angle(const Vector& z, const Subspace& L) {
  require_unit(z, "subspace_angle");
  const double c = (L.basis.transpose() * z).norm();
  return std::acos(std::min(1.0, c));
}

/// Orthogonal projection onto L, in L's basis coordinates.
/// Throws DegeneracyError when the image is not full-dimensional in L.
inline Polytope project(const Polytope& p, const Subspace& L) {
  if (L.ambient_dim != p.dim()) throw ContractViolation("project: dimension mismatch");
  if (L.dim == 1) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : p.vertices()) {
      const double t = L.basis.col(0).dot(v);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    return Polytope::segment(lo, hi);
  }
  std::vector<Vector> image;
  image.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) image.push_back(L.basis.transpose() * v);
  return convex_hull(image, L.dim);
}

namespace detail {

inline double projected_volume(const Polytope& p, const Subspace& L) {
  if (L.dim == p.dim()) return volume(p);
  if (L.dim == 1) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : p.vertices()) {
      const double t = L.basis.col(0).dot(v);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    return hi - lo;
  }
  try {
    return volume(project(p, L));
  } catch (const DegeneracyError&) {
    return 0.0;
  }
}

/// vol_ell of the projection of an origin-centred ellipsoid onto L:
/// the image has shape matrix B^T A^2 B.
inline double projected_volume(const ConvexBody& body, const Subspace& L) {
  const int d = body.dim();
  Matrix scaled = L.basis;
  for (int i = 0; i < d; ++i) scaled.row(i) *= body.semiaxes()[i];
  const Matrix shape = scaled.transpose() * scaled;
  return kappa(L.dim) * std::sqrt(std::max(0.0, shape.determinant()));
}

template <class Shape>
Estimate kubota_average(const Shape& shape, int d, int ell, const ProjectionPanel& panel) {
  if (panel.ambient_dim != d || panel.dim != ell) {
    throw ContractViolation("kubota_estimate: panel dimensions do not match");
  }
  const auto m = panel.subspaces.size();
  if (m < 2) throw ContractViolation("kubota_estimate: panel needs at least 2 subspaces");
  // Welford in panel order; the result depends only on (shape, panel).
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double x = projected_volume(shape, panel.subspaces[j]);
    const double delta = x - mean;
    mean += delta / static_cast<double>(j + 1);
    m2 += delta * (x - mean);
  }
  const double pref = kubota_prefactor(d, ell);
  const double sd = std::sqrt(m2 / static_cast<double>(m - 1));
  return {pref * mean, pref * sd / std::sqrt(static_cast<double>(m))};
}

}  // namespace detail

/// Kubota estimate of V_ell: prefactor times the panel mean of projection
/// volumes, with its Monte Carlo standard error.
inline Estimate kubota_estimate(const Polytope& p, int ell, const ProjectionPanel& panel) {
  return detail::kubota_average(p, p.dim(), ell, panel);
}

inline Estimate kubota_estimate(const ConvexBody& body, int ell, const ProjectionPanel& panel) {
  return detail::kubota_average(body, body.dim(), ell, panel);
}

/// V_1 of a polytope in R^3: (1/2pi) sum over edges of length times the
/// exterior dihedral angle.
inline double mean_width_v1_d3(const Polytope& p) {
  if (p.dim() != 3) throw ContractViolation("mean_width_v1_d3: polytope must be 3-dimensional");
  double sum = 0.0;
  const auto& verts = p.vertices();
  for (const auto& r : facet_adjacency(p)) {
    double len = 0.0;
    for (std::size_t i = 0; i < r.vertex_ids.size(); ++i) {
      for (std::size_t j = i + 1; j < r.vertex_ids.size(); ++j) {
        len = std::max(len, (verts[r.vertex_ids[i]] - verts[r.vertex_ids[j]]).norm());
      }
    }
    const double c = p.facets()[r.facet_a].normal.dot(p.facets()[r.facet_b].normal);
    sum += len * std::acos(std::clamp(c, -1.0, 1.0));
  }
  return sum / (2.0 * std::numbers::pi);
}

/// True when V_ell has an exact facet-based formula in dimension d.
constexpr bool has_exact_path(int d, int ell) {
  return ell == d || ell == d - 1 || (ell == 1 && d == 3);
}

inline double intrinsic_volume(const Polytope& p, int ell, const ProjectionPanel* panel = nullptr) {
  const int d = p.dim();
  if (ell < 1 || ell > d) throw ContractViolation("intrinsic_volume: ell out of range");
  if (ell == d) return volume(p);
  if (ell == d - 1) return surface_area_half(p);
  if (ell == 1 && d == 3) return mean_width_v1_d3(p);
  if (panel == nullptr) {
    throw MissingPanel("intrinsic_volume: no exact path for d=" + std::to_string(d) +
                       ", ell=" + std::to_string(ell) + " and no projection panel");
  }
  return kubota_estimate(p, ell, *panel).value;
}

}  // namespace polylab
