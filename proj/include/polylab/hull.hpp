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

// Convex hulls in dimension 2..6 by beneath-beyond insertion.
//
// Points are inserted in input order. Each pending point is kept in the
// outside list of one facet it sees, so an insertion only touches the facets
// visible from the new point. Facets are simplicial during construction;
// coplanar neighbours are merged into polytope facets at the end, with the
// simplicial pieces kept as a triangulation for the measure computations.

#pragma once

#include <algorithm>
#include <array>
#include <climits>
#include <limits>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polylab/errors.hpp"
#include "polylab/geometry.hpp"

namespace polylab {

inline constexpr double kHullTolerance = 1e-9;

struct Facet {
  std::vector<int> vertex_ids;  // sorted, into Polytope::vertices()
  Vector normal;                // outward, unit length
  double offset = 0.0;          // <normal, x> = offset on the facet
};

/// A (d-2)-face shared by two facets.
struct Ridge {
  int facet_a = -1;
  int facet_b = -1;
  std::vector<int> vertex_ids;
};

/// A (d-1)-simplex of the boundary triangulation, belonging to one facet.
struct FacetPiece {
  std::array<int, kMaxDim> vertex_ids{};
  int facet = -1;
};

namespace detail {
class HullBuilder;
}

class Polytope {
 public:
  int dim() const noexcept { return dim_; }
  const std::vector<Vector>& vertices() const noexcept { return vertices_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  /// Boundary triangulation; each piece has dim() vertices.
  const std::vector<FacetPiece>& pieces() const noexcept { return pieces_; }
  const std::vector<Ridge>& ridges() const noexcept { return ridges_; }
  /// Input index of each vertex.
  const std::vector<int>& source_index() const noexcept { return source_index_; }
  /// Vertex centroid.
  const Vector& interior_point() const noexcept { return interior_; }
  /// Largest absolute vertex coordinate; tolerances are relative to it.
  double scale() const noexcept { return scale_; }
  double tolerance() const noexcept { return kHullTolerance * scale_; }

  /// The one-dimensional polytope [lo, hi].
  static Polytope segment(double lo, double hi) {
    Polytope p;
    p.dim_ = 1;
    p.vertices_ = {make_vector({lo}), make_vector({hi})};
    p.source_index_ = {0, 1};
    p.facets_ = {Facet{{0}, make_vector({-1.0}), -lo}, Facet{{1}, make_vector({1.0}), hi}};
    p.pieces_ = {FacetPiece{{0}, 0}, FacetPiece{{1}, 1}};
    p.ridges_ = {};
    p.interior_ = make_vector({0.5 * (lo + hi)});
    p.scale_ = std::max({std::abs(lo), std::abs(hi), 1e-300});
    return p;
  }

 private:
  friend class detail::HullBuilder;

  int dim_ = 0;
  std::vector<Vector> vertices_;
  std::vector<Facet> facets_;
  std::vector<FacetPiece> pieces_;
  std::vector<Ridge> ridges_;
  std::vector<int> source_index_;
  Vector interior_;
  double scale_ = 1.0;
};

namespace detail {

/// Unnormalized normal of the hyperplane through d points: the generalized
/// cross product of the edge vectors. Its norm is (d-1)! times the simplex
/// (d-1)-volume.
inline Vector simplex_normal(std::span<const Vector* const> verts) {
  const int d = static_cast<int>(verts.size());
  if (d == 2) {
    const Vector e = *verts[1] - *verts[0];
    return make_vector({e[1], -e[0]});
  }
  if (d == 3) {
    const Eigen::Vector3d a = (*verts[1] - *verts[0]).head<3>();
    const Eigen::Vector3d b = (*verts[2] - *verts[0]).head<3>();
    return Vector(a.cross(b));
  }
  Matrix edges(d - 1, d);
  for (int i = 1; i < d; ++i) edges.row(i - 1) = (*verts[i] - *verts[0]).transpose();
  Vector n(d);
  Matrix minor(d - 1, d - 1);
  for (int j = 0; j < d; ++j) {
    for (int c = 0, mc = 0; c < d; ++c) {
      if (c == j) continue;
      minor.col(mc++) = edges.col(c);
    }
    const double det = minor.determinant();
    n[j] = (j % 2 == 0) ? det : -det;
  }
  return n;
}

class HullBuilder {
 public:
  HullBuilder(std::span<const Vector> points, int dim) : pts_(points), d_(dim) {
    scale_ = 0.0;
    for (const auto& p : pts_) scale_ = std::max(scale_, p.cwiseAbs().maxCoeff());
    if (scale_ == 0.0) scale_ = 1.0;
    tol_ = kHullTolerance * scale_;
    conflict_.assign(pts_.size(), -1);
    next_outside_.assign(pts_.size(), -1);
    faces_.reserve(4 * d_ * pts_.size() + 16);
  }

  void build() {
    const auto simplex = initial_simplex();
    center_ = Vector::Zero(d_);
    for (int id : simplex) center_ += pts_[id];
    center_ /= static_cast<double>(d_ + 1);

    std::vector<char> in_simplex(pts_.size(), 0);
    for (int id : simplex) in_simplex[id] = 1;
    for (int i = 0; i <= d_; ++i) {
      Face f;
      for (int k = 0, s = 0; k <= d_; ++k) {
        if (k == i) continue;
        f.v[s] = simplex[k];
        f.nb[s] = k;  // facet k omits simplex[k], so it lies across from it
        ++s;
      }
      set_plane(f);
      faces_.push_back(std::move(f));
    }
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i) {
      if (in_simplex[i]) continue;
      for (int f = 0; f <= d_; ++f) {
        if (distance(faces_[f], i) > tol_) {
          assign(i, f);
          break;
        }
      }
    }
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i) {
      if (conflict_[i] >= 0) insert(i);
    }
  }

  Polytope finish() const;

 private:
  struct Face {
    std::array<int, kMaxDim> v{};
    std::array<int, kMaxDim> nb{};  // nb[k] lies across the ridge omitting v[k]
    Vector normal;
    double offset = 0.0;
    int outside = -1;  // head of the intrusive list threaded through next_outside_
    bool alive = true;
    unsigned mark = 0;
  };

  double distance(const Face& f, int point) const {
    return f.normal.dot(pts_[point]) - f.offset;
  }

  void assign(int point, int face) {
    conflict_[point] = face;
    next_outside_[point] = faces_[face].outside;
    faces_[face].outside = point;
  }

  void set_plane(Face& f) const {
    std::array<const Vector*, kMaxDim> vp{};
    for (int k = 0; k < d_; ++k) vp[k] = &pts_[f.v[k]];
    Vector n = simplex_normal(std::span<const Vector* const>(vp.data(), d_));
    const double len = n.norm();
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw DegeneracyError("convex_hull: degenerate facet", static_cast<std::size_t>(d_));
    }
    n /= len;
    double off = n.dot(pts_[f.v[0]]);
    const double c = n.dot(center_);
    if (c > off) {
      n = -n;
      off = -off;
    }
    if (off - n.dot(center_) <= tol_) {
      throw DegeneracyError("convex_hull: facet through interior point",
                            static_cast<std::size_t>(d_));
    }
    f.normal = std::move(n);
    f.offset = off;
  }

  std::vector<int> initial_simplex() const {
    const int n = static_cast<int>(pts_.size());
    if (n < d_ + 1) {
      throw DegeneracyError("convex_hull: need at least dim+1 points",
                            static_cast<std::size_t>(n));
    }
    // Extreme points along +-axes; keep the farthest pair.
    std::vector<int> extremes;
    for (int axis = 0; axis < d_; ++axis) {
      int lo = 0, hi = 0;
      for (int i = 1; i < n; ++i) {
        if (pts_[i][axis] < pts_[lo][axis]) lo = i;
        if (pts_[i][axis] > pts_[hi][axis]) hi = i;
      }
      extremes.push_back(lo);
      extremes.push_back(hi);
    }
    int a = extremes[0], b = extremes[1];
    double best = -1.0;
    for (std::size_t i = 0; i < extremes.size(); ++i) {
      for (std::size_t j = i + 1; j < extremes.size(); ++j) {
        const double dist = (pts_[extremes[i]] - pts_[extremes[j]]).squaredNorm();
        if (dist > best) {
          best = dist;
          a = extremes[i];
          b = extremes[j];
        }
      }
    }
    if (std::sqrt(best) <= tol_) {
      throw DegeneracyError("convex_hull: all points coincide", 1);
    }
    std::vector<int> chosen{a, b};
    std::vector<Vector> basis{(pts_[b] - pts_[a]).normalized()};
    while (static_cast<int>(chosen.size()) < d_ + 1) {
      int arg = -1;
      double far = tol_;
      Vector far_dir;
      for (int i = 0; i < n; ++i) {
        Vector r = pts_[i] - pts_[a];
        for (const auto& e : basis) r -= e.dot(r) * e;
        const double dist = r.norm();
        if (dist > far) {
          far = dist;
          arg = i;
          far_dir = r;
        }
      }
      if (arg < 0) {
        throw DegeneracyError("convex_hull: points are affinely dependent",
                              chosen.size());
      }
      // Re-orthogonalize once against the basis for stability.
      for (const auto& e : basis) far_dir -= e.dot(far_dir) * e;
      basis.push_back(far_dir.normalized());
      chosen.push_back(arg);
    }
    return chosen;
  }

  void insert(int p) {
    ++epoch_;
    const int start = conflict_[p];
    auto& visible = visible_;
    visible.assign(1, start);
    faces_[start].mark = epoch_;
    // Facets the point sees or is coplanar with, grown from the conflict facet.
    for (std::size_t q = 0; q < visible.size(); ++q) {
      const Face& f = faces_[visible[q]];
      for (int k = 0; k < d_; ++k) {
        const int g = f.nb[k];
        if (faces_[g].mark == epoch_) continue;
        if (distance(faces_[g], p) > -tol_) {
          faces_[g].mark = epoch_;
          visible.push_back(g);
        }
      }
    }

    auto& open = open_;
    auto& created = created_;
    open.clear();
    created.clear();
    for (int fid : visible) {
      for (int k = 0; k < d_; ++k) {
        const int g = faces_[fid].nb[k];
        if (faces_[g].mark == epoch_) continue;
        Face nf;
        nf.v = faces_[fid].v;
        nf.v[k] = p;
        nf.nb[k] = g;
        set_plane(nf);
        const int nid = static_cast<int>(faces_.size());
        Face& across = faces_[g];
        for (int j = 0; j < d_; ++j) {
          if (across.nb[j] == fid) {
            across.nb[j] = nid;
            break;
          }
        }
        for (int j = 0; j < d_; ++j) {
          if (j == k) continue;
          Pending pend{{}, nid, j};
          int s = 0;
          for (int m = 0; m < d_; ++m) {
            if (m != j) pend.key[s++] = nf.v[m];
          }
          for (; s < kMaxDim; ++s) pend.key[s] = INT_MAX;
          std::sort(pend.key.begin(), pend.key.begin() + (d_ - 1));
          open.push_back(pend);
        }
        faces_.push_back(std::move(nf));
        created.push_back(nid);
      }
    }
    std::sort(open.begin(), open.end(),
              [](const Pending& x, const Pending& y) { return x.key < y.key; });
    if (open.size() % 2 != 0) throw InvariantError("convex_hull: unmatched horizon ridge");
    for (std::size_t i = 0; i < open.size(); i += 2) {
      if (open[i].key != open[i + 1].key) {
        throw InvariantError("convex_hull: horizon ridges do not pair up");
      }
      faces_[open[i].face].nb[open[i].slot] = open[i + 1].face;
      faces_[open[i + 1].face].nb[open[i + 1].slot] = open[i].face;
    }

    conflict_[p] = -1;
    for (int fid : visible) {
      Face& f = faces_[fid];
      f.alive = false;
      for (int q = f.outside, next = -1; q >= 0; q = next) {
        next = next_outside_[q];
        if (q == p || conflict_[q] != fid) continue;
        conflict_[q] = -1;
        for (int nid : created) {
          if (distance(faces_[nid], q) > tol_) {
            assign(q, nid);
            break;
          }
        }
      }
      f.outside = -1;
    }
  }

  std::span<const Vector> pts_;
  int d_;
  double scale_ = 1.0;
  double tol_ = 0.0;
  Vector center_;
  std::vector<Face> faces_;
  std::vector<int> conflict_;
  std::vector<int> next_outside_;
  unsigned epoch_ = 0;

  struct Pending {
    std::array<int, kMaxDim> key;
    int face;
    int slot;
  };
  std::vector<int> visible_;
  std::vector<int> created_;
  std::vector<Pending> open_;
};

inline Polytope HullBuilder::finish() const {
  // Live simplicial facets, merged into groups of coplanar neighbours.
  std::vector<int> live;
  std::vector<int> live_pos(faces_.size(), -1);
  for (int i = 0; i < static_cast<int>(faces_.size()); ++i) {
    if (faces_[i].alive) {
      live_pos[i] = static_cast<int>(live.size());
      live.push_back(i);
    }
  }
  std::vector<int> parent(live.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int li = 0; li < static_cast<int>(live.size()); ++li) {
    const Face& f = faces_[live[li]];
    for (int k = 0; k < d_; ++k) {
      const Face& g = faces_[f.nb[k]];
      if (!g.alive) throw InvariantError("convex_hull: live facet points to dead neighbour");
      int opposite = -1;
      for (int j = 0; j < d_; ++j) {
        if (g.nb[j] == live[li]) opposite = g.v[j];
      }
      if (opposite < 0) throw InvariantError("convex_hull: asymmetric adjacency");
      if (std::abs(distance(f, opposite)) <= tol_ &&
          std::abs(distance(g, f.v[k])) <= tol_) {
        parent[find(li)] = find(live_pos[f.nb[k]]);
      }
    }
  }

  Polytope out;
  out.dim_ = d_;
  out.scale_ = 0.0;
  std::vector<int> vertex_of(pts_.size(), -1);
  std::vector<int> used;
  used.reserve(live.size() * d_);
  for (int fid : live) {
    for (int k = 0; k < d_; ++k) used.push_back(faces_[fid].v[k]);
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (int src : used) {
    vertex_of[src] = static_cast<int>(out.vertices_.size());
    out.vertices_.push_back(pts_[src]);
    out.source_index_.push_back(src);
    out.scale_ = std::max(out.scale_, pts_[src].cwiseAbs().maxCoeff());
  }
  if (out.scale_ == 0.0) out.scale_ = 1.0;
  out.interior_ = Vector::Zero(d_);
  for (const auto& v : out.vertices_) out.interior_ += v;
  out.interior_ /= static_cast<double>(out.vertices_.size());

  std::vector<int> group_of(live.size(), -1);
  std::vector<Vector> normal_sum;
  for (int li = 0; li < static_cast<int>(live.size()); ++li) {
    const int root = find(li);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<int>(out.facets_.size());
      out.facets_.emplace_back();
      normal_sum.push_back(Vector::Zero(d_));
    }
    const int gid = group_of[root];
    group_of[li] = gid;
    const Face& f = faces_[live[li]];
    FacetPiece piece;
    piece.facet = gid;
    for (int k = 0; k < d_; ++k) {
      piece.vertex_ids[k] = vertex_of[f.v[k]];
      out.facets_[gid].vertex_ids.push_back(vertex_of[f.v[k]]);
    }
    out.pieces_.push_back(piece);
    normal_sum[gid] += f.normal;
  }
  for (std::size_t g = 0; g < out.facets_.size(); ++g) {
    Facet& facet = out.facets_[g];
    auto& ids = facet.vertex_ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    facet.normal = normal_sum[g].normalized();
    facet.offset = -std::numeric_limits<double>::infinity();
    for (int id : ids) facet.offset = std::max(facet.offset, facet.normal.dot(out.vertices_[id]));
  }

  // Ridges between distinct facets, from the simplicial adjacency.
  struct RawRidge {
    std::pair<int, int> facets;
    std::array<int, kMaxDim> ids;
  };
  std::vector<RawRidge> raw;
  raw.reserve(live.size() * d_ / 2);
  for (int li = 0; li < static_cast<int>(live.size()); ++li) {
    const Face& f = faces_[live[li]];
    for (int k = 0; k < d_; ++k) {
      const int other = live_pos[f.nb[k]];
      const int ga = group_of[li];
      const int gb = group_of[other];
      if (ga >= gb) continue;  // once per pair, and skip merged interiors
      RawRidge rr{{ga, gb}, {}};
      for (int j = 0, s = 0; j < d_; ++j) {
        if (j != k) rr.ids[s++] = vertex_of[f.v[j]];
      }
      raw.push_back(rr);
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& x, const auto& y) { return x.facets < y.facets; });
  out.ridges_.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    Ridge r{raw[i].facets.first, raw[i].facets.second, {}};
    std::size_t j = i;
    for (; j < raw.size() && raw[j].facets == raw[i].facets; ++j) {
      r.vertex_ids.insert(r.vertex_ids.end(), raw[j].ids.begin(), raw[j].ids.begin() + (d_ - 1));
    }
    std::sort(r.vertex_ids.begin(), r.vertex_ids.end());
    r.vertex_ids.erase(std::unique(r.vertex_ids.begin(), r.vertex_ids.end()),
                       r.vertex_ids.end());
    out.ridges_.push_back(std::move(r));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Convex hull of points in R^dim, 2 <= dim <= 6.
///
/// Throws DegeneracyError when the points do not span R^dim within the
/// relative tolerance kHullTolerance.
inline Polytope convex_hull(std::span<const Vector> points, int dim) {
  if (dim < kMinDim || dim > kMaxDim) {
    throw ContractViolation("convex_hull: dimension must lie in [2, 6]");
  }
  for (const auto& p : points) {
    if (p.size() != dim) throw ContractViolation("convex_hull: point dimension mismatch");
    if (!p.allFinite()) throw ContractViolation("convex_hull: non-finite coordinate");
  }
  detail::HullBuilder builder(points, dim);
  builder.build();
  return builder.finish();
}

inline bool contains_point(const Polytope& p, const Vector& x) {
  const double tol = p.tolerance();
  for (const auto& f : p.facets()) {
    if (f.normal.dot(x) > f.offset + tol) return false;
  }
  return true;
}

/// Every ridge with its two incident facets, each listed once.
inline const std::vector<Ridge>& facet_adjacency(const Polytope& p) {
  return p.ridges();
}

}  // namespace polylab
