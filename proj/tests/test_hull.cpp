#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "polylab/hull.hpp"
#include "polylab/measures.hpp"
#include "test_helpers.hpp"

namespace polylab {
namespace {

using testing::cube_corners;
using testing::sphere_points;
using testing::unit_simplex;

void expect_valid(const Polytope& p, std::span<const Vector> input) {
  const double tol = p.tolerance();
  for (const auto& f : p.facets()) {
    EXPECT_NEAR(f.normal.norm(), 1.0, 1e-10);
    EXPECT_GE(static_cast<int>(f.vertex_ids.size()), p.dim());
    for (int id : f.vertex_ids) {
      EXPECT_LE(std::abs(f.normal.dot(p.vertices()[id]) - f.offset), tol);
    }
    EXPECT_GT(f.offset - f.normal.dot(p.interior_point()), 0.0);
  }
  for (const auto& x : input) EXPECT_TRUE(contains_point(p, x));
}

TEST(ConvexHull, Tetrahedron) {
  const auto pts = unit_simplex(3);
  const auto p = convex_hull(pts, 3);
  EXPECT_EQ(p.vertices().size(), 4u);
  EXPECT_EQ(p.facets().size(), 4u);
  expect_valid(p, pts);
}

TEST(ConvexHull, SquareWithCentre) {
  std::vector<Vector> pts = cube_corners(2);
  pts.push_back(make_vector({0.5, 0.5}));
  const auto p = convex_hull(pts, 2);
  EXPECT_EQ(p.vertices().size(), 4u);
  EXPECT_EQ(p.facets().size(), 4u);
  expect_valid(p, pts);
}

TEST(ConvexHull, CirclePointsAreAllExtreme) {
  std::vector<Vector> pts;
  for (int i = 0; i < 100; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 100.0;
    pts.push_back(make_vector({std::cos(t), std::sin(t)}));
  }
  const auto p = convex_hull(pts, 2);
  EXPECT_EQ(p.vertices().size(), 100u);
  EXPECT_EQ(p.facets().size(), 100u);
  expect_valid(p, pts);
}

TEST(ConvexHull, CubeFacetsAreMerged) {
  for (int d = 2; d <= 5; ++d) {
    const auto pts = cube_corners(d);
    const auto p = convex_hull(pts, d);
    EXPECT_EQ(p.vertices().size(), std::size_t{1} << d) << d;
    EXPECT_EQ(p.facets().size(), std::size_t(2 * d)) << d;
    for (const auto& f : p.facets()) EXPECT_EQ(f.vertex_ids.size(), std::size_t{1} << (d - 1));
    expect_valid(p, pts);
  }
}

TEST(ConvexHull, InteriorLatticePointsDiscarded) {
  std::vector<Vector> pts;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j)
      for (int k = 0; k <= 2; ++k) pts.push_back(make_vector({double(i), double(j), double(k)}));
  const auto p = convex_hull(pts, 3);
  EXPECT_EQ(p.vertices().size(), 8u);
  EXPECT_EQ(p.facets().size(), 6u);
  EXPECT_EQ(facet_adjacency(p).size(), 12u);
  expect_valid(p, pts);
}

TEST(ConvexHull, DegenerateInputThrows) {
  std::vector<Vector> flat{make_vector({0, 0, 0}), make_vector({1, 0, 0}), make_vector({0, 1, 0}),
                           make_vector({1, 1, 0}), make_vector({0.3, 0.2, 0})};
  try {
    convex_hull(flat, 3);
    FAIL() << "expected DegeneracyError";
  } catch (const DegeneracyError& e) {
    EXPECT_EQ(e.subset_size(), 3u);
  }
  EXPECT_THROW(convex_hull(std::vector<Vector>{make_vector({0, 0}), make_vector({1, 1})}, 2),
               DegeneracyError);
  const std::vector<Vector> same(5, make_vector({2, 2}));
  EXPECT_THROW(convex_hull(same, 2), DegeneracyError);
}

TEST(ConvexHull, RejectsBadArguments) {
  const auto pts = unit_simplex(2);
  EXPECT_THROW(convex_hull(pts, 3), ContractViolation);
  EXPECT_THROW(convex_hull(pts, 1), ContractViolation);
}

TEST(ContainsPoint, Simplex) {
  const auto pts = unit_simplex(3);
  const auto p = convex_hull(pts, 3);
  EXPECT_TRUE(contains_point(p, make_vector({0.25, 0.25, 0.25})));
  EXPECT_TRUE(contains_point(p, unit_vector(3, 2)));
  EXPECT_FALSE(contains_point(p, 10.0 * unit_vector(3, 0)));
}

TEST(FacetAdjacency, Counts) {
  const auto tet = convex_hull(unit_simplex(3), 3);
  EXPECT_EQ(facet_adjacency(tet).size(), 6u);
  const auto cube = convex_hull(cube_corners(3), 3);
  EXPECT_EQ(facet_adjacency(cube).size(), 12u);
  for (const auto& r : facet_adjacency(cube)) EXPECT_EQ(r.vertex_ids.size(), 2u);
  const auto square = convex_hull(cube_corners(2), 2);
  const auto& ridges = facet_adjacency(square);
  EXPECT_EQ(ridges.size(), 4u);
  for (const auto& r : ridges) {
    EXPECT_EQ(r.vertex_ids.size(), 1u);
    EXPECT_NE(r.facet_a, r.facet_b);
  }
}

TEST(FacetAdjacency, EachRidgeListedOnce) {
  const auto p = convex_hull(sphere_points(4, 60, 8), 4);
  std::set<std::pair<int, int>> seen;
  std::vector<int> ridges_per_facet(p.facets().size(), 0);
  for (const auto& r : facet_adjacency(p)) {
    EXPECT_TRUE(seen.insert({r.facet_a, r.facet_b}).second);
    EXPECT_EQ(r.vertex_ids.size(), 3u);
    ++ridges_per_facet[r.facet_a];
    ++ridges_per_facet[r.facet_b];
  }
  for (int c : ridges_per_facet) EXPECT_EQ(c, 4);  // simplicial in general position
}

TEST(ConvexHull, SpherePointsAreVerticesInEveryDimension) {
  for (int d = 2; d <= 6; ++d) {
    const int n = d <= 3 ? 300 : 80;
    const auto pts = sphere_points(d, n, 100 + d);
    const auto p = convex_hull(pts, d);
    EXPECT_EQ(p.vertices().size(), std::size_t(n)) << d;
    expect_valid(p, pts);
  }
}

TEST(ConvexHull, EulerRelationInThreeDimensions) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = convex_hull(sphere_points(3, 50 + 20 * int(seed), seed), 3);
    const long v = long(p.vertices().size());
    const long e = long(facet_adjacency(p).size());
    const long f = long(p.facets().size());
    EXPECT_EQ(v - e + f, 2);
  }
  const auto cube = convex_hull(cube_corners(3), 3);
  EXPECT_EQ(8 - long(facet_adjacency(cube).size()) + long(cube.facets().size()), 2);
}

TEST(ConvexHull, GaussianCloudContainsEverything) {
  for (int d = 2; d <= 5; ++d) {
    RngStream rng(55, d);
    std::vector<Vector> pts;
    for (int i = 0; i < 400; ++i) {
      Vector x(d);
      for (int k = 0; k < d; ++k) x[k] = rng.normal();
      pts.push_back(x);
    }
    const auto p = convex_hull(pts, d);
    expect_valid(p, pts);
    // Every input point that is not a vertex must be strictly inside or on a facet.
    EXPECT_LT(p.vertices().size(), pts.size());
  }
}

TEST(ConvexHull, Idempotent) {
  const auto pts = sphere_points(3, 200, 3);
  const auto p = convex_hull(pts, 3);
  const auto q = convex_hull(p.vertices(), 3);
  ASSERT_EQ(p.vertices().size(), q.vertices().size());
  std::vector<double> a, b;
  for (const auto& f : p.facets()) a.push_back(f.offset);
  for (const auto& f : q.facets()) b.push_back(f.offset);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
}

TEST(ConvexHull, RotationInvariance) {
  RngStream rng(21, 0);
  for (int d : {2, 3, 4}) {
    const auto pts = sphere_points(d, 120, 40 + d);
    const auto p = convex_hull(pts, d);
    const double vol = volume(p);
    const double area = surface_area_half(p);
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix rot = testing::random_rotation(d, rng);
      std::vector<Vector> moved;
      for (const auto& x : pts) moved.push_back(rot * x);
      const auto q = convex_hull(moved, d);
      EXPECT_NEAR(volume(q), vol, 1e-8 * vol);
      EXPECT_NEAR(surface_area_half(q), area, 1e-8 * area);
    }
  }
}

TEST(ConvexHull, Monotone) {
  auto pts = sphere_points(3, 80, 12);
  std::vector<Vector> inner(pts.begin(), pts.begin() + 40);
  const auto small = convex_hull(inner, 3);
  const auto big = convex_hull(pts, 3);
  for (const auto& v : small.vertices()) EXPECT_TRUE(contains_point(big, v));
}

}  // namespace
}  // namespace polylab
