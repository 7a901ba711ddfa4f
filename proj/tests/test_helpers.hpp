#pragma once

#include <vector>

#include "polylab/geometry.hpp"
#include "polylab/rng.hpp"

namespace polylab::testing {

inline std::vector<Vector> cube_corners(int d, double side = 1.0) {
  std::vector<Vector> pts;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = (mask >> i & 1) ? side : 0.0;
    pts.push_back(v);
  }
  return pts;
}

inline std::vector<Vector> unit_simplex(int d) {
  std::vector<Vector> pts{Vector::Zero(d)};
  for (int i = 0; i < d; ++i) pts.push_back(unit_vector(d, i));
  return pts;
}

inline std::vector<Vector> sphere_points(int d, int n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<Vector> pts;
  for (int i = 0; i < n; ++i) pts.push_back(sample_sphere(d, rng));
  return pts;
}

inline Matrix random_rotation(int d, RngStream& rng) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ();
}

}  // namespace polylab::testing
