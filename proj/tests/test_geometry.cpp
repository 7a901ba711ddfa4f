#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "polylab/geometry.hpp"

namespace polylab {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Kappa, SmallDimensions) {
  EXPECT_DOUBLE_EQ(kappa(0), 1.0);
  EXPECT_DOUBLE_EQ(kappa(1), 2.0);
  EXPECT_DOUBLE_EQ(kappa(2), kPi);
  EXPECT_DOUBLE_EQ(kappa(3), 4.0 * kPi / 3.0);
  EXPECT_NEAR(kappa(6), std::pow(kPi, 3) / 6.0, 1e-14);
  // Against the Gamma-function form.
  for (int d = 0; d <= 8; ++d) {
    EXPECT_NEAR(kappa(d), std::pow(kPi, d / 2.0) / std::tgamma(1.0 + d / 2.0), 1e-13) << d;
  }
}

TEST(ConvexBody, RejectsBadInput) {
  EXPECT_THROW(ConvexBody::ball(1), ContractViolation);
  EXPECT_THROW(ConvexBody::ball(7), ContractViolation);
  EXPECT_THROW(ConvexBody::ball(3, 0.0), ContractViolation);
  EXPECT_THROW(ConvexBody::ellipsoid({1.0, -2.0}), ContractViolation);
}

TEST(SupportFunction, Examples) {
  EXPECT_DOUBLE_EQ(support_function(ConvexBody::ball(3), unit_vector(3, 0)), 1.0);
  const auto ell = ConvexBody::ellipsoid({1.0, 2.0});
  EXPECT_DOUBLE_EQ(support_function(ell, unit_vector(2, 1)), 2.0);
  const Vector diag = make_vector({1.0, 1.0}) / std::sqrt(2.0);
  EXPECT_NEAR(support_function(ell, diag), std::sqrt(2.5), 1e-15);
}

TEST(SupportFunction, NonUnitDirectionIsAContractViolation) {
  EXPECT_THROW(support_function(ConvexBody::ball(2), make_vector({1.0, 1.0})),
               ContractViolation);
}

TEST(SupportFunction, WidthOfBallIsDiameter) {
  const auto ball = ConvexBody::ball(4, 1.5);
  RngStream rng(3, 0);
  for (int i = 0; i < 50; ++i) {
    const Vector u = sample_sphere(4, rng);
    EXPECT_NEAR(support_function(ball, u) + support_function(ball, -u), 3.0, 1e-12);
  }
}

TEST(SampleSphere, UnitNorm) {
  RngStream rng(1, 0);
  for (int d = 2; d <= 6; ++d) {
    for (int i = 0; i < 100; ++i) EXPECT_NEAR(sample_sphere(d, rng).norm(), 1.0, 1e-12);
  }
}

TEST(SampleSphere, IsotropicMoments) {
  RngStream rng(2, 0);
  const int n = 100000;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  double sq = 0.0, sq2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector x = sample_sphere(3, rng);
    mean += Eigen::Vector3d(x[0], x[1], x[2]);
    sq += x[0] * x[0];
    sq2 += x[0] * x[0] * x[0] * x[0];
  }
  mean /= n;
  const double tol = 3.0 / std::sqrt(3.0 * n);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(mean[i], 0.0, tol);
  const double m = sq / n;
  const double sd = std::sqrt(sq2 / n - m * m);
  EXPECT_NEAR(m, 1.0 / 3.0, 3.0 * sd / std::sqrt(double(n)));
}

TEST(SampleBoundary, BallPointsOnSphere) {
  RngStream rng(4, 0);
  const auto ball = ConvexBody::ball(2);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(sample_boundary(ball, rng).norm(), 1.0, 1e-12);
}

TEST(SampleBoundary, EllipsoidPointsOnBoundary) {
  RngStream rng(4, 1);
  const auto body = ConvexBody::ellipsoid({0.5, 1.0, 3.0, 2.0});
  for (int i = 0; i < 1000; ++i) {
    const Vector x = sample_boundary(body, rng);
    double q = 0.0;
    for (int k = 0; k < 4; ++k) q += (x[k] / body.semiaxes()[k]) * (x[k] / body.semiaxes()[k]);
    EXPECT_LT(std::abs(q - 1.0), 1e-10);
  }
}

TEST(SampleBoundary, EllipseArcLengthLaw) {
  const auto body = ConvexBody::ellipsoid({1.0, 2.0});
  const double perimeter = testing::ellipse_arc(1.0, 2.0, 0.0, 2.0 * kPi);
  const double first_quadrant = testing::ellipse_arc(1.0, 2.0, 0.0, kPi / 2.0) / perimeter;
  const double low_arc = testing::ellipse_arc(1.0, 2.0, 0.0, kPi / 4.0) / perimeter;
  ASSERT_NEAR(first_quadrant, 0.25, 1e-12);
  ASSERT_NEAR(low_arc, 0.15032833718673272, 1e-10);  // scipy quad, frozen

  RngStream rng(11, 0);
  const int n = 100000;
  int upper = 0, quadrant = 0, arc = 0;
  for (int i = 0; i < n; ++i) {
    const Vector x = sample_boundary(body, rng);
    const double t = std::atan2(x[1] / 2.0, x[0]);  // ellipse parameter angle
    upper += x[1] > 0.0;
    quadrant += (t >= 0.0 && t <= kPi / 2.0);
    arc += (t >= 0.0 && t <= kPi / 4.0);
  }
  auto within = [&](int hits, double p) {
    return std::abs(double(hits) / n - p) <= 3.0 * std::sqrt(p * (1.0 - p) / n);
  };
  EXPECT_TRUE(within(upper, 0.5));
  EXPECT_TRUE(within(quadrant, first_quadrant));
  EXPECT_TRUE(within(arc, low_arc)) << double(arc) / n << " vs " << low_arc;
}

TEST(SampleBoundary, DeterministicInStreamIdentity) {
  const auto body = ConvexBody::ellipsoid({1.0, 2.0, 3.0});
  RngStream a(77, 5), b(77, 5);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample_boundary(body, a), sample_boundary(body, b));
}

TEST(ReferenceIntrinsicVolume, BallClosedForms) {
  const auto ball = ConvexBody::ball(3);
  EXPECT_NEAR(reference_intrinsic_volume(ball, 1), 4.0, 1e-14);
  EXPECT_NEAR(reference_intrinsic_volume(ball, 2), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(reference_intrinsic_volume(ball, 3), 4.0 * kPi / 3.0, 1e-14);
}

TEST(ReferenceIntrinsicVolume, BallHomogeneity) {
  for (int d = 2; d <= 6; ++d) {
    for (int ell = 1; ell <= d; ++ell) {
      const double base = reference_intrinsic_volume(ConvexBody::ball(d, 1.0), ell);
      for (double r : {0.5, 2.0}) {
        EXPECT_NEAR(reference_intrinsic_volume(ConvexBody::ball(d, r), ell),
                    std::pow(r, ell) * base, 1e-12 * base);
      }
    }
  }
}

TEST(ReferenceIntrinsicVolume, Ellipse) {
  const auto body = ConvexBody::ellipsoid({1.0, 2.0});
  EXPECT_NEAR(reference_intrinsic_volume(body, 2), 2.0 * kPi, 1e-14);
  const double oracle = 0.5 * testing::ellipse_arc(1.0, 2.0, 0.0, 2.0 * kPi);
  EXPECT_NEAR(oracle, 4.844224110273839, 1e-10);
  EXPECT_NEAR(reference_intrinsic_volume(body, 1), oracle, 1e-8 * oracle);
}

TEST(ReferenceIntrinsicVolume, SpheroidSurfaceMatchesClosedForm) {
  // Prolate spheroid a = b = 1, c = 2: S = 2 pi (1 + c^2 arcsin(e) / (c e)), e^2 = 1 - 1/c^2.
  const double c = 2.0;
  const double e = std::sqrt(1.0 - 1.0 / (c * c));
  const double area = 2.0 * kPi * (1.0 + c * std::asin(e) / e);
  const auto body = ConvexBody::ellipsoid({1.0, 1.0, c});
  EXPECT_NEAR(reference_intrinsic_volume(body, 2), 0.5 * area, 1e-8 * area);
}

TEST(ReferenceIntrinsicVolume, EqualSemiaxesAgreeWithBall) {
  for (int d = 2; d <= 6; ++d) {
    const double ball = reference_intrinsic_volume(ConvexBody::ball(d, 1.3), d - 1);
    const double ell = reference_intrinsic_volume(
        ConvexBody::ellipsoid(std::vector<double>(d, 1.3)), d - 1);
    EXPECT_NEAR(ell, ball, 1e-10 * ball) << d;
  }
}

TEST(ReferenceIntrinsicVolume, UnsupportedEllipsoidPair) {
  const auto body = ConvexBody::ellipsoid({1.0, 2.0, 3.0, 4.0});
  EXPECT_THROW(reference_intrinsic_volume(body, 2), UnsupportedReference);
  EXPECT_THROW(reference_intrinsic_volume(body, 0), ContractViolation);
}

}  // namespace
}  // namespace polylab
