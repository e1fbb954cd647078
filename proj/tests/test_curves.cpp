#include <gtest/gtest.h>

#include "test_helpers.hpp"
#include "zollab/curves.hpp"

using namespace zollab;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;

DiscreteCurve latitude(double polar, std::size_t n, double phase = 0.0) {
  std::vector<Vec3> pts;
  for (std::size_t k = 0; k < n; ++k) {
    pts.push_back(polar_point(polar, phase + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n)));
  }
  return DiscreteCurve::polyline(std::move(pts));
}

// Meridian through the poles in the plane y = 0, sampled uniformly in angle.
DiscreteCurve meridian(std::size_t n) {
  std::vector<Vec3> pts;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    pts.push_back({std::sin(t), 0.0, std::cos(t)});
  }
  return DiscreteCurve::polyline(std::move(pts));
}

double edge_ratio(const DiscreteCurve& c, const MetricSpec& spec) {
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double e = edge_length(spec, c[i], c[(i + 1) % c.size()]);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return hi / lo;
}

}  // namespace

TEST(Length, GreatCircle) {
  EXPECT_NEAR(length(latitude(kPi / 2, 512), MetricSpec::round()), 2 * kPi, 1e-4);
}

TEST(Length, LatitudeCircle) {
  EXPECT_NEAR(length(latitude(kPi / 3, 512), MetricSpec::round()), 2 * kPi * std::sin(kPi / 3), 1e-4);
}

TEST(Length, EllipsoidEquatorIsFixedByF) {
  EXPECT_NEAR(length(latitude(kPi / 2, 512), MetricSpec::ellipsoid(0.5)), 2 * kPi, 1e-4);
}

TEST(Length, ConstantCurveHasZeroLength) {
  EXPECT_EQ(length(DiscreteCurve::constant({0, 1, 0}), MetricSpec::round()), 0.0);
  EXPECT_GT(length(latitude(0.01, 16), MetricSpec::round()), 0.0);
}

TEST(Length, EllipsoidMeridianApproachesQuadrature) {
  const auto spec = MetricSpec::ellipsoid(0.8);
  const double exact = meridian_length(spec);
  const double e1 = std::abs(length(meridian(128), spec) - exact);
  const double e2 = std::abs(length(meridian(256), spec) - exact);
  EXPECT_LT(e2, 1e-4);
  EXPECT_GT(e1 / e2, 3.0);  // second order
}

TEST(Length, SecondOrderUnderResampling) {
  const auto spec = besse(0.3);
  const auto fine = DiscreteCurve::polyline([&] {
    std::vector<Vec3> pts;
    for (int k = 0; k < 8192; ++k) {
      const double s = 2 * kPi * k / 8192.0;
      pts.push_back(normalized(Vec3{std::cos(s), std::sin(s), 0.4 * std::sin(2 * s) + 0.2}));
    }
    return pts;
  }());
  const double reference = length(fine, spec);
  const double e1 = std::abs(length(resample(fine, spec, 64), spec) - reference);
  const double e2 = std::abs(length(resample(fine, spec, 128), spec) - reference);
  EXPECT_GT(e1 / e2, 3.0);
}

TEST(Construction, RejectsInvalidCurves) {
  EXPECT_THROW(DiscreteCurve::polyline({{1, 0, 0}, {0, 1, 0}}), ConstructionError);
  EXPECT_THROW(DiscreteCurve::polyline({{1, 0, 0}, {0, 1, 0}, {0, 0, 1.1}}), ConstructionError);
  EXPECT_THROW(DiscreteCurve::polyline({{1, 0, 0}, {1, 0, 0}, {0, 0, 1}}), ConstructionError);
  EXPECT_THROW(DiscreteCurve::constant({0, 0, 2}), PreconditionError);
}

TEST(Curvature, GreatCircleIsGeodesic) {
  for (const auto& g : curvature_field(latitude(kPi / 2, 512), MetricSpec::round())) {
    EXPECT_LE(g.curvature_magnitude, 1e-3);
  }
}

TEST(Curvature, LatitudeCircleMatchesCotangent) {
  for (double polar : {kPi / 6, kPi / 3, 0.45 * kPi}) {
    for (const auto& g : curvature_field(latitude(polar, 512), MetricSpec::round())) {
      EXPECT_NEAR(g.curvature_magnitude, 1.0 / std::tan(polar), 0.01 / std::tan(polar));
      // The normal points towards the nearer pole.
      EXPECT_GT(g.curvature_normal.z, 0.0);
    }
  }
}

TEST(Curvature, ScaledRoundSphere) {
  // On the sphere of radius R the geodesic curvature of a latitude is cot(t) / R.
  const double polar = kPi / 4;
  for (const auto& g : curvature_field(latitude(polar, 512), MetricSpec::round(2.0))) {
    EXPECT_NEAR(g.curvature_magnitude, 0.5 / std::tan(polar), 1e-3);
  }
}

TEST(Curvature, ReversalLeavesFieldUnchanged) {
  std::mt19937_64 rng(11);
  std::vector<Vec3> pts;
  for (int k = 0; k < 200; ++k) {
    const double s = 2 * kPi * k / 200.0;
    pts.push_back(normalized(Vec3{std::cos(s), std::sin(s), 0.3 * std::cos(3 * s) - 0.1}));
  }
  const auto curve = DiscreteCurve::polyline(pts);
  for (const auto& spec : std::vector<MetricSpec>{MetricSpec::round(), MetricSpec::ellipsoid(0.7), besse(0.3)}) {
    const auto fwd = curvature_field(curve, spec);
    const auto bwd = curvature_field(curve.reversed(), spec);
    const std::size_t n = fwd.size();
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LE(norm(fwd[i].curvature_normal - bwd[n - 1 - i].curvature_normal), 1e-12);
    }
  }
}

TEST(Curvature, NormalIsOrthogonalToTangent) {
  std::vector<Vec3> pts;
  for (int k = 0; k < 300; ++k) {
    const double s = 2 * kPi * k / 300.0;
    pts.push_back(normalized(Vec3{std::cos(s), std::sin(s) + 0.2, 0.5 * std::sin(2 * s)}));
  }
  const auto curve = DiscreteCurve::polyline(pts);
  for (const auto& spec : std::vector<MetricSpec>{MetricSpec::ellipsoid(0.6), besse(0.3)}) {
    const auto field = curvature_field(curve, spec);
    for (std::size_t i = 0; i < field.size(); ++i) {
      const Vec3 t = vertex_tangent(curve, spec, i);
      const Vec3& kn = field[i].curvature_normal;
      EXPECT_LE(std::abs(spec.dot(curve[i], kn, t)), 1e-6 * std::max(1.0, field[i].curvature_magnitude));
    }
  }
}

TEST(Curvature, RevolutionGeodesicsConverge) {
  // Equator and meridians of revolution metrics; uniform angles are not
  // uniform in g-arclength along the meridian, so the residual is nonzero.
  for (const auto& spec : std::vector<MetricSpec>{MetricSpec::ellipsoid(0.8), besse(0.3)}) {
    double prev = 0.0;
    for (std::size_t n : {64, 128, 256}) {
      double worst = 0.0;
      for (const auto& g : curvature_field(meridian(n), spec)) worst = std::max(worst, g.curvature_magnitude);
      for (const auto& g : curvature_field(latitude(kPi / 2, n), spec)) {
        EXPECT_LE(g.curvature_magnitude, 1e-12);
      }
      if (prev > 1e-12) {
        EXPECT_GT(prev / std::max(worst, 1e-300), 1.8) << n;
      }
      prev = worst;
    }
  }
}

TEST(Curvature, Errors) {
  EXPECT_THROW(curvature_field(latitude(1.0, 7), MetricSpec::round()), ParameterError);
  EXPECT_THROW(curvature_field(DiscreteCurve::constant({1, 0, 0}), MetricSpec::round()),
               DegenerateCurveError);
  auto pts = std::vector<Vec3>{};
  for (int k = 0; k < 16; ++k) pts.push_back(polar_point(1.0, 2 * kPi * k / 16.0));
  pts[3] = normalized(pts[2] + Vec3{1e-12, 0, 0});
  EXPECT_THROW(curvature_field(DiscreteCurve::polyline(pts), MetricSpec::round()), DegenerateCurveError);
}

TEST(Resample, PreservesGreatCircleLength) {
  const auto spec = MetricSpec::round();
  EXPECT_NEAR(length(resample(latitude(kPi / 2, 512), spec, 256), spec), 2 * kPi, 1e-3);
}

TEST(Resample, IdempotentOnUniformSpacing) {
  const auto spec = MetricSpec::round();
  const auto c = latitude(1.1, 256);
  const auto r = resample(c, spec, 256);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(distance(c[i], r[i]), 1e-8);
}

TEST(Resample, EqualizesNonuniformSpacing) {
  // Ellipse-like curve with strongly clustered vertices.
  std::vector<Vec3> pts;
  for (int k = 0; k < 400; ++k) {
    const double u = 2 * kPi * k / 400.0;
    const double s = u + 0.8 * std::sin(u);
    pts.push_back(normalized(Vec3{std::cos(s), 0.5 * std::sin(s), 0.6}));
  }
  const auto c = DiscreteCurve::polyline(pts);
  for (const auto& spec : std::vector<MetricSpec>{MetricSpec::round(), MetricSpec::ellipsoid(0.8)}) {
    EXPECT_GT(edge_ratio(c, spec), 5.0);
    const auto r = resample(c, spec, 256);
    EXPECT_LE(edge_ratio(r, spec), 1.01);
    EXPECT_NEAR(length(r, spec), length(c, spec), 1e-4 * length(c, spec));
  }
}

TEST(Resample, RejectsTooFewVertices) {
  EXPECT_THROW(resample(latitude(1.0, 64), MetricSpec::round(), 7), ParameterError);
}

TEST(Embedded, LatitudeCircles) {
  for (double polar : {0.05, 0.7, kPi / 2, 2.9}) EXPECT_TRUE(is_embedded(latitude(polar, 128)));
}

TEST(Embedded, FigureEightIsNot) {
  // Two lobes around (0, +-0.5, 0.8) joined through a crossing at (0, 0, 1).
  std::vector<Vec3> pts;
  for (int k = 0; k < 64; ++k) {
    const double s = 2 * kPi * (k + 0.5) / 64.0;
    pts.push_back(normalized(Vec3{0.3 * std::sin(2 * s), 0.6 * std::sin(s), 1.0}));
  }
  EXPECT_FALSE(is_embedded(DiscreteCurve::polyline(pts)));
}

TEST(Embedded, NearTouchIsAmbiguous) {
  // A thin loop whose two long sides pass within 1e-12 of each other.
  std::vector<Vec3> pts{normalized(Vec3{1, 0, 0}), normalized(Vec3{1, 0.1, 0}),
                        normalized(Vec3{1, 0.2, 0}), normalized(Vec3{1, 0.2, 0.01}),
                        normalized(Vec3{1, 0.1, 1e-12}), normalized(Vec3{1, 0.0, 0.01})};
  EXPECT_THROW(is_embedded(DiscreteCurve::polyline(pts)), AmbiguousEmbeddingError);
}

TEST(Embedded, InvariantUnderResampling) {
  std::vector<Vec3> pts;
  for (int k = 0; k < 300; ++k) {
    const double s = 2 * kPi * k / 300.0;
    pts.push_back(normalized(Vec3{std::cos(s), std::sin(s), 0.3 * std::sin(3 * s)}));
  }
  const auto c = DiscreteCurve::polyline(pts);
  ASSERT_TRUE(is_embedded(c));
  for (std::size_t n : {64, 128, 512}) EXPECT_TRUE(is_embedded(resample(c, besse(0.3), n)));
}

TEST(PlaneSection, BoundaryIsConstant) {
  const auto c = plane_section({0, 1, 0}, 1.0, 64);
  EXPECT_TRUE(c.is_constant());
  EXPECT_EQ(c.point(), (Vec3{0, 1, 0}));
  EXPECT_EQ(plane_section({0, 1, 0}, -1.0, 64).point(), (Vec3{0, -1, 0}));
}
