#include <gtest/gtest.h>

#include "test_helpers.hpp"
#include "zollab/topology.hpp"

using namespace zollab;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;
const Vec3 kBase{1, 0, 0};

DiscreteCurve wavy(std::size_t n) {
  std::vector<Vec3> pts;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = 2 * kPi * static_cast<double>(k) / static_cast<double>(n);
    pts.push_back(normalized(Vec3{std::cos(s), std::sin(s), 0.4 * std::sin(3 * s) + 0.2}));
  }
  return DiscreteCurve::polyline(std::move(pts));
}

// Generator set for randomized homomorphism tests; every loop is based at
// kBase and its invariant is known from the construction.
struct Generator {
  CurveLoop loop;
  int expected;
};

Generator random_generator(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto steps = static_cast<std::size_t>(32 + 16 * pick(rng));
  switch (pick(rng)) {
    case 0: {
      const double a = 2 * kPi * unit(rng);
      return {rotation_loop(kBase, {0, std::cos(a), std::sin(a)}, steps), 1};
    }
    case 1:
      return {constant_loop(kBase, 4), 0};
    case 2:
      return {bubble_loop(kBase, -0.8 + 1.6 * unit(rng), steps), 0};
    default:
      return {inside_out_loop(kBase, steps), 1};
  }
}

}  // namespace

TEST(SameComponent, Equator) {
  const auto eq = plane_section({0, 0, 1}, 0.0, 128);
  EXPECT_FALSE(same_component(eq, {0, 0, 1}, {0, 0, -1}));
  EXPECT_TRUE(same_component(eq, {0, 0, 1}, normalized(Vec3{0, 0.1, 0.995})));
}

TEST(SameComponent, SmallPolarCap) {
  const auto cap = plane_section({0, 0, 1}, 0.95, 128);
  EXPECT_TRUE(same_component(cap, {0, 0, -1}, {1, 0, 0}));
  EXPECT_FALSE(same_component(cap, {0, 0, -1}, {0, 0, 1}));
  EXPECT_TRUE(same_component(cap, {0, 0, 1}, {0, 0, 1}));
}

TEST(SameComponent, ProximityIsAnError) {
  const auto eq = plane_section({0, 0, 1}, 0.0, 64);
  EXPECT_THROW(same_component(eq, normalized(Vec3{1, 0, 0.01}), {0, 0, 1}), ProximityError);
}

TEST(SameComponent, TwoClassPartition) {
  std::mt19937_64 rng(31);
  for (const auto& curve : {wavy(256), plane_section(normalized(Vec3{1, 1, 1}), 0.4, 256)}) {
    std::vector<Vec3> pts;
    while (pts.size() < 40) {
      const Vec3 p = random_unit(rng);
      if (distance_to_curve(curve, p) >= marker_clearance(curve)) pts.push_back(p);
    }
    // Label every point by its relation to pts[0]; that labelling must
    // reproduce every pairwise answer, and both labels must occur.
    std::vector<bool> label;
    for (const auto& p : pts) label.push_back(same_component(curve, pts[0], p));
    int classes = 0;
    classes += std::count(label.begin(), label.end(), true) > 0;
    classes += std::count(label.begin(), label.end(), false) > 0;
    EXPECT_EQ(classes, 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const bool s = same_component(curve, pts[i], pts[j]);
        EXPECT_EQ(s, same_component(curve, pts[j], pts[i]));
        EXPECT_EQ(s, label[i] == label[j]);
      }
    }
  }
}

TEST(AInvariant, MeridianRotationLoopIsOne) {
  EXPECT_EQ(a_invariant(meridian_rotation_loop()).bit, 1);
}

TEST(AInvariant, ConstantLoopIsZero) {
  EXPECT_EQ(a_invariant(constant_loop(kBase)).bit, 0);
}

TEST(AInvariant, DoubledRotationIsZero) {
  const auto loop = meridian_rotation_loop();
  EXPECT_EQ(a_invariant(concatenate(loop, loop)).bit, 0);
}

TEST(AInvariant, OtherGenerators) {
  EXPECT_EQ(a_invariant(bubble_loop(kBase, 0.5)).bit, 0);
  EXPECT_EQ(a_invariant(bubble_loop(kBase, -0.9)).bit, 0);
  EXPECT_EQ(a_invariant(inside_out_loop(kBase)).bit, 1);
  EXPECT_EQ(a_invariant(reversed_loop(meridian_rotation_loop())).bit, 1);
}

TEST(AInvariant, HomomorphismOnRandomConcatenations) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_generator(rng);
    const auto b = random_generator(rng);
    const int ab = a_invariant(concatenate(a.loop, b.loop)).bit;
    EXPECT_EQ(a_invariant(a.loop).bit, a.expected);
    EXPECT_EQ(a_invariant(b.loop).bit, b.expected);
    EXPECT_EQ(ab, a.expected ^ b.expected) << "trial " << trial;
  }
}

TEST(AInvariant, MarkerIndependence) {
  const auto loops = std::vector<CurveLoop>{meridian_rotation_loop(), bubble_loop(kBase, 0.0),
                                            inside_out_loop(kBase)};
  for (const auto& loop : loops) {
    const int reference = a_invariant(loop, 0).bit;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) EXPECT_EQ(a_invariant(loop, seed).bit, reference);
  }
}

TEST(AInvariant, RefinementStability) {
  for (std::size_t steps : {24, 48, 96, 192}) {
    EXPECT_EQ(a_invariant(meridian_rotation_loop(steps)).bit, 1) << steps;
    EXPECT_EQ(a_invariant(inside_out_loop(kBase, steps)).bit, 1) << steps;
    EXPECT_EQ(a_invariant(bubble_loop(kBase, -0.5, steps)).bit, 0) << steps;
  }
}

TEST(AInvariant, CoarseLoopIsATrackingError) {
  EXPECT_THROW(a_invariant(meridian_rotation_loop(2)), TrackingError);
}

TEST(AInvariant, InvalidLoops) {
  CurveLoop open;
  open.curves = {DiscreteCurve::constant(kBase), plane_section(kBase, 0.9, 64),
                 DiscreteCurve::constant({0, 1, 0})};
  EXPECT_THROW(a_invariant(open), PreconditionError);
  EXPECT_THROW(concatenate(constant_loop(kBase), constant_loop({0, 1, 0})), PreconditionError);
}

TEST(Distances, HausdorffOfNestedLatitudes) {
  const auto a = plane_section({0, 0, 1}, 0.0, 512);
  const auto b = plane_section({0, 0, 1}, 0.1, 512);
  // Chord between heights 0 and 0.1 along a meridian.
  const double expected = distance(Vec3{1, 0, 0}, Vec3{std::sqrt(1 - 0.01), 0, 0.1});
  EXPECT_NEAR(hausdorff_distance(a, b), expected, 1e-4);
}
