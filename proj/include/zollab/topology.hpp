#pragma once

// Two-fold covering over the space of embedded circles and constants, and
// the Z/2 invariant A of loops based at a constant curve.
//
// Over an embedded curve a lift picks one of the two complementary discs;
// over a constant curve it is a bit. Near a constant curve c and for a
// point x away from c, bit 1 lifts to the component containing x and bit 0
// to the one that does not. A lift is carried along a discrete loop by an
// anchor point whose component is known: each step moves the anchor to a
// point that keeps clear of both curves, so the component it names cannot
// jump.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "zollab/curves.hpp"
#include "zollab/errors.hpp"
#include "zollab/vec3.hpp"

namespace zollab {

namespace detail {

inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + t * ab);
}

}  // namespace detail

// Ambient distance from p to the closed polyline (or to the point of a
// constant curve).
inline double distance_to_curve(const DiscreteCurve& curve, const Vec3& p) {
  if (curve.is_constant()) return distance(curve.point(), p);
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = curve.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, detail::point_segment_distance(p, curve[i], curve[(i + 1) % n]));
  }
  return best;
}

// Symmetric Hausdorff distance measured from vertices to polylines.
inline double hausdorff_distance(const DiscreteCurve& a, const DiscreteCurve& b) {
  double worst = 0.0;
  for (const Vec3& p : a.vertices()) worst = std::max(worst, distance_to_curve(b, p));
  for (const Vec3& p : b.vertices()) worst = std::max(worst, distance_to_curve(a, p));
  return worst;
}

inline double marker_clearance(const DiscreteCurve& curve) {
  return curve.is_constant() ? 0.0 : 10.0 * max_edge_chord(curve);
}

// Stereographic projection from p turns p's component into the unbounded
// one; q shares it iff the projected polygon winds an even number of times
// around q. Parity comes from a crossing count with exact-sign tests.
inline bool same_component(const DiscreteCurve& curve, const Vec3& p, const Vec3& q) {
  detail::require_on_sphere(p);
  detail::require_on_sphere(q);
  if (curve.is_constant()) {
    return true;
  }
  const double clearance = marker_clearance(curve);
  if (distance_to_curve(curve, p) < clearance || distance_to_curve(curve, q) < clearance) {
    throw ProximityError("same_component: point closer than 10 edge lengths to the curve");
  }
  if (distance(p, q) < 1e-9) {
    return true;  // q would project to infinity
  }
  const auto frame = orthonormal_frame(p);
  auto project = [&](const Vec3& y) {
    const double denom = 1.0 - dot(y, p);
    return std::array<double, 2>{dot(y, frame[0]) / denom, dot(y, frame[1]) / denom};
  };
  const auto target = project(q);
  const std::size_t n = curve.size();
  bool odd = false;
  auto prev = project(curve[n - 1]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cur = project(curve[i]);
    // Half-open rule on the horizontal ray from q towards +x.
    const bool up = prev[1] <= target[1] && cur[1] > target[1];
    const bool down = cur[1] <= target[1] && prev[1] > target[1];
    if (up && detail::orient2d(prev[0], prev[1], cur[0], cur[1], target[0], target[1]) > 0.0) {
      odd = !odd;
    } else if (down &&
               detail::orient2d(prev[0], prev[1], cur[0], cur[1], target[0], target[1]) < 0.0) {
      odd = !odd;
    }
    prev = cur;
  }
  return !odd;
}

struct CurveLoop {
  std::vector<DiscreteCurve> curves;

  // Endpoints constant and equal; every non-constant member embedded.
  void validate() const {
    if (curves.size() < 2) throw PreconditionError("curve loop needs at least two curves");
    const auto& first = curves.front();
    const auto& last = curves.back();
    if (!first.is_constant() || !last.is_constant() ||
        distance(first.point(), last.point()) > 1e-12) {
      throw PreconditionError("curve loop must start and end at the same constant curve");
    }
    for (const auto& c : curves) {
      if (c.is_constant()) continue;
      bool ok = false;
      try {
        ok = is_embedded(c);
      } catch (const AmbiguousEmbeddingError&) {
        ok = false;
      }
      if (!ok) throw PreconditionError("curve loop member is not embedded");
    }
  }

  Vec3 base_point() const { return curves.front().point(); }
};

// Lift at one curve of the loop: for a constant curve the bit, otherwise
// the anchor and whether the chosen disc is the anchor's component.
struct MarkedCurve {
  bool constant = true;
  int bit = 0;
  Vec3 anchor;
  bool anchor_inside = false;
};

struct LiftResult {
  int bit = 0;
  std::vector<MarkedCurve> lift;
};

namespace detail {

inline std::vector<Vec3> anchor_candidates(std::uint64_t seed, std::size_t count = 400) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vec3 axis{gauss(rng), gauss(rng), gauss(rng)};
  axis = normalized(axis);
  const double angle = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
    const double rho = std::sqrt(1.0 - z * z);
    const double phi = golden * static_cast<double>(k);
    pts.push_back(rotate({rho * std::cos(phi), rho * std::sin(phi), z}, axis, angle));
  }
  return pts;
}

// A curve counts as close to the constant c when it lies in the open
// hemisphere around c and keeps clear of the antipode.
inline void require_near_constant(const DiscreteCurve& curve, const Vec3& c) {
  for (const Vec3& y : curve.vertices()) {
    if (dot(y, c) <= 0.0) {
      throw TrackingError("a_invariant: curve next to a constant leaves its hemisphere; refine the loop");
    }
  }
  if (distance_to_curve(curve, -c) < marker_clearance(curve)) {
    throw TrackingError("a_invariant: curve next to a constant comes too close to its antipode");
  }
}

}  // namespace detail

// A([Gamma]) = Q(1) for the lift starting at (Gamma(0), 0). The seed only
// rotates the anchor candidates; the result must not depend on it.
inline LiftResult a_invariant(const CurveLoop& loop, std::uint64_t seed = 0) {
  loop.validate();
  const auto candidates = detail::anchor_candidates(seed);
  LiftResult result;
  MarkedCurve state;  // constant, bit 0
  result.lift.push_back(state);

  for (std::size_t k = 0; k + 1 < loop.curves.size(); ++k) {
    const DiscreteCurve& cur = loop.curves[k];
    const DiscreteCurve& next = loop.curves[k + 1];
    MarkedCurve out;
    if (cur.is_constant() && next.is_constant()) {
      out = state;
    } else if (cur.is_constant()) {
      // x = antipode of the constant; bit 1 selects x's component.
      detail::require_near_constant(next, cur.point());
      out.constant = false;
      out.anchor = -cur.point();
      out.anchor_inside = state.bit == 1;
    } else if (next.is_constant()) {
      detail::require_near_constant(cur, next.point());
      const Vec3 x = -next.point();
      const bool q_contains_x = same_component(cur, state.anchor, x) == state.anchor_inside;
      out.constant = true;
      out.bit = q_contains_x ? 1 : 0;
    } else {
      const double step = hausdorff_distance(cur, next);
      const double needed =
          std::max({marker_clearance(cur), marker_clearance(next), 2.0 * step});
      const Vec3* best = nullptr;
      double best_clearance = -1.0;
      for (const Vec3& b : candidates) {
        const double c = std::min(distance_to_curve(cur, b), distance_to_curve(next, b));
        if (c > best_clearance) {
          best_clearance = c;
          best = &b;
        }
      }
      if (best_clearance < needed) {
        throw TrackingError("a_invariant: no anchor clears consecutive curves at step " +
                            std::to_string(k) + "; refine the loop");
      }
      out.constant = false;
      out.anchor = *best;
      out.anchor_inside = same_component(cur, state.anchor, *best) == state.anchor_inside;
    }
    state = out;
    result.lift.push_back(state);
  }
  result.bit = state.bit;
  return result;
}

// ---- loop generators, all based at a constant curve -----------------------

inline constexpr std::size_t kLoopVertices = 128;

// Circles of the planes <y, x> = lambda as lambda runs from `from` to `to`.
// The first one is skipped when it repeats the previous curve.
inline void append_offsets(std::vector<DiscreteCurve>& out, const Vec3& x, double from, double to,
                           std::size_t steps, std::size_t n, bool skip_first = false) {
  for (std::size_t k = skip_first ? 1 : 0; k <= steps; ++k) {
    const double lambda =
        k == steps ? to : from + (to - from) * static_cast<double>(k) / static_cast<double>(steps);
    out.push_back(plane_section(x, lambda, n));
  }
}

// Grow a great circle out of `base`, turn its plane by pi about `axis`
// (orthogonal to base), and shrink it back into `base`. A = 1.
inline CurveLoop rotation_loop(const Vec3& base, const Vec3& axis, std::size_t steps = 64,
                               std::size_t n = kLoopVertices) {
  if (std::abs(dot(base, axis)) > 1e-9) {
    throw ParameterError("rotation_loop: axis must be orthogonal to the base point");
  }
  CurveLoop loop;
  append_offsets(loop.curves, base, 1.0, 0.0, steps, n);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double angle = std::numbers::pi * static_cast<double>(k) / static_cast<double>(steps);
    loop.curves.push_back(plane_section(rotate(base, axis, angle), 0.0, n));
  }
  append_offsets(loop.curves, base, 0.0, 1.0, steps, n, true);
  return loop;
}

// The meridian loop: base (1, 0, 0), meridian planes rotating about the z-axis.
inline CurveLoop meridian_rotation_loop(std::size_t steps = 64, std::size_t n = kLoopVertices) {
  return rotation_loop({1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, steps, n);
}

inline CurveLoop constant_loop(const Vec3& base, std::size_t steps = 8) {
  CurveLoop loop;
  loop.curves.assign(steps + 1, DiscreteCurve::constant(normalized(base)));
  return loop;
}

// A cap around `base` grows to offset `lowest` and shrinks back. A = 0.
inline CurveLoop bubble_loop(const Vec3& base, double lowest = 0.5, std::size_t steps = 32,
                             std::size_t n = kLoopVertices) {
  if (!(lowest > -1.0 && lowest < 1.0)) {
    throw ParameterError("bubble_loop: lowest offset must lie in (-1, 1)");
  }
  CurveLoop loop;
  append_offsets(loop.curves, base, 1.0, lowest, steps, n);
  append_offsets(loop.curves, base, lowest, 1.0, steps, n, true);
  return loop;
}

// A cap around `base` sweeps over the whole sphere and closes at the
// antipode; the constant curve then walks back along a half great circle. A = 1.
inline CurveLoop inside_out_loop(const Vec3& base, std::size_t steps = 64,
                                 std::size_t n = kLoopVertices) {
  CurveLoop loop;
  append_offsets(loop.curves, base, 1.0, -1.0, 2 * steps, n);
  const Vec3 side = orthonormal_frame(base)[0];
  for (std::size_t k = 1; k <= steps; ++k) {
    const double angle = std::numbers::pi * static_cast<double>(k) / static_cast<double>(steps);
    loop.curves.push_back(
        DiscreteCurve::constant(std::cos(angle) * -base + std::sin(angle) * side));
  }
  loop.curves.back() = loop.curves.front();
  return loop;
}

inline CurveLoop concatenate(const CurveLoop& a, const CurveLoop& b) {
  a.validate();
  b.validate();
  if (distance(a.base_point(), b.base_point()) > 1e-12) {
    throw PreconditionError("concatenate: loops have different base points");
  }
  CurveLoop out = a;
  out.curves.insert(out.curves.end(), b.curves.begin() + 1, b.curves.end());
  return out;
}

inline CurveLoop reversed_loop(const CurveLoop& loop) {
  CurveLoop out;
  out.curves.assign(loop.curves.rbegin(), loop.curves.rend());
  return out;
}

}  // namespace zollab
