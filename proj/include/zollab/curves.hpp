#pragma once

// Discrete unparametrized loops on S^2: cyclic polylines of unit vectors
// joined by great-circle arcs, plus constant curves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zollab/errors.hpp"
#include "zollab/metrics.hpp"
#include "zollab/vec3.hpp"

namespace zollab {

class DiscreteCurve {
 public:
  // A constant curve (an element of the constant-loop stratum).
  static DiscreteCurve constant(const Vec3& point) {
    detail::require_on_sphere(point);
    DiscreteCurve c;
    c.vertices_ = {point};
    c.constant_ = true;
    return c;
  }

  // Cyclic polyline. Requires n >= 3 unit vertices with distinct neighbours.
  static DiscreteCurve polyline(std::vector<Vec3> vertices) {
    if (vertices.size() < 3) {
      throw ConstructionError("curve needs at least 3 vertices, got " +
                              std::to_string(vertices.size()));
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (std::abs(norm(vertices[i]) - 1.0) > kSphereTolerance) {
        throw ConstructionError("curve vertex " + std::to_string(i) + " is off the unit sphere");
      }
      if (vertices[i] == vertices[(i + 1) % vertices.size()]) {
        throw ConstructionError("curve has repeated consecutive vertex " + std::to_string(i));
      }
    }
    DiscreteCurve c;
    c.vertices_ = std::move(vertices);
    return c;
  }

  bool is_constant() const noexcept { return constant_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  std::span<const Vec3> vertices() const noexcept { return vertices_; }
  const Vec3& operator[](std::size_t i) const noexcept { return vertices_[i]; }

  // The point of a constant curve; the first vertex otherwise.
  const Vec3& point() const noexcept { return vertices_.front(); }

  DiscreteCurve reversed() const {
    if (constant_) return *this;
    std::vector<Vec3> v(vertices_.rbegin(), vertices_.rend());
    DiscreteCurve c;
    c.vertices_ = std::move(v);
    return c;
  }

 private:
  DiscreteCurve() = default;
  std::vector<Vec3> vertices_;
  bool constant_ = false;
};

// g-length of the great-circle arc from a to b: the metric is frozen at the
// arc midpoint, which is second-order accurate and exact for round metrics.
inline double edge_length(const MetricSpec& spec, const Vec3& a, const Vec3& b) noexcept {
  const Vec3 d = b - a;
  const double chord = norm(d);
  if (chord == 0.0) return 0.0;
  const Vec3 mid = normalized(a + b);
  const double angle = 2.0 * std::asin(std::min(1.0, 0.5 * chord));
  return spec.norm(mid, d) * (angle / chord);
}

inline double length(const DiscreteCurve& curve, const MetricSpec& spec) {
  if (curve.is_constant()) return 0.0;
  const std::size_t n = curve.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += edge_length(spec, curve[i], curve[(i + 1) % n]);
  }
  return total;
}

inline double max_edge_chord(const DiscreteCurve& curve) noexcept {
  if (curve.is_constant()) return 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    m = std::max(m, distance(curve[i], curve[(i + 1) % curve.size()]));
  }
  return m;
}

struct VertexGeometry {
  double weight = 0.0;              // g-length of the two half-edges
  Vec3 curvature_normal;            // kappa * nu, tangent at the vertex
  double curvature_magnitude = 0.0;  // g-norm of curvature_normal
};

// Per-curve summary used by the flow.
struct CurveGeometry {
  std::vector<VertexGeometry> vertices;
  std::vector<double> edges;  // g-length of edge i -> i+1
  double length = 0.0;
  double min_edge = 0.0;
  double kappa_max = 0.0;
  double kappa_sq_integral = 0.0;  // sum of |kappa|^2 * weight
};

inline constexpr double kDegenerateEdge = 1e-10;

// Covariant three-point stencil. At vertex i with neighbours at g-distances
// h- and h+, finite differences in g-arclength give c' and c''; the
// covariant acceleration is c'' minus the geodesic spray at (p, c'), and
// its part g-orthogonal to c' is kappa * nu. Only |c''| and the squared
// velocity enter, so the result does not depend on the vertex order.
inline CurveGeometry analyze(const DiscreteCurve& curve, const MetricSpec& spec) {
  if (curve.is_constant()) {
    throw DegenerateCurveError("curvature of a constant curve is undefined");
  }
  const std::size_t n = curve.size();
  CurveGeometry geo;
  geo.vertices.resize(n);
  geo.edges.resize(n);
  geo.min_edge = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double e = edge_length(spec, curve[i], curve[(i + 1) % n]);
    if (!(e >= kDegenerateEdge)) {
      throw DegenerateCurveError("edge " + std::to_string(i) + " shorter than 1e-10");
    }
    geo.edges[i] = e;
    geo.length += e;
    geo.min_edge = std::min(geo.min_edge, e);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = curve[i];
    const Vec3 dm = curve[(i + n - 1) % n] - p;
    const Vec3 dp = curve[(i + 1) % n] - p;
    const double hm = geo.edges[(i + n - 1) % n];
    const double hp = geo.edges[i];
    const double denom = hm * hp * (hm + hp);
    const Vec3 velocity = project_tangent(p, (hm * hm * dp - hp * hp * dm) / denom);
    const Vec3 second = 2.0 * (hm * dp + hp * dm) / denom;
    const Vec3 covariant = project_tangent(p, second) - spec.geodesic_correction(p, velocity);
    const double vv = spec.dot(p, velocity, velocity);
    const Vec3 kn = covariant - (spec.dot(p, covariant, velocity) / vv) * velocity;
    const double k2 = std::max(0.0, spec.dot(p, kn, kn));
    auto& vg = geo.vertices[i];
    vg.weight = 0.5 * (hm + hp);
    vg.curvature_normal = kn;
    vg.curvature_magnitude = std::sqrt(k2);
    geo.kappa_max = std::max(geo.kappa_max, vg.curvature_magnitude);
    geo.kappa_sq_integral += k2 * vg.weight;
  }
  return geo;
}

inline std::vector<VertexGeometry> curvature_field(const DiscreteCurve& curve,
                                                   const MetricSpec& spec) {
  if (!curve.is_constant() && curve.size() < 8) {
    throw ParameterError("curvature_field needs at least 8 vertices");
  }
  return analyze(curve, spec).vertices;
}

// Unit g-tangent at vertex i (same stencil as analyze).
inline Vec3 vertex_tangent(const DiscreteCurve& curve, const MetricSpec& spec, std::size_t i) {
  const std::size_t n = curve.size();
  const Vec3& p = curve[i];
  const Vec3 dm = curve[(i + n - 1) % n] - p;
  const Vec3 dp = curve[(i + 1) % n] - p;
  const double hm = edge_length(spec, curve[(i + n - 1) % n], p);
  const double hp = edge_length(spec, p, curve[(i + 1) % n]);
  const Vec3 velocity = project_tangent(p, (hm * hm * dp - hp * hp * dm) / (hm * hp * (hm + hp)));
  return velocity / spec.norm(p, velocity);
}

// n vertices at equal g-arclength along the polygon, starting at vertex 0.
// Within an edge the g-length is taken as proportional to the arc angle.
inline DiscreteCurve resample(const DiscreteCurve& curve, const MetricSpec& spec, std::size_t n) {
  if (n < 8) {
    throw ParameterError("resample needs n >= 8, got " + std::to_string(n));
  }
  if (curve.is_constant()) {
    throw ParameterError("cannot resample a constant curve");
  }
  const std::size_t m = curve.size();
  std::vector<double> edges(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    edges[i] = edge_length(spec, curve[i], curve[(i + 1) % m]);
    total += edges[i];
  }
  const double spacing = total / static_cast<double>(n);
  std::vector<Vec3> out;
  out.reserve(n);
  out.push_back(curve[0]);
  std::size_t edge = 0;
  double edge_start = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double target = spacing * static_cast<double>(k);
    while (edge + 1 < m && edge_start + edges[edge] <= target) {
      edge_start += edges[edge];
      ++edge;
    }
    // Cubic Lagrange through the four vertices around the edge, in arc
    // length. Chord interpolation would cut inside convex arcs and bias the
    // flow toward shrinking at every resample.
    const double u = std::clamp(target - edge_start, 0.0, edges[edge]);
    const std::size_t prev = (edge + m - 1) % m;
    const std::size_t next = (edge + 1) % m;
    const double nodes[4] = {-edges[prev], 0.0, edges[edge], edges[edge] + edges[next]};
    const Vec3* pts[4] = {&curve[prev], &curve[edge], &curve[next], &curve[(edge + 2) % m]};
    Vec3 p;
    for (int a = 0; a < 4; ++a) {
      double w = 1.0;
      for (int b = 0; b < 4; ++b) {
        if (b != a) w *= (u - nodes[b]) / (nodes[a] - nodes[b]);
      }
      p += w * *pts[a];
    }
    out.push_back(normalized(p));
  }
  return DiscreteCurve::polyline(std::move(out));
}

namespace detail {

// Euclidean distance between the chords [a, b] and [c, d] in R^3.
inline double segment_distance(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Vec3 u = b - a, v = d - c, w = a - c;
  const double uu = dot(u, u), uv = dot(u, v), vv = dot(v, v), uw = dot(u, w), vw = dot(v, w);
  const double den = uu * vv - uv * uv;
  double s = 0.0, t = 0.0;
  if (den > 1e-300 * uu * vv && den > 0.0) {
    s = std::clamp((uv * vw - vv * uw) / den, 0.0, 1.0);
  }
  t = vv > 0.0 ? (uv * s + vw) / vv : 0.0;
  if (t < 0.0) {
    t = 0.0;
    s = uu > 0.0 ? std::clamp(-uw / uu, 0.0, 1.0) : 0.0;
  } else if (t > 1.0) {
    t = 1.0;
    s = uu > 0.0 ? std::clamp((uv - uw) / uu, 0.0, 1.0) : 0.0;
  }
  return norm(w + s * u - t * v);
}

inline double orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

enum class ArcRelation { kApart, kCross, kTouch };

// Relation of the great-arc segments ab and cd. Gnomonic projection about
// their common centre maps both arcs to straight segments. A crossing is
// only reported when every endpoint keeps more than `tol` from the other
// segment's line; a sign change closer than that is a touch.
inline ArcRelation arc_relation(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                                double tol) {
  const Vec3 centre = normalized(a + b + c + d);
  const auto frame = orthonormal_frame(centre);
  auto proj = [&](const Vec3& x) {
    const double s = dot(x, centre);
    return std::pair{dot(x, frame[0]) / s, dot(x, frame[1]) / s};
  };
  const auto [ax, ay] = proj(a);
  const auto [bx, by] = proj(b);
  const auto [cx, cy] = proj(c);
  const auto [dx, dy] = proj(d);
  const double o1 = orient2d(ax, ay, bx, by, cx, cy);
  const double o2 = orient2d(ax, ay, bx, by, dx, dy);
  const double o3 = orient2d(cx, cy, dx, dy, ax, ay);
  const double o4 = orient2d(cx, cy, dx, dy, bx, by);
  if (((o1 > 0) == (o2 > 0)) || ((o3 > 0) == (o4 > 0))) return ArcRelation::kApart;
  const double lab = std::hypot(bx - ax, by - ay);
  const double lcd = std::hypot(dx - cx, dy - cy);
  const double margin = std::min(std::min(std::abs(o1), std::abs(o2)) / lab,
                                 std::min(std::abs(o3), std::abs(o4)) / lcd);
  return margin > tol ? ArcRelation::kCross : ArcRelation::kTouch;
}

}  // namespace detail

inline constexpr double kEmbeddingClearance = 1e-10;

// True iff no two non-adjacent arcs meet. A clean crossing decides at once;
// pairs closer than 1e-10 without one cannot be certified either way and
// raise AmbiguousEmbeddingError.
inline bool is_embedded(const DiscreteCurve& curve) {
  if (curve.is_constant()) return true;
  const std::size_t n = curve.size();
  if (n < 4) return true;
  std::vector<Vec3> mids(n);
  std::vector<double> radii(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& a = curve[i];
    const Vec3& b = curve[(i + 1) % n];
    mids[i] = 0.5 * (a + b);
    radii[i] = 0.5 * distance(a, b);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the seam
      const double reach = radii[i] + radii[j] + 1e-9;
      if (dot(mids[i] - mids[j], mids[i] - mids[j]) > reach * reach) continue;
      const Vec3& a = curve[i];
      const Vec3& b = curve[(i + 1) % n];
      const Vec3& c = curve[j];
      const Vec3& d = curve[(j + 1) % n];
      const auto relation = detail::arc_relation(a, b, c, d, kEmbeddingClearance);
      if (relation == detail::ArcRelation::kCross) return false;
      if (relation == detail::ArcRelation::kTouch ||
          detail::segment_distance(a, b, c, d) < kEmbeddingClearance) {
        throw AmbiguousEmbeddingError("segments " + std::to_string(i) + " and " +
                                      std::to_string(j) + " closer than 1e-10");
      }
    }
  }
  return true;
}

// Circle cut from S^2 by the plane {y : <y, x> = offset}, sampled at n
// uniform angles; |offset| = 1 yields the constant curve at offset * x.
inline DiscreteCurve plane_section(const Vec3& x, double offset, std::size_t n) {
  if (n < 3) {
    throw ParameterError("plane_section needs n >= 3");
  }
  const Vec3 axis = normalized(x);
  if (std::abs(offset) >= 1.0) {
    return DiscreteCurve::constant(offset > 0 ? axis : -axis);
  }
  const auto frame = orthonormal_frame(axis);
  const double radius = std::sqrt(1.0 - offset * offset);
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    pts.push_back(normalized(offset * axis +
                             radius * (std::cos(t) * frame[0] + std::sin(t) * frame[1])));
  }
  return DiscreteCurve::polyline(std::move(pts));
}

}  // namespace zollab
