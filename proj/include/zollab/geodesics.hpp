#pragma once

// Geodesic shooting oracle and the simple length spectrum.
//
// Geodesics are integrated in ambient coordinates on the unit sphere:
// x'' = a(x, x') - |x'|^2 x, where a is the closed-form tangential
// correction of MetricSpec. Classical RK4 with a fixed step; after each
// step the point is put back on the sphere and the velocity is projected
// and g-normalized, so speed drift stays at round-off level.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zollab/curves.hpp"
#include "zollab/errors.hpp"
#include "zollab/flow.hpp"
#include "zollab/metrics.hpp"
#include "zollab/parallel.hpp"

namespace zollab {

inline constexpr double kShootStep = 1e-3;
inline constexpr double kMaxShootLength = 100.0;

struct GeodesicSample {
  double s = 0.0;
  Vec3 p;
  Vec3 v;
};

struct GeodesicTrajectory {
  MetricSpec spec;
  double step = kShootStep;
  std::vector<GeodesicSample> samples;

  double extent() const noexcept { return samples.empty() ? 0.0 : samples.back().s; }
  const GeodesicSample& start() const { return samples.front(); }
};

namespace detail {

struct PhaseState {
  Vec3 p;
  Vec3 v;
};

inline PhaseState geodesic_rhs(const MetricSpec& spec, const PhaseState& x) {
  return {x.v, spec.geodesic_correction(x.p, x.v) - dot(x.v, x.v) * x.p};
}

inline PhaseState rk4_step(const MetricSpec& spec, const PhaseState& x, double h) {
  auto shift = [](const PhaseState& a, const PhaseState& k, double c) {
    return PhaseState{a.p + c * k.p, a.v + c * k.v};
  };
  const PhaseState k1 = geodesic_rhs(spec, x);
  const PhaseState k2 = geodesic_rhs(spec, shift(x, k1, 0.5 * h));
  const PhaseState k3 = geodesic_rhs(spec, shift(x, k2, 0.5 * h));
  const PhaseState k4 = geodesic_rhs(spec, shift(x, k3, h));
  PhaseState out{x.p + (h / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
                 x.v + (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
  out.p = normalized(out.p);
  out.v = project_tangent(out.p, out.v);
  out.v = out.v / spec.norm(out.p, out.v);
  return out;
}

}  // namespace detail

inline GeodesicTrajectory shoot(const MetricSpec& spec, const Vec3& p, const Vec3& v, double s_max,
                                double step = kShootStep) {
  detail::require_on_sphere(p);
  detail::require_tangent(p, v);
  if (std::abs(spec.norm(p, v) - 1.0) > 1e-6) {
    throw PreconditionError("shoot: initial velocity must have unit g-length");
  }
  if (!(s_max > 0.0 && s_max <= kMaxShootLength)) {
    throw PreconditionError("shoot: arclength must lie in (0, 100]");
  }
  if (!(step > 0.0)) {
    throw ParameterError("shoot: step must be positive");
  }
  const auto count = static_cast<std::size_t>(std::ceil(s_max / step - 1e-9));
  const double h = s_max / static_cast<double>(count);
  GeodesicTrajectory traj{spec, h, {}};
  traj.samples.reserve(count + 1);
  detail::PhaseState x{p, v};
  traj.samples.push_back({0.0, x.p, x.v});
  for (std::size_t k = 1; k <= count; ++k) {
    x = detail::rk4_step(spec, x, h);
    traj.samples.push_back({h * static_cast<double>(k), x.p, x.v});
  }
  return traj;
}

// Unit tangent at p making angle psi with the eastward direction (the
// first vector of orthonormal_frame(p)), normalized in g.
inline Vec3 launch_direction(const MetricSpec& spec, const Vec3& p, double psi) {
  const auto frame = orthonormal_frame(p);
  const Vec3 dir = std::cos(psi) * frame[0] + std::sin(psi) * frame[1];
  return dir / spec.norm(p, dir);
}

// State at arclength s, advanced from the nearest earlier sample.
inline GeodesicSample trajectory_at(const GeodesicTrajectory& traj, double s) {
  if (traj.samples.empty() || s < 0.0 || s > traj.extent() + 1e-12) {
    throw PreconditionError("trajectory_at: arclength outside the trajectory");
  }
  auto k = static_cast<std::size_t>(std::floor(s / traj.step));
  k = std::min(k, traj.samples.size() - 1);
  const GeodesicSample& base = traj.samples[k];
  const double rest = s - base.s;
  if (rest <= 0.0) return base;
  const auto x = detail::rk4_step(traj.spec, {base.p, base.v}, rest);
  return {s, x.p, x.v};
}

inline double closure_defect(const GeodesicTrajectory& traj, double s_probe) {
  const GeodesicSample end = trajectory_at(traj, s_probe);
  const GeodesicSample& start = traj.start();
  return distance(end.p, start.p) + distance(end.v, start.v);
}

// Clairaut integral G(theta) dphi/ds = scale * (x v_y - y v_x). Samples
// closer than pole_clearance to a pole are left out.
inline std::vector<double> clairaut_series(const MetricSpec& spec, const GeodesicTrajectory& traj,
                                           double pole_clearance = 1e-3) {
  std::vector<double> out;
  out.reserve(traj.samples.size());
  for (const auto& smp : traj.samples) {
    if (1.0 - std::abs(smp.p.z) < 0.5 * pole_clearance * pole_clearance) continue;
    out.push_back(spec.scale() * (smp.p.x * smp.v.y - smp.p.y * smp.v.x));
  }
  return out;
}

// max |c_i - c_0| relative to |c_0|. For near-meridian launches c_0 is
// tiny, so the reference is floored at 1e-3 of the largest attainable value.
inline double clairaut_drift(const MetricSpec& spec, const std::vector<double>& series) {
  if (series.empty()) return 0.0;
  const double ref = std::max(std::abs(series.front()), 1e-3 * std::sqrt(spec.scale()));
  double worst = 0.0;
  for (double c : series) worst = std::max(worst, std::abs(c - series.front()));
  return worst / ref;
}

// Samples the trajectory every `spacing` of arclength over [0, period)
// and tests the closed polyline for self-intersections.
inline bool is_simple_closed(const GeodesicTrajectory& traj, double period, double spacing = 1e-2) {
  if (!(period > 0.0) || period > traj.extent() + 1e-12) {
    throw PreconditionError("is_simple_closed: period outside the trajectory");
  }
  const auto count = static_cast<std::size_t>(std::max(8.0, std::round(period / spacing)));
  std::vector<Vec3> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    pts.push_back(trajectory_at(traj, period * static_cast<double>(k) / static_cast<double>(count)).p);
  }
  try {
    return is_embedded(DiscreteCurve::polyline(std::move(pts)));
  } catch (const Error&) {
    return false;
  }
}

struct SpectrumEntry {
  double length = 0.0;            // mean limit length of the cluster
  std::size_t count = 0;          // contributing flow runs
  DiscreteCurve representative = DiscreteCurve::constant({0.0, 0.0, 1.0});
  double curvature_residual = 0.0;  // sup curvature magnitude of the representative
  double closure_defect = 0.0;      // shooting from the representative at `length`
  bool simple = false;
  bool validated = false;
};

struct SpectrumReport {
  double delta_len = 1e-2;
  double closure_tolerance = 1e-2;
  std::vector<SpectrumEntry> entries;
  std::vector<double> sigma_s;  // validated entries only

  bool fully_validated() const noexcept {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.validated; });
  }
};

// Shoots from vertex 0 of a closed curve along its discrete tangent for one
// period and reports (closure defect, simplicity of the shot geodesic).
inline std::pair<double, bool> validate_closed_geodesic(const MetricSpec& spec,
                                                        const DiscreteCurve& curve, double period) {
  const Vec3 tangent = vertex_tangent(curve, spec, 0);
  const GeodesicTrajectory traj = shoot(spec, curve[0], tangent, period);
  return {closure_defect(traj, period), is_simple_closed(traj, period)};
}

inline SpectrumReport simple_spectrum(const MetricSpec& spec, const std::vector<FlowOutcome>& outcomes,
                                      double delta_len = 1e-2, double closure_tol = 1e-2,
                                      std::size_t workers = 1) {
  if (!(delta_len > 0.0) || !(closure_tol > 0.0)) {
    throw ParameterError("simple_spectrum: tolerances must be positive");
  }
  SpectrumReport report;
  report.delta_len = delta_len;
  report.closure_tolerance = closure_tol;

  std::vector<const FlowOutcome*> converged;
  for (const auto& o : outcomes) {
    if (o.status == FlowStatus::kConvergedGeodesic) converged.push_back(&o);
  }
  std::stable_sort(converged.begin(), converged.end(), [](const auto* a, const auto* b) {
    return a->limit_length < b->limit_length;
  });

  // Single-linkage clusters along the sorted lengths, closed when the gap
  // to the next length exceeds delta_len.
  std::vector<std::vector<const FlowOutcome*>> clusters;
  for (const auto* o : converged) {
    if (clusters.empty() || o->limit_length - clusters.back().back()->limit_length > delta_len) {
      clusters.emplace_back();
    }
    clusters.back().push_back(o);
  }

  report.entries.resize(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    SpectrumEntry& e = report.entries[c];
    const auto& members = clusters[c];
    double sum = 0.0;
    for (const auto* o : members) sum += o->limit_length;
    e.length = sum / static_cast<double>(members.size());
    e.count = members.size();
    const auto* best = *std::min_element(members.begin(), members.end(), [](auto* a, auto* b) {
      return a->final_kappa_max < b->final_kappa_max;
    });
    e.representative = best->curve;
    e.curvature_residual = best->final_kappa_max;
  }

  parallel_for(report.entries.size(), workers, [&](std::size_t c) {
    SpectrumEntry& e = report.entries[c];
    bool embedded = false;
    try {
      embedded = is_embedded(e.representative);
    } catch (const AmbiguousEmbeddingError&) {
      embedded = false;
    }
    const auto [defect, simple] = validate_closed_geodesic(spec, e.representative, e.length);
    e.closure_defect = defect;
    e.simple = simple;
    e.validated = embedded && simple && defect <= closure_tol;
  });

  for (const auto& e : report.entries) {
    if (e.validated) report.sigma_s.push_back(e.length);
  }
  return report;
}

}  // namespace zollab
