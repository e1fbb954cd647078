#pragma once

// Curve-shortening flow d/dt gamma = kappa * nu on a metric of revolution,
// integrated with explicit Euler under a parabolic time-step cap.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "zollab/curves.hpp"
#include "zollab/errors.hpp"
#include "zollab/metrics.hpp"

namespace zollab {

struct FlowParams {
  std::size_t vertices = 256;      // target vertex count at unit scale
  double safety = 0.4;             // dt = safety * h_min^2 / max(1, kappa_max)
  double collapse_length = 1e-2;   // below this length the run has collapsed
  double geodesic_tol = 1e-3;      // sup of curvature magnitude at convergence
  double stall_tol = 1e-6;         // relative length decrease per unit time
  double max_time = 200.0;
  std::size_t resample_every = 100;
  std::size_t min_vertices = 24;   // floor for shrinking curves
  double trace_interval = 1e-2;    // trace spacing in flow time, divided by max(1, kappa^2)

  void validate() const {
    if (vertices < 8 || min_vertices < 8) {
      throw ParameterError("flow: vertex counts must be at least 8");
    }
    if (!(safety > 0.0 && safety <= 0.5)) {
      throw ParameterError("flow: safety factor must lie in (0, 0.5]");
    }
    if (!(collapse_length > 0.0 && geodesic_tol > 0.0 && stall_tol > 0.0 && max_time > 0.0 &&
          trace_interval > 0.0)) {
      throw ParameterError("flow: tolerances and time budget must be positive");
    }
    if (resample_every == 0) {
      throw ParameterError("flow: resample cadence must be positive");
    }
  }
};

struct TraceSample {
  double t = 0.0;
  double length = 0.0;
  double kappa_max = 0.0;
  double kappa_sq_integral = 0.0;
  std::size_t vertices = 0;
};

using FlowTrace = std::vector<TraceSample>;

enum class FlowStatus { kCollapsed, kConvergedGeodesic, kBudgetExhausted };

inline std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::kCollapsed:
      return "Collapsed";
    case FlowStatus::kConvergedGeodesic:
      return "ConvergedGeodesic";
    case FlowStatus::kBudgetExhausted:
      return "BudgetExhausted";
  }
  return "unknown";
}

struct FlowOutcome {
  FlowStatus status = FlowStatus::kBudgetExhausted;
  DiscreteCurve curve = DiscreteCurve::constant({0.0, 0.0, 1.0});  // final curve; the point if collapsed
  double limit_length = 0.0;  // 0 for collapsed runs
  double stop_time = 0.0;
  double final_kappa_max = 0.0;
  std::size_t steps = 0;
  // Largest (L_{k+1} - L_k) / dt over all steps, resampling included.
  double max_length_growth_rate = -std::numeric_limits<double>::infinity();
  FlowTrace trace;
};

namespace detail {

// Moves every vertex by dt * kappa * nu and projects back to the sphere.
inline DiscreteCurve advance(const DiscreteCurve& curve, const CurveGeometry& geo, double dt) {
  std::vector<Vec3> next(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    next[i] = normalized(curve[i] + dt * geo.vertices[i].curvature_normal);
  }
  return DiscreteCurve::polyline(std::move(next));
}

inline double stable_step(const CurveGeometry& geo, double safety) {
  return safety * geo.min_edge * geo.min_edge / std::max(1.0, geo.kappa_max);
}

inline Vec3 centroid_point(const DiscreteCurve& curve) {
  Vec3 acc;
  for (const Vec3& p : curve.vertices()) acc += p;
  return norm(acc) > 0.0 ? normalized(acc) : curve[0];
}

}  // namespace detail

inline constexpr double kMaxSafety = 0.5;

// One explicit Euler step. dt must respect 0.5 * h_min^2 / max(1, kappa_max).
inline DiscreteCurve step(const DiscreteCurve& curve, const MetricSpec& spec, double dt) {
  if (curve.is_constant()) {
    throw ParameterError("step: constant curves do not flow");
  }
  if (!(dt > 0.0)) {
    throw ParameterError("step: dt must be positive");
  }
  const CurveGeometry geo = analyze(curve, spec);
  const double bound = detail::stable_step(geo, kMaxSafety);
  if (dt > bound) {
    throw ParameterError("step: dt = " + std::to_string(dt) + " exceeds stability bound " +
                         std::to_string(bound));
  }
  return detail::advance(curve, geo, dt);
}

// Vertex count for a curve of the given length: spacing 2*pi*sqrt(scale)/n,
// clamped to [min_vertices, vertices] and rounded up to even. Even counts
// keep antipodal vertex pairs of centrally symmetric curves intact.
inline std::size_t working_vertices(const FlowParams& params, const MetricSpec& spec,
                                    double curve_length) {
  const double spacing =
      2.0 * std::numbers::pi * std::sqrt(spec.scale()) / static_cast<double>(params.vertices);
  auto wanted = static_cast<std::size_t>(std::ceil(curve_length / spacing));
  wanted = std::clamp(wanted, params.min_vertices, params.vertices);
  return wanted + wanted % 2;
}

inline FlowOutcome evolve(const DiscreteCurve& initial, const MetricSpec& spec,
                          const FlowParams& params) {
  params.validate();
  FlowOutcome out;
  if (initial.is_constant()) {
    out.status = FlowStatus::kCollapsed;
    out.curve = initial;
    out.trace.push_back({0.0, 0.0, 0.0, 0.0, initial.size()});
    return out;
  }
  bool embedded = false;
  try {
    embedded = is_embedded(initial);
  } catch (const AmbiguousEmbeddingError& e) {
    throw PreconditionError(std::string("evolve: input embedding is ambiguous: ") + e.what());
  }
  if (!embedded) {
    throw PreconditionError("evolve: input curve is not embedded");
  }

  DiscreteCurve current =
      resample(initial, spec, working_vertices(params, spec, length(initial, spec)));
  CurveGeometry geo = analyze(current, spec);
  double t = 0.0;
  TraceSample last{t, geo.length, geo.kappa_max, geo.kappa_sq_integral, current.size()};
  out.trace.push_back(last);

  auto finish = [&](FlowStatus status) {
    out.status = status;
    out.stop_time = t;
    out.final_kappa_max = geo.kappa_max;
    if (out.trace.back().t < t) {
      out.trace.push_back({t, geo.length, geo.kappa_max, geo.kappa_sq_integral, current.size()});
    }
    if (status == FlowStatus::kCollapsed) {
      out.curve = DiscreteCurve::constant(detail::centroid_point(current));
      out.limit_length = 0.0;
    } else {
      out.curve = current;
      out.limit_length = geo.length;
    }
    return out;
  };

  while (true) {
    if (geo.length < params.collapse_length) {
      return finish(FlowStatus::kCollapsed);
    }
    if (t >= params.max_time) {
      return finish(FlowStatus::kBudgetExhausted);
    }
    const double dt = std::min(detail::stable_step(geo, params.safety), params.max_time - t);
    const double before = geo.length;
    current = detail::advance(current, geo, dt);
    t += dt;
    ++out.steps;

    const bool checkpoint = out.steps % params.resample_every == 0;
    if (checkpoint) {
      current = resample(current, spec, working_vertices(params, spec, before));
      bool ok = false;
      try {
        ok = is_embedded(current);
      } catch (const AmbiguousEmbeddingError&) {
        ok = false;
      }
      if (!ok) {
        throw IntegrityError("flow lost embeddedness at t = " + std::to_string(t) +
                             "; refine the discretization");
      }
    }
    geo = analyze(current, spec);
    out.max_length_growth_rate = std::max(out.max_length_growth_rate, (geo.length - before) / dt);

    const TraceSample sample{t, geo.length, geo.kappa_max, geo.kappa_sq_integral, current.size()};
    // Trace spacing follows the parabolic time scale 1/kappa^2, so the fast
    // final phase of a collapse is resolved as well as the slow start.
    const double spacing = params.trace_interval / std::max(1.0, geo.kappa_max * geo.kappa_max);
    if (checkpoint || t - out.trace.back().t >= spacing) {
      out.trace.push_back(sample);
    }
    if (checkpoint) {
      const double stall = (last.length - sample.length) / (sample.length * (sample.t - last.t));
      last = sample;
      if (geo.kappa_max <= params.geodesic_tol && stall <= params.stall_tol) {
        return finish(FlowStatus::kConvergedGeodesic);
      }
    }
  }
}

struct LengthDerivativeCheck {
  double max_defect = 0.0;
  std::size_t intervals_used = 0;
  std::size_t intervals_skipped = 0;
};

// Compares the trace's finite-difference dL/dt with -integral kappa^2 ds
// (trapezoid over each interval). Intervals touching a sample with
// curvature above kappa_cap are skipped and counted, and so are intervals
// across a change of vertex count: the polygon under-measures length by
// O(1/n^2), so a new n steps L without any flow.
inline LengthDerivativeCheck check_length_derivative(const FlowTrace& trace,
                                                     double kappa_cap = 10.0) {
  if (trace.size() < 10) {
    throw ParameterError("check_length_derivative needs at least 10 trace samples");
  }
  LengthDerivativeCheck result;
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const TraceSample& a = trace[k - 1];
    const TraceSample& b = trace[k];
    if (a.kappa_max > kappa_cap || b.kappa_max > kappa_cap || !(b.t > a.t) ||
        a.vertices != b.vertices) {
      ++result.intervals_skipped;
      continue;
    }
    const double rate = (b.length - a.length) / (b.t - a.t);
    const double dissipation = 0.5 * (a.kappa_sq_integral + b.kappa_sq_integral);
    const double defect = std::abs(rate + dissipation) / std::max(dissipation, 1e-8);
    result.max_defect = std::max(result.max_defect, defect);
    ++result.intervals_used;
  }
  return result;
}

}  // namespace zollab
