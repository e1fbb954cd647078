#pragma once

// Numerical checks of two conclusions about closed geodesics.
//
// zoll:  the simple length spectrum is a single value l and random
//        geodesics all close up, simply, at arclength l.
// cover: every sampled point lies on a simple closed geodesic whose length
//        is in the spectrum. Only meaningful when the spectrum has at most
//        two values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "zollab/geodesics.hpp"
#include "zollab/metrics.hpp"
#include "zollab/parallel.hpp"

namespace zollab {

struct LaunchEvidence {
  Vec3 point;
  double angle = 0.0;  // launch angle from orthonormal_frame(point)[0]
  double closure_defect = 0.0;
  bool simple = false;
  bool pass = false;
};

struct ZollVerdict {
  bool pass = false;
  double tolerance = 1e-3;
  std::vector<double> sigma_s;
  std::vector<LaunchEvidence> launches;
  std::string reason;
};

struct CoverVerdict {
  bool pass = false;
  bool hypothesis_met = true;
  double tolerance = 1e-3;
  std::vector<double> sigma_s;
  double length = 0.0;  // spectrum value that covered every point
  std::vector<LaunchEvidence> points;
  std::string reason;
};

inline Vec3 random_sphere_point(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  while (true) {
    const Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
    const double r = norm(v);
    if (r > 1e-6) return v / r;
  }
}

inline LaunchEvidence evaluate_launch(const MetricSpec& spec, const Vec3& p, double angle,
                                      double length, double tol) {
  LaunchEvidence ev{p, angle};
  const GeodesicTrajectory traj = shoot(spec, p, launch_direction(spec, p, angle), length);
  ev.closure_defect = closure_defect(traj, length);
  ev.simple = is_simple_closed(traj, length);
  ev.pass = ev.simple && ev.closure_defect <= tol;
  return ev;
}

inline ZollVerdict verify_zoll(const MetricSpec& spec, const SpectrumReport& report,
                               std::size_t launches = 20, std::uint64_t seed = 0,
                               double tol = 1e-3, std::size_t workers = 1) {
  ZollVerdict v;
  v.tolerance = tol;
  v.sigma_s = report.sigma_s;
  if (report.sigma_s.size() != 1) {
    v.reason = "simple length spectrum has " + std::to_string(report.sigma_s.size()) +
               " values; a Zoll metric has exactly one";
    return v;
  }
  const double length = report.sigma_s.front();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<std::pair<Vec3, double>> draws;
  for (std::size_t k = 0; k < launches; ++k) {
    const Vec3 p = random_sphere_point(rng);
    draws.emplace_back(p, angle(rng));
  }
  v.launches.resize(launches);
  parallel_for(launches, workers, [&](std::size_t k) {
    v.launches[k] = evaluate_launch(spec, draws[k].first, draws[k].second, length, tol);
  });
  const auto failed = std::count_if(v.launches.begin(), v.launches.end(),
                                    [](const auto& e) { return !e.pass; });
  v.pass = failed == 0;
  v.reason = v.pass ? "all launches close simply at the spectrum value"
                    : std::to_string(failed) + " launches fail to close simply at the spectrum value";
  return v;
}

// Best launch angle at p for closing at `length`: a coarse scan over
// [0, pi) (a closed geodesic is closed in both directions) followed by
// Brent refinement around the best scan angle.
inline LaunchEvidence best_closing_launch(const MetricSpec& spec, const Vec3& p, double length,
                                          double tol, std::size_t scan = 36) {
  auto defect = [&](double a) {
    return closure_defect(shoot(spec, p, launch_direction(spec, p, a), length), length);
  };
  const double width = std::numbers::pi / static_cast<double>(scan);
  double best_angle = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < scan; ++k) {
    const double a = width * static_cast<double>(k);
    const double d = defect(a);
    if (d < best) {
      best = d;
      best_angle = a;
    }
  }
  std::uintmax_t iterations = 60;
  const auto [angle, value] = boost::math::tools::brent_find_minima(
      defect, best_angle - width, best_angle + width, 30, iterations);
  if (value < best) best_angle = angle;
  return evaluate_launch(spec, p, best_angle, length, tol);
}

inline CoverVerdict verify_cover(const MetricSpec& spec, const SpectrumReport& report,
                                 std::size_t points = 50, std::uint64_t seed = 0,
                                 double tol = 1e-3, std::size_t workers = 1) {
  CoverVerdict v;
  v.tolerance = tol;
  v.sigma_s = report.sigma_s;
  if (report.sigma_s.size() > 2) {
    v.hypothesis_met = false;
    v.reason = "hypothesis not met: simple length spectrum has more than two values";
    return v;
  }
  if (report.sigma_s.empty()) {
    v.reason = "simple length spectrum is empty";
    return v;
  }
  std::mt19937_64 rng(seed);
  std::vector<Vec3> samples;
  for (std::size_t k = 0; k < points; ++k) samples.push_back(random_sphere_point(rng));

  std::size_t best_failures = points + 1;
  for (double length : report.sigma_s) {
    std::vector<LaunchEvidence> evidence(points);
    parallel_for(points, workers, [&](std::size_t k) {
      evidence[k] = best_closing_launch(spec, samples[k], length, tol);
    });
    const auto failures = static_cast<std::size_t>(std::count_if(
        evidence.begin(), evidence.end(), [](const auto& e) { return !e.pass; }));
    if (failures < best_failures) {
      best_failures = failures;
      v.length = length;
      v.points = std::move(evidence);
    }
    if (failures == 0) break;
  }
  v.pass = best_failures == 0;
  v.reason = v.pass ? "every sampled point lies on a simple closed geodesic of length " +
                          std::to_string(v.length)
                    : std::to_string(best_failures) +
                          " sampled points lie on no simple closed geodesic of a spectrum length";
  return v;
}

}  // namespace zollab
