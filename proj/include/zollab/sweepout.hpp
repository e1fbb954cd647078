#pragma once

// Plane-section sweepout of S^2 and upper-bound estimates of the three
// Lusternik-Schnirelmann minmax values.
//
// A member ([x], lambda) of the tautological ball bundle over RP^2 is the
// circle S^2 ∩ {y : <y, x> = lambda}; members with |lambda| = 1 are
// constant curves. Each estimate is the largest limit length reached by
// flowing every member of a fixed representative subfamily:
//
//   l1  meridian loop     great circles through the poles, rotated by pi
//   l2  great circles     the zero section, lambda = 0
//   l3  full family       directions x offsets
//
// These are upper bounds of the true minmax values up to discretization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "zollab/curves.hpp"
#include "zollab/errors.hpp"
#include "zollab/flow.hpp"
#include "zollab/metrics.hpp"
#include "zollab/parallel.hpp"

namespace zollab {

struct PlaneFamilyIndex {
  Vec3 direction{0.0, 0.0, 1.0};
  double offset = 0.0;

  // (x, lambda) and (-x, -lambda) are the same element; the canonical
  // representative has x_z > 0, or x_z = 0 with (x_x, x_y) lexicographically positive.
  static PlaneFamilyIndex canonical(const Vec3& x, double offset) {
    const bool flip =
        x.z < 0.0 || (x.z == 0.0 && (x.x < 0.0 || (x.x == 0.0 && x.y < 0.0)));
    PlaneFamilyIndex idx;
    idx.direction = flip ? -x : x;
    idx.offset = flip ? -offset : offset;
    if (idx.offset == 0.0) idx.offset = 0.0;  // drop the sign of -0
    return idx;
  }

  bool is_boundary() const noexcept { return std::abs(offset) >= 1.0; }

  auto key() const noexcept { return std::tuple{direction.x, direction.y, direction.z, offset}; }
};

inline DiscreteCurve circle_from_plane(const Vec3& x, double offset, std::size_t n) {
  if (std::abs(norm(x) - 1.0) > kSphereTolerance) {
    throw PreconditionError("circle_from_plane: direction must be a unit vector");
  }
  if (n < 8) {
    throw ParameterError("circle_from_plane: n must be at least 8");
  }
  if (!(offset >= -1.0 && offset <= 1.0)) {
    throw ParameterError("circle_from_plane: offset must lie in [-1, 1]");
  }
  const PlaneFamilyIndex idx = PlaneFamilyIndex::canonical(x, offset);
  return plane_section(idx.direction, idx.offset, n);
}

inline DiscreteCurve circle_from_plane(const PlaneFamilyIndex& idx, std::size_t n) {
  return circle_from_plane(idx.direction, idx.offset, n);
}

// Fibonacci spiral on the closed upper hemisphere, starting at the north pole.
inline std::vector<Vec3> hemisphere_directions(std::size_t count) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> dirs;
  dirs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double z = 1.0 - static_cast<double>(k) / static_cast<double>(count);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(k);
    dirs.push_back(PlaneFamilyIndex::canonical({rho * std::cos(phi), rho * std::sin(phi), z}, 0.0)
                       .direction);
  }
  return dirs;
}

inline std::vector<double> grid_offsets(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = count == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  if (count % 2 == 1) out[count / 2] = 0.0;
  return out;
}

struct SweepGrid {
  std::size_t n_dir = 64;
  std::size_t n_off = 9;
  std::size_t n_meridian = 32;

  // Offsets {-1, 1} only: every member is a constant curve.
  bool boundary_only() const noexcept { return n_off == 2; }

  void validate() const {
    if (n_dir < 16) throw ParameterError("sweep grid needs at least 16 directions");
    if (n_off < 5 && !boundary_only()) {
      throw ParameterError("sweep grid needs at least 5 offsets (or exactly the boundary {-1, 1})");
    }
    if (n_meridian < 2) throw ParameterError("meridian loop needs at least 2 samples");
  }

  // The offset used by the one- and two-dimensional subfamilies.
  double central_offset() const {
    const auto offs = grid_offsets(n_off);
    return *std::min_element(offs.begin(), offs.end(),
                             [](double a, double b) { return std::abs(a) < std::abs(b); });
  }
};

enum class Subfamily { kMeridianLoop, kGreatCircles, kFull };

inline std::string to_string(Subfamily s) {
  switch (s) {
    case Subfamily::kMeridianLoop:
      return "meridian_loop";
    case Subfamily::kGreatCircles:
      return "great_circles";
    case Subfamily::kFull:
      return "full";
  }
  return "unknown";
}

inline std::vector<PlaneFamilyIndex> subfamily(Subfamily kind, const SweepGrid& grid) {
  std::vector<PlaneFamilyIndex> out;
  const double central = grid.central_offset();
  switch (kind) {
    case Subfamily::kMeridianLoop:
      for (std::size_t j = 0; j < grid.n_meridian; ++j) {
        const double a = std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid.n_meridian);
        out.push_back(PlaneFamilyIndex::canonical({std::cos(a), std::sin(a), 0.0}, central));
      }
      break;
    case Subfamily::kGreatCircles:
      for (const Vec3& x : hemisphere_directions(grid.n_dir)) {
        out.push_back(PlaneFamilyIndex::canonical(x, central));
      }
      break;
    case Subfamily::kFull:
      for (const Vec3& x : hemisphere_directions(grid.n_dir)) {
        for (double lambda : grid_offsets(grid.n_off)) {
          out.push_back(PlaneFamilyIndex::canonical(x, lambda));
        }
      }
      break;
  }
  return out;
}

struct MemberResult {
  PlaneFamilyIndex index;
  std::optional<FlowOutcome> outcome;  // empty when the run failed
  std::string error;

  bool ok() const noexcept { return outcome.has_value(); }

  // Contribution to the minmax estimate; collapsed members give 0.
  double level() const noexcept { return outcome ? outcome->limit_length : 0.0; }
};

struct LSEstimates {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
  std::vector<MemberResult> members;  // unique members, in first-seen order
  std::vector<std::size_t> meridian_loop;  // indices into members
  std::vector<std::size_t> great_circles;
  std::vector<std::size_t> full;
  bool unreliable = false;
  std::vector<std::string> warnings;

  std::vector<FlowOutcome> outcomes() const {
    std::vector<FlowOutcome> out;
    for (const auto& m : members) {
      if (m.outcome) out.push_back(*m.outcome);
    }
    return out;
  }
};

// Flows every distinct member once (members shared by several subfamilies
// are reused) and reduces in a fixed order, so the result does not depend
// on the worker count.
inline LSEstimates estimate_ls_values(const MetricSpec& spec, const SweepGrid& grid,
                                      const FlowParams& params,
                                      std::size_t workers = default_workers()) {
  grid.validate();
  params.validate();
  LSEstimates est;
  std::map<std::tuple<double, double, double, double>, std::size_t> seen;
  auto collect = [&](Subfamily kind, std::vector<std::size_t>& ids) {
    for (const auto& idx : subfamily(kind, grid)) {
      auto [it, inserted] = seen.try_emplace(idx.key(), est.members.size());
      if (inserted) est.members.push_back({idx, std::nullopt, {}});
      ids.push_back(it->second);
    }
  };
  collect(Subfamily::kMeridianLoop, est.meridian_loop);
  collect(Subfamily::kGreatCircles, est.great_circles);
  collect(Subfamily::kFull, est.full);

  parallel_for(est.members.size(), workers, [&](std::size_t i) {
    auto& member = est.members[i];
    try {
      member.outcome = evolve(circle_from_plane(member.index, params.vertices), spec, params);
    } catch (const Error& e) {
      member.error = e.what();
    }
  });

  bool all_constant = true;
  for (const auto& m : est.members) {
    all_constant = all_constant && m.index.is_boundary();
    if (!m.ok()) {
      est.unreliable = true;
      est.warnings.push_back("member run failed: " + m.error);
    } else if (m.outcome->status == FlowStatus::kBudgetExhausted) {
      est.unreliable = true;
      est.warnings.push_back("member run exhausted the time budget");
    }
  }
  if (all_constant) {
    est.unreliable = true;
    est.warnings.push_back("degenerate grid: every member is a constant curve");
  }
  auto reduce = [&](const std::vector<std::size_t>& ids) {
    double best = 0.0;
    for (std::size_t id : ids) best = std::max(best, est.members[id].level());
    return best;
  };
  est.l1 = reduce(est.meridian_loop);
  est.l2 = reduce(est.great_circles);
  est.l3 = reduce(est.full);
  return est;
}

}  // namespace zollab
