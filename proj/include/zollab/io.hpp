#pragma once

// File formats: curves and traces as CSV, metrics, configs and reports as
// JSON. Reports carry no timestamps so equal inputs give equal bytes.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "zollab/curves.hpp"
#include "zollab/errors.hpp"
#include "zollab/flow.hpp"
#include "zollab/geodesics.hpp"
#include "zollab/metrics.hpp"
#include "zollab/sweepout.hpp"
#include "zollab/topology.hpp"
#include "zollab/verify.hpp"

namespace zollab::io {

using nlohmann::json;
namespace fs = std::filesystem;

class FormatError : public Error {
 public:
  using Error::Error;
};

// ---- CSV ------------------------------------------------------------------

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

inline DiscreteCurve parse_curve_csv(const std::string& text, const std::string& origin = "curve") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(origin + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "index,x,y,z") throw FormatError(origin + ": expected header index,x,y,z");
  std::vector<Vec3> pts;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell[4];
    for (auto& c : cell) {
      if (!std::getline(fields, c, ',')) throw FormatError(origin + ": short row " + line);
    }
    try {
      if (std::stoul(cell[0]) != row) throw FormatError(origin + ": indices must run 0, 1, 2, ...");
      pts.push_back({std::stod(cell[1]), std::stod(cell[2]), std::stod(cell[3])});
    } catch (const std::logic_error&) {
      throw FormatError(origin + ": malformed row " + line);
    }
    ++row;
  }
  if (pts.empty()) throw FormatError(origin + ": no vertices");
  if (pts.size() == 1) {
    detail::require_on_sphere(pts.front());
    return DiscreteCurve::constant(pts.front());
  }
  return DiscreteCurve::polyline(std::move(pts));
}

inline DiscreteCurve read_curve_csv(const fs::path& path) {
  return parse_curve_csv(read_text(path), path.string());
}

inline std::string curve_csv(const DiscreteCurve& curve) {
  std::ostringstream out;
  out << std::setprecision(17) << "index,x,y,z\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << i << ',' << curve[i].x << ',' << curve[i].y << ',' << curve[i].z << '\n';
  }
  return out.str();
}

inline void write_curve_csv(const fs::path& path, const DiscreteCurve& curve) {
  write_text(path, curve_csv(curve));
}

inline std::string trace_csv(const FlowTrace& trace) {
  std::ostringstream out;
  out << std::setprecision(17) << "t,length,kappa_max,kappa_sq_integral,vertices\n";
  for (const auto& s : trace) {
    out << s.t << ',' << s.length << ',' << s.kappa_max << ',' << s.kappa_sq_integral << ',' << s.vertices
        << '\n';
  }
  return out.str();
}

// ---- metric and configuration --------------------------------------------

inline MetricSpec metric_from_json(const json& j) {
  try {
    const std::string family = j.at("family").get<std::string>();
    if (family == "round") {
      const double radius = j.value("radius", 1.0);
      if (!(radius > 0.0)) throw ConstructionError("round metric needs a positive radius");
      return MetricSpec::round(radius);
    }
    if (family == "ellipsoid") {
      const double r = j.at("r").get<double>();
      if (!(r > 0.0 && r <= 1.0)) throw ConstructionError("ellipsoid parameter r must lie in (0, 1]");
      return MetricSpec::ellipsoid(r);
    }
    if (family == "zoll") {
      return MetricSpec::zoll(OddProfile(j.at("h_coeffs").get<std::vector<double>>()));
    }
    throw FormatError("unknown metric family '" + family + "'");
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed metric: ") + e.what());
  }
}

inline json metric_to_json(const MetricSpec& spec) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Round>) {
          return {{"family", "round"}, {"radius", m.radius}};
        } else if constexpr (std::is_same_v<T, EllipsoidOfRevolution>) {
          return {{"family", "ellipsoid"}, {"r", m.r}};
        } else {
          return {{"family", "zoll"}, {"h_coeffs", m.h.coefficients()}};
        }
      },
      spec.variant());
}

inline json parse_json_file(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

struct RunConfig {
  std::optional<MetricSpec> metric;
  SweepGrid grid;
  FlowParams flow;
  double delta_len = 1e-2;
  std::size_t workers = default_workers();
  std::uint64_t seed = 0;
  fs::path out_dir = "out";

  void validate() const {
    grid.validate();
    flow.validate();
    if (!(delta_len > 0.0)) throw ParameterError("delta_len must be positive");
    if (workers == 0) throw ParameterError("worker count must be positive");
  }
};

// Unknown keys are rejected so that typos do not silently fall back to defaults.
inline RunConfig config_from_json(const json& j, RunConfig cfg = {}) {
  auto reject_unknown = [](const json& obj, std::initializer_list<const char*> keys,
                           const std::string& where) {
    for (const auto& [k, v] : obj.items()) {
      if (std::find_if(keys.begin(), keys.end(), [&](const char* s) { return k == s; }) ==
          keys.end()) {
        throw FormatError("unknown key '" + k + "' in " + where);
      }
    }
  };
  try {
    reject_unknown(j, {"metric", "grid", "flow", "delta_len", "workers", "seed", "out"}, "config");
    if (j.contains("metric")) cfg.metric = metric_from_json(j.at("metric"));
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      reject_unknown(g, {"n_dir", "n_off", "n_meridian"}, "grid");
      cfg.grid.n_dir = g.value("n_dir", cfg.grid.n_dir);
      cfg.grid.n_off = g.value("n_off", cfg.grid.n_off);
      cfg.grid.n_meridian = g.value("n_meridian", cfg.grid.n_meridian);
    }
    if (j.contains("flow")) {
      const json& f = j.at("flow");
      reject_unknown(f,
                     {"vertices", "safety", "collapse_length", "geodesic_tol", "stall_tol",
                      "max_time", "resample_every", "min_vertices", "trace_interval"},
                     "flow");
      auto& p = cfg.flow;
      p.vertices = f.value("vertices", p.vertices);
      p.safety = f.value("safety", p.safety);
      p.collapse_length = f.value("collapse_length", p.collapse_length);
      p.geodesic_tol = f.value("geodesic_tol", p.geodesic_tol);
      p.stall_tol = f.value("stall_tol", p.stall_tol);
      p.max_time = f.value("max_time", p.max_time);
      p.resample_every = f.value("resample_every", p.resample_every);
      p.min_vertices = f.value("min_vertices", p.min_vertices);
      p.trace_interval = f.value("trace_interval", p.trace_interval);
    }
    cfg.delta_len = j.value("delta_len", cfg.delta_len);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

// ---- loops ----------------------------------------------------------------

// {"entries": [{"path": "c000.csv"}, {"constant": [x, y, z]}, ...]}; paths
// are relative to the manifest's directory.
inline CurveLoop read_loop_manifest(const fs::path& path) {
  const json j = parse_json_file(path);
  CurveLoop loop;
  try {
    for (const json& e : j.at("entries")) {
      if (e.contains("path")) {
        loop.curves.push_back(read_curve_csv(path.parent_path() / e.at("path").get<std::string>()));
      } else if (e.contains("constant")) {
        const auto c = e.at("constant").get<std::vector<double>>();
        if (c.size() != 3) throw FormatError("constant entry needs three coordinates");
        const Vec3 p{c[0], c[1], c[2]};
        detail::require_on_sphere(p);
        loop.curves.push_back(DiscreteCurve::constant(p));
      } else {
        throw FormatError("manifest entry needs 'path' or 'constant'");
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return loop;
}

inline void write_loop_manifest(const fs::path& dir, const CurveLoop& loop) {
  json entries = json::array();
  for (std::size_t k = 0; k < loop.curves.size(); ++k) {
    const auto& c = loop.curves[k];
    if (c.is_constant()) {
      entries.push_back({{"constant", {c.point().x, c.point().y, c.point().z}}});
    } else {
      std::ostringstream name;
      name << "curve_" << std::setw(4) << std::setfill('0') << k << ".csv";
      write_curve_csv(dir / name.str(), c);
      entries.push_back({{"path", name.str()}});
    }
  }
  write_text(dir / "manifest.json", json{{"entries", entries}}.dump(2) + "\n");
}

// ---- reports --------------------------------------------------------------

inline json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline json outcome_json(const FlowOutcome& o, const std::string& final_curve_path) {
  return {{"status", to_string(o.status)},
          {"limit_length", o.limit_length},
          {"stop_time", o.stop_time},
          {"final_curve_path", final_curve_path}};
}

inline json sweep_report_json(const MetricSpec& spec, const SweepGrid& grid, const LSEstimates& est) {
  json members = json::array();
  for (std::size_t id : est.full) {
    const auto& m = est.members[id];
    json row{{"x", vec_json(m.index.direction)}, {"lambda", m.index.offset}};
    if (m.ok()) {
      row["status"] = to_string(m.outcome->status);
      row["limit_length"] = m.outcome->limit_length;
    } else {
      row["status"] = "Error";
      row["limit_length"] = nullptr;
      row["error"] = m.error;
    }
    members.push_back(std::move(row));
  }
  return {{"metric", metric_to_json(spec)},
          {"grid", {{"n_dir", grid.n_dir}, {"n_off", grid.n_off}, {"n_meridian", grid.n_meridian}}},
          {"members", members},
          {"estimates", {{"l1", est.l1}, {"l2", est.l2}, {"l3", est.l3}}},
          {"unreliable", est.unreliable},
          {"warnings", est.warnings}};
}

inline json spectrum_report_json(const MetricSpec& spec, const SpectrumReport& report,
                                 const std::vector<std::string>& representative_paths) {
  json entries = json::array();
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    const auto& e = report.entries[k];
    entries.push_back({{"length", e.length},
                       {"count", e.count},
                       {"residuals",
                        {{"curvature_sup", e.curvature_residual},
                         {"closure_defect", e.closure_defect},
                         {"simple", e.simple}}},
                       {"representative_path",
                        k < representative_paths.size() ? representative_paths[k] : ""},
                       {"validated", e.validated}});
  }
  return {{"metric", metric_to_json(spec)},
          {"delta_len", report.delta_len},
          {"closure_tolerance", report.closure_tolerance},
          {"entries", entries},
          {"sigma_s", report.sigma_s}};
}

inline json launches_json(const std::vector<LaunchEvidence>& launches) {
  json out = json::array();
  for (const auto& e : launches) {
    out.push_back({{"point", vec_json(e.point)},
                   {"angle", e.angle},
                   {"closure_defect", e.closure_defect},
                   {"simple", e.simple},
                   {"pass", e.pass}});
  }
  return out;
}

inline json verdict_json(const MetricSpec& spec, const ZollVerdict& v) {
  return {{"theorem", "zoll"},         {"metric", metric_to_json(spec)},
          {"pass", v.pass},            {"reason", v.reason},
          {"tolerance", v.tolerance},  {"sigma_s", v.sigma_s},
          {"launches", launches_json(v.launches)}};
}

inline json verdict_json(const MetricSpec& spec, const CoverVerdict& v) {
  return {{"theorem", "cover"},
          {"metric", metric_to_json(spec)},
          {"pass", v.pass},
          {"hypothesis_met", v.hypothesis_met},
          {"reason", v.reason},
          {"tolerance", v.tolerance},
          {"sigma_s", v.sigma_s},
          {"length", v.length},
          {"points", launches_json(v.points)}};
}

}  // namespace zollab::io
