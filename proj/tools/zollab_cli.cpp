// Command-line front end: flow, sweep, spectrum, verify, ainv.
//
// Exit codes: 0 success; 1 bad input or internal error; 2 the run finished
// but its result is negative (budget exhausted, unreliable sweep, flagged
// spectrum entry, failed verification); 3 verification hypothesis not met.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zollab/io.hpp"

namespace fs = std::filesystem;
using zollab::io::json;

namespace {

struct CommonOptions {
  std::string metric_path;
  std::string config_path;
  std::string out_dir;
  std::size_t workers = 0;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--metric", opt.metric_path, "metric JSON file")->check(CLI::ExistingFile);
  cmd->add_option("--config", opt.config_path, "run configuration JSON file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--workers", opt.workers, "worker threads (default: all cores)");
  cmd->add_option("--seed", opt.seed, "random seed for launch sampling");
}

zollab::io::RunConfig load_config(const CommonOptions& opt, bool need_metric = true) {
  zollab::io::RunConfig cfg;
  if (!opt.config_path.empty()) {
    cfg = zollab::io::config_from_json(zollab::io::parse_json_file(opt.config_path));
  }
  if (!opt.metric_path.empty()) {
    cfg.metric = zollab::io::metric_from_json(zollab::io::parse_json_file(opt.metric_path));
  }
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (opt.workers > 0) cfg.workers = opt.workers;
  if (opt.seed) cfg.seed = *opt.seed;
  if (need_metric && !cfg.metric) {
    throw zollab::io::FormatError("no metric given (use --metric or a config with a 'metric' key)");
  }
  cfg.validate();
  return cfg;
}

void emit(const fs::path& path, const json& j) {
  const std::string text = j.dump(2) + "\n";
  zollab::io::write_text(path, text);
  std::cout << text;
}

int run_flow(const CommonOptions& opt, const std::string& curve_path) {
  const auto cfg = load_config(opt);
  const auto curve = zollab::io::read_curve_csv(curve_path);
  const auto outcome = zollab::evolve(curve, *cfg.metric, cfg.flow);
  const fs::path final_curve = cfg.out_dir / "final_curve.csv";
  zollab::io::write_curve_csv(final_curve, outcome.curve);
  zollab::io::write_text(cfg.out_dir / "trace.csv", zollab::io::trace_csv(outcome.trace));
  emit(cfg.out_dir / "outcome.json", zollab::io::outcome_json(outcome, final_curve.string()));
  return outcome.status == zollab::FlowStatus::kBudgetExhausted ? 2 : 0;
}

zollab::LSEstimates sweep_and_report(const zollab::io::RunConfig& cfg, bool print) {
  auto est = zollab::estimate_ls_values(*cfg.metric, cfg.grid, cfg.flow, cfg.workers);
  for (const auto& w : est.warnings) std::cerr << "warning: " << w << '\n';
  const json report = zollab::io::sweep_report_json(*cfg.metric, cfg.grid, est);
  if (print) {
    emit(cfg.out_dir / "sweep.json", report);
  } else {
    zollab::io::write_text(cfg.out_dir / "sweep.json", report.dump(2) + "\n");
  }
  return est;
}

int run_sweep(const CommonOptions& opt) {
  const auto cfg = load_config(opt);
  return sweep_and_report(cfg, true).unreliable ? 2 : 0;
}

zollab::SpectrumReport spectrum_and_report(const zollab::io::RunConfig& cfg, bool print) {
  const auto est = sweep_and_report(cfg, false);
  auto report =
      zollab::simple_spectrum(*cfg.metric, est.outcomes(), cfg.delta_len, 1e-2, cfg.workers);
  std::vector<std::string> paths;
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    const fs::path p = cfg.out_dir / ("representative_" + std::to_string(k) + ".csv");
    zollab::io::write_curve_csv(p, report.entries[k].representative);
    paths.push_back(p.string());
  }
  const json j = zollab::io::spectrum_report_json(*cfg.metric, report, paths);
  if (print) {
    emit(cfg.out_dir / "spectrum.json", j);
  } else {
    zollab::io::write_text(cfg.out_dir / "spectrum.json", j.dump(2) + "\n");
  }
  for (const auto& e : report.entries) {
    if (!e.validated) {
      std::cerr << "warning: spectrum entry " << e.length
                << " failed shooting validation (closure defect " << e.closure_defect << ")\n";
    }
  }
  return report;
}

int run_spectrum(const CommonOptions& opt) {
  const auto cfg = load_config(opt);
  return spectrum_and_report(cfg, true).fully_validated() ? 0 : 2;
}

// Only sigma_s is needed from a stored spectrum report.
zollab::SpectrumReport load_spectrum(const std::string& path) {
  const json j = zollab::io::parse_json_file(path);
  zollab::SpectrumReport report;
  try {
    report.sigma_s = j.at("sigma_s").get<std::vector<double>>();
    report.delta_len = j.value("delta_len", report.delta_len);
  } catch (const json::exception& e) {
    throw zollab::io::FormatError(path + ": " + e.what());
  }
  return report;
}

int run_verify(const CommonOptions& opt, const std::string& theorem,
               const std::string& spectrum_path) {
  const auto cfg = load_config(opt);
  const auto report =
      spectrum_path.empty() ? spectrum_and_report(cfg, false) : load_spectrum(spectrum_path);
  if (theorem == "zoll") {
    const auto v = zollab::verify_zoll(*cfg.metric, report, 20, cfg.seed, 1e-3, cfg.workers);
    emit(cfg.out_dir / "verify_zoll.json", zollab::io::verdict_json(*cfg.metric, v));
    std::cerr << (v.pass ? "PASS: " : "FAIL: ") << v.reason << '\n';
    return v.pass ? 0 : 2;
  }
  const auto v = zollab::verify_cover(*cfg.metric, report, 50, cfg.seed, 1e-3, cfg.workers);
  emit(cfg.out_dir / "verify_cover.json", zollab::io::verdict_json(*cfg.metric, v));
  std::cerr << (v.pass ? "PASS: " : "FAIL: ") << v.reason << '\n';
  if (!v.hypothesis_met) return 3;
  return v.pass ? 0 : 2;
}

zollab::CurveLoop builtin_loop(const std::string& name) {
  const zollab::Vec3 base{1.0, 0.0, 0.0};
  if (name == "meridian") return zollab::meridian_rotation_loop();
  if (name == "constant") return zollab::constant_loop(base);
  if (name == "bubble") return zollab::bubble_loop(base);
  if (name == "inside-out") return zollab::inside_out_loop(base);
  if (name == "double-meridian") {
    return zollab::concatenate(zollab::meridian_rotation_loop(), zollab::meridian_rotation_loop());
  }
  throw zollab::ParameterError("unknown builtin loop '" + name + "'");
}

int run_ainv(const CommonOptions& opt, const std::string& manifest, const std::string& builtin,
             const std::string& export_dir) {
  const auto cfg = load_config(opt, false);
  const zollab::CurveLoop loop =
      manifest.empty() ? builtin_loop(builtin) : zollab::io::read_loop_manifest(manifest);
  if (!export_dir.empty()) zollab::io::write_loop_manifest(export_dir, loop);
  const auto result = zollab::a_invariant(loop, cfg.seed);
  json log = json::array();
  for (std::size_t k = 0; k < result.lift.size(); ++k) {
    const auto& m = result.lift[k];
    if (m.constant) {
      log.push_back({{"step", k}, {"constant", true}, {"bit", m.bit}});
    } else {
      log.push_back({{"step", k},
                     {"constant", false},
                     {"anchor", zollab::io::vec_json(m.anchor)},
                     {"anchor_inside", m.anchor_inside}});
    }
  }
  const json j{{"bit", result.bit}, {"curves", loop.curves.size()}, {"lift", log}};
  zollab::io::write_text(cfg.out_dir / "ainv.json", j.dump(2) + "\n");
  std::cout << result.bit << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curve-shortening flow, sweepouts and closed geodesics on Riemannian 2-spheres"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string curve_path;
  auto* flow = app.add_subcommand("flow", "evolve one curve under curve-shortening flow");
  add_common(flow, opt);
  flow->add_option("--curve", curve_path, "curve CSV (index,x,y,z)")->required();

  auto* sweep = app.add_subcommand("sweep", "flow the plane-section family and estimate l1, l2, l3");
  add_common(sweep, opt);

  auto* spectrum = app.add_subcommand("spectrum", "sweep, then cluster and validate the simple length spectrum");
  add_common(spectrum, opt);

  std::string theorem;
  std::string spectrum_path;
  auto* verify = app.add_subcommand("verify", "check the zoll or cover theorem conclusion");
  add_common(verify, opt);
  verify->add_option("theorem", theorem, "zoll | cover")
      ->required()
      ->check(CLI::IsMember({"zoll", "cover"}));
  verify->add_option("--spectrum", spectrum_path, "reuse a stored spectrum.json")
      ->check(CLI::ExistingFile);

  std::string manifest;
  std::string builtin;
  std::string export_dir;
  auto* ainv = app.add_subcommand("ainv", "Z/2 covering invariant of a loop of curves");
  add_common(ainv, opt);
  auto* manifest_opt =
      ainv->add_option("--manifest", manifest, "loop manifest JSON")->check(CLI::ExistingFile);
  auto* builtin_opt =
      ainv->add_option("--builtin", builtin, "meridian | constant | bubble | inside-out | double-meridian");
  manifest_opt->excludes(builtin_opt);
  ainv->add_option("--export", export_dir, "write the loop as a manifest directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*flow) return run_flow(opt, curve_path);
    if (*sweep) return run_sweep(opt);
    if (*spectrum) return run_spectrum(opt);
    if (*verify) return run_verify(opt, theorem, spectrum_path);
    if (*ainv) {
      if (manifest.empty() && builtin.empty()) {
        std::cerr << "error: ainv needs --manifest or --builtin\n";
        return 1;
      }
      return run_ainv(opt, manifest, builtin, export_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
