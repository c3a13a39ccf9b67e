// sipf: command-line front end for single runs and the study harness.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sipf/config.hpp"
#include "sipf/diagnostics.hpp"
#include "sipf/driver.hpp"
#include "sipf/io.hpp"
#include "sipf/parallel.hpp"
#include "sipf/plot.hpp"
#include "sipf/radial_fdm.hpp"
#include "sipf/studies.hpp"

namespace fs = std::filesystem;
using namespace sipf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitFailure = 1;

struct Common {
  std::string config;
  std::string out = "out";
  std::vector<std::string> sets;
  long long seed = -1;
  long snapshot_every = -1;
  int jobs = 1;
  bool plots = false;
  bool dry_run = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config, "configuration file")->required()->check(CLI::ExistingFile);
  app->add_option("-o,--out", c.out, "output directory (created if missing)");
  app->add_option("--set", c.sets, "override a key, e.g. --set phys.mass=40");
  app->add_option("--seed", c.seed, "root seed");
  app->add_option("--snapshot-every", c.snapshot_every, "snapshot cadence in steps (0 disables)");
  app->add_option("-j,--jobs", c.jobs, "concurrent member runs")->check(CLI::PositiveNumber);
  app->add_flag("--plots", c.plots, "emit PNG plots");
  app->add_flag("--dry-run", c.dry_run, "validate and print the plan only");
}

Config resolve(const Common& c, RunManifest& manifest) {
  const std::string text = read_file(c.config);
  manifest.add_input("config", text);
  Config cfg = parse_config(text);
  for (const auto& s : c.sets) apply_override(cfg, s);
  if (c.seed >= 0) cfg.disc.seed = std::uint64_t(c.seed);
  if (c.snapshot_every >= 0) cfg.run.snapshot_every = c.snapshot_every;
  if (cfg.init.c0 != "zero" && !cfg.init.c0.empty()) manifest.add_input("init.c0", read_file(cfg.init.c0));
  manifest.set_config(serialize_config(cfg));
  return cfg;
}

std::string extra(const Config& cfg, const std::string& key, const std::string& fallback) {
  const auto it = cfg.extra.find("study." + key);
  return it == cfg.extra.end() ? fallback : it->second;
}

double extra_num(const Config& cfg, const std::string& key, double fallback) {
  const auto it = cfg.extra.find("study." + key);
  return it == cfg.extra.end() ? fallback : std::stod(it->second);
}

std::vector<double> extra_list(const Config& cfg, const std::string& key, const std::string& fallback) {
  std::vector<double> v;
  std::stringstream ss(extra(cfg, key, fallback));
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) v.push_back(std::stod(item));
  if (v.empty()) throw ConfigError({"study." + key + ": empty list"});
  return v;
}

void print_plan(const Config& cfg, const std::string& what) {
  const auto vc = validate_or_throw(cfg);
  std::cout << "plan: " << what << "\n"
            << "  steps = " << vc.steps << ", beta = " << format_number(vc.scale.beta)
            << ", threads = " << resolve_threads(cfg.run.threads) << "\n"
            << serialize_config(cfg);
}

void emit(const fs::path& out, const std::string& name, const std::string& contents, RunManifest& m) {
  write_file(out / name, contents);
  m.add_output(out / name, out);
}

template <typename Fn>
std::string to_string_with(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

int cmd_run(const Common& c) {
  RunManifest manifest("run");
  Config cfg = resolve(c, manifest);
  if (c.dry_run) {
    print_plan(cfg, "single run");
    return kExitOk;
  }
  validate_or_throw(cfg);
  const fs::path out = c.out;
  const bool created = !fs::exists(out);
  fs::create_directories(out);
  if (created) manifest.add_note("created output directory " + out.string());

  std::ofstream particles;
  bool particle_header = true;
  std::vector<fs::path> snapshots;
  SimulationState last;
  RunCallbacks cb;
  cb.on_snapshot = [&](const SimulationState& s) {
    const bool cadence = cfg.run.snapshot_every > 0;
    if (cadence && cfg.run.snapshot_particles) {
      if (!particles.is_open()) {
        particles.open(out / "particles.csv", std::ios::binary);
        snapshots.push_back(out / "particles.csv");
      }
      write_particles_csv(particles, s.step, s.time, s.particles, particle_header);
      particle_header = false;
    }
    if (cadence && cfg.run.snapshot_field) {
      const fs::path f = out / ("field_" + std::to_string(s.step) + ".csv");
      write_field_snapshot(f.string(), s.cur, s.step, s.time);
      snapshots.push_back(f);
    }
    if (c.plots) last = s;
  };

  Stopwatch sw;
  const DiagnosticsSeries series = run(cfg, cb);
  manifest.add_stage("simulate", sw.seconds());
  if (particles.is_open()) particles.close();

  Stopwatch wsw;
  emit(out, "diagnostics.csv", to_string_with([&](std::ostream& os) { write_diagnostics_csv(os, series); }),
       manifest);
  for (const auto& f : snapshots) manifest.add_output(f, out);
  if (c.plots && !series.diverged()) {
    plot_field_slice(out / "c_slice.png", last.cur);
    plot_particles(out / "particles.png", last.particles, cfg.disc.box_len);
    std::vector<double> t, ci, c0;
    for (const auto& e : series.entries) {
      t.push_back(e.time);
      ci.push_back(e.c_inf);
      c0.push_back(e.c0);
    }
    plot_series(out / "c_inf.png", {t}, {ci});
    plot_series(out / "c0.png", {t}, {c0});
    for (const char* p : {"c_slice.png", "particles.png", "c_inf.png", "c0.png"}) manifest.add_output(out / p, out);
  }
  manifest.add_stage("write", wsw.seconds());
  if (series.skipped_pairs) manifest.add_note("skipped pairs below r_min: " + std::to_string(series.skipped_pairs));
  manifest.set_status(status_string(series));
  manifest.finish();
  manifest.write(out / "manifest.txt");
  std::cout << "status: " << status_string(series) << "\n";
  return series.diverged() ? kExitDiverged : kExitOk;
}

BlowupRule rule_from(const Config& cfg, int hi, int lo) {
  BlowupRule r;
  const std::string t = extra(cfg, "threshold", "1.5");
  r.threshold = t == "calibrated" ? calibrated_threshold(hi, lo, cfg.disc.box_len, cfg.phys.k) : std::stod(t);
  r.sustain = long(extra_num(cfg, "sustain", 10));
  return r;
}

RadialGrid fdm_grid(const Config& cfg) {
  return RadialGrid{extra_num(cfg, "fdm_rmax", 20.0), long(extra_num(cfg, "fdm_intervals", 20000))};
}

int cmd_study(const std::string& kind, const Common& c) {
  RunManifest manifest("study " + kind);
  Config cfg = resolve(c, manifest);
  if (c.dry_run) {
    print_plan(cfg, "study " + kind);
    return kExitOk;
  }
  validate_or_throw(cfg);
  const fs::path out = c.out;
  fs::create_directories(out);
  std::ostringstream summary;
  Stopwatch sw;
  bool diverged = false;
  std::vector<std::vector<double>> px, py;

  if (kind == "ratio") {
    const int hi = int(extra_num(cfg, "h_hi", 24)), lo = int(extra_num(cfg, "h_lo", 12));
    const auto rule = rule_from(cfg, hi, lo);
    const auto r = ratio_diagnostic(cfg, hi, lo, c.jobs);
    const auto v = classify_blowup(r.ratio, rule);
    emit(out, "ratio.csv", to_string_with([&](std::ostream& os) { write_ratio_csv(os, r.ratio); }), manifest);
    summary << "H_hi = " << hi << "\nH_lo = " << lo << "\nthreshold = " << format_number(rule.threshold)
            << "\nsustain = " << rule.sustain << "\nblowup = " << (v.blowup ? "yes" : "no")
            << "\nonset = " << format_number(v.onset) << '\n';
    px = {r.ratio.time};
    py = {r.ratio.ratio};
  } else if (kind == "mass-scan") {
    MassScanOptions o;
    o.mode = extra(cfg, "mode", "grid") == "bisection" ? ScanMode::Bisection : ScanMode::Grid;
    o.lo = extra_num(cfg, "lo", 46);
    o.hi = extra_num(cfg, "hi", 50);
    o.step = extra_num(cfg, "step", 0.2);
    o.width = extra_num(cfg, "width", 0.2);
    o.jobs = c.jobs;
    BlowupPredicate pred;
    if (extra(cfg, "solver", "sipf") == "fdm") {
      pred = fdm_predicate(cfg.phys, cfg.init.radius, fdm_grid(cfg), extra_num(cfg, "fdm_dt", 1e-4),
                           cfg.disc.horizon);
    } else {
      const int hi = int(extra_num(cfg, "h_hi", 24)), lo = int(extra_num(cfg, "h_lo", 12));
      pred = sipf_predicate(cfg, hi, lo, rule_from(cfg, hi, lo));
    }
    const auto b = critical_mass_scan(pred, o);
    emit(out, "mass_scan.csv", to_string_with([&](std::ostream& os) { write_mass_scan_csv(os, b); }), manifest);
    summary << "bracket = (" << format_number(b.lower.mass) << ", " << format_number(b.upper.mass) << ")\n";
  } else if (kind == "converge-dt" || kind == "converge-p" || kind == "converge-h") {
    const auto axis = parse_axis(kind.substr(9));
    const auto values = extra_list(cfg, "values", "");
    const double ref = extra_num(cfg, "reference", 0.0);
    const auto r = convergence_study(axis, values, ref, cfg, c.jobs);
    emit(out, "convergence.csv", to_string_with([&](std::ostream& os) { write_convergence_csv(os, r); }),
         manifest);
    summary << "axis = " << axis_name(axis) << "\nreference = " << format_number(ref)
            << "\nl2_slope = " << format_number(r.l2_fit.slope) << "\nl2_r2 = " << format_number(r.l2_fit.r2)
            << "\nc0_slope = " << format_number(r.c0_fit.slope)
            << "\nreference_c0_error = " << format_number(r.reference_c0_error) << '\n';
    std::vector<double> x, y;
    for (const auto& row : r.rows) {
      x.push_back(std::log(row.value));
      y.push_back(std::log(row.l2_error));
    }
    px = {x};
    py = {y};
  } else if (kind == "fdm") {
    const auto grid = fdm_grid(cfg);
    const auto r = fdm_run(cfg.phys, cfg.init.radius, grid, extra_num(cfg, "fdm_dt", 1e-4), cfg.disc.horizon);
    emit(out, "fdm.csv", to_string_with([&](std::ostream& os) { write_fdm_csv(os, r); }), manifest);
    emit(out, "profile.csv",
         to_string_with([&](std::ostream& os) { write_profile_csv(os, r.final_state, grid); }), manifest);
    summary << "unstable = " << (r.unstable ? "yes" : "no") << "\nunstable_time = " << format_number(r.unstable_time)
            << "\nsup_c = " << format_number(r.sup_c) << '\n';
    std::vector<double> t, s;
    for (const auto& e : r.series) {
      t.push_back(e.time);
      s.push_back(e.sup_c);
    }
    px = {t};
    py = {s};
  } else if (kind == "cinf-h") {
    std::vector<int> modes;
    for (double h : extra_list(cfg, "modes", "8,12,16,20,24")) modes.push_back(int(std::lround(h)));
    const auto f = cinf_vs_H_scan(cfg, modes, c.jobs);
    emit(out, "cinf_vs_h.csv", to_string_with([&](std::ostream& os) { write_scaling_csv(os, f); }), manifest);
    summary << "linear_slope = " << format_number(f.linear.slope) << "\nlinear_r2 = " << format_number(f.linear.r2)
            << "\nlog_r2 = " << format_number(f.log.r2) << '\n';
    std::vector<double> h(f.modes.begin(), f.modes.end());
    px = {h};
    py = {f.sup_cinf};
  } else if (kind == "variance") {
    const auto v = variance_study(cfg);
    diverged = v.series.diverged();
    emit(out, "diagnostics.csv", to_string_with([&](std::ostream& os) { write_diagnostics_csv(os, v.series); }),
         manifest);
    summary << "variance_slope = " << format_number(v.fit.slope) << "\nr2 = " << format_number(v.fit.r2)
            << "\nfree_diffusion_slope = " << format_number(6.0 * cfg.phys.mu) << '\n';
    std::vector<double> t, var;
    for (const auto& e : v.series.entries) {
      t.push_back(e.time);
      var.push_back(e.variance);
    }
    px = {t};
    py = {var};
  } else {
    std::cerr << "unknown study kind: " << kind << "\n";
    return kExitUsage;
  }
  manifest.add_stage("study", sw.seconds());
  emit(out, "summary.txt", summary.str(), manifest);
  if (c.plots && !px.empty()) {
    plot_series(out / "study.png", px, py);
    manifest.add_output(out / "study.png", out);
  }
  manifest.finish();
  manifest.write(out / "manifest.txt");
  std::cout << summary.str();
  return diverged ? kExitDiverged : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle-field solver for the 3D parabolic-parabolic Keller-Segel system"};
  app.require_subcommand(1);
  Common run_opts, study_opts;
  std::string kind;
  auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
  add_common(run_cmd, run_opts);
  auto* study_cmd = app.add_subcommand("study", "run a study: ratio, mass-scan, converge-dt, converge-p, "
                                                "converge-h, fdm, cinf-h, variance");
  study_cmd->add_option("kind", kind, "study kind")
      ->required()
      ->check(CLI::IsMember({"ratio", "mass-scan", "converge-dt", "converge-p", "converge-h", "fdm", "cinf-h",
                             "variance"}));
  add_common(study_cmd, study_opts);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (run_cmd->parsed()) return cmd_run(run_opts);
    return cmd_study(kind, study_opts);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
