#include "sipf/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sipf/parallel.hpp"

namespace sipf {

UndefinedRatioError::UndefinedRatioError(long step, double time)
    : DiagnosticsError("ratio undefined: c_inf of the coarse run below 1e-12 at step " + std::to_string(step)),
      step(step),
      time(time) {}

RatioResult ratio_diagnostic(const Config& cfg, int H_hi, int H_lo, int jobs) {
  Config hi = cfg, lo = cfg;
  hi.disc.modes = H_hi;
  lo.disc.modes = H_lo;
  RatioResult res;
  parallel_for(2, jobs, [&](std::size_t i) {
    if (i == 0)
      res.hi = run(hi);
    else
      res.lo = run(lo);
  });
  const long steps = validate_or_throw(cfg).steps;
  auto& r = res.ratio;
  for (const auto* s : {&res.hi, &res.lo})
    if (s->diverged()) {
      const double t = double(s->diverged_step) * cfg.disc.dt;
      if (!r.diverged || t < r.diverged_time) r.diverged_time = t;
      r.diverged = true;
    }
  for (long n = 1; n <= steps; ++n) {
    const double t = double(n) * cfg.disc.dt;
    const std::size_t i = std::size_t(n);
    r.time.push_back(t);
    if (i >= res.hi.entries.size() || i >= res.lo.entries.size()) {
      r.ratio.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    const double den = res.lo.entries[i].c_inf;
    if (den < 1e-12) throw UndefinedRatioError(n, t);
    r.ratio.push_back(res.hi.entries[i].c_inf / den);
  }
  return res;
}

ScalingFits cinf_vs_H_scan(const Config& cfg, const std::vector<int>& modes, int jobs) {
  std::vector<double> sup(modes.size(), 0.0);
  parallel_for(modes.size(), jobs, [&](std::size_t i) {
    Config c = cfg;
    c.disc.modes = modes[i];
    const auto s = run(c);
    double m = 0.0;
    for (const auto& e : s.entries) m = std::max(m, e.c_inf);
    sup[i] = s.diverged() ? std::numeric_limits<double>::infinity() : m;
  });
  return fit_cinf_scaling(modes, sup);
}

ConvergenceAxis parse_axis(const std::string& s) {
  if (s == "dt") return ConvergenceAxis::Dt;
  if (s == "p" || s == "P" || s == "particles") return ConvergenceAxis::Particles;
  if (s == "h" || s == "H" || s == "modes") return ConvergenceAxis::Modes;
  throw std::invalid_argument("unknown convergence axis: " + s);
}

std::string axis_name(ConvergenceAxis a) {
  switch (a) {
    case ConvergenceAxis::Dt: return "dt";
    case ConvergenceAxis::Particles: return "P";
    case ConvergenceAxis::Modes: return "H";
  }
  return "?";
}

namespace {

Config with_axis(const Config& base, ConvergenceAxis axis, double value, double reference) {
  Config c = base;
  switch (axis) {
    case ConvergenceAxis::Dt: {
      c.disc.dt = value;
      const double ratio = value / reference;
      c.run.noise_substeps = std::lround(ratio);
      if (std::abs(ratio - double(c.run.noise_substeps)) > 1e-9 * ratio)
        throw std::invalid_argument("convergence: dt values must be integer multiples of the reference");
      break;
    }
    case ConvergenceAxis::Particles: c.disc.particles = std::size_t(std::llround(value)); break;
    case ConvergenceAxis::Modes: c.disc.modes = int(std::lround(value)); break;
  }
  return c;
}

bool finer(ConvergenceAxis axis, double ref, double v) {
  return axis == ConvergenceAxis::Dt ? ref < v : ref > v;
}

struct FinalRun {
  DiagnosticsSeries series;
  SpectralField field;
};

FinalRun run_keep_final(const Config& cfg) {
  FinalRun out;
  Config c = cfg;
  c.run.snapshot_every = 0;
  RunCallbacks cb;
  cb.on_snapshot = [&](const SimulationState& s) { out.field = s.cur; };
  out.series = run(c, cb);
  return out;
}

}  // namespace

ConvergenceResult convergence_study(ConvergenceAxis axis, const std::vector<double>& values, double reference,
                                    const Config& base, int jobs) {
  for (double v : values)
    if (!finer(axis, reference, v)) throw std::invalid_argument("convergence: reference must be finer than every value");
  std::vector<FinalRun> runs(values.size() + 1);
  parallel_for(runs.size(), jobs, [&](std::size_t i) {
    const double v = i == 0 ? reference : values[i - 1];
    runs[i] = run_keep_final(with_axis(base, axis, v, reference));
  });
  for (const auto& r : runs)
    if (r.series.diverged()) throw DiagnosticsError("convergence: a member run diverged");

  ConvergenceResult res;
  res.axis = axis;
  res.reference = reference;
  const double c0_init = runs[0].series.entries.front().c0;
  res.reference_c0_error = c0_error(runs[0].series, base.phys, c0_init);
  std::vector<double> xs, l2, c0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& r = runs[i + 1];
    ConvergenceRow row;
    row.value = values[i];
    row.l2_error = field_l2_error(r.field, runs[0].field);
    row.c0_error = c0_error(r.series, base.phys, c0_init);
    row.c0_final = c0_final_error(r.series, base.phys, c0_init);
    res.rows.push_back(row);
    xs.push_back(row.value);
    l2.push_back(row.l2_error);
    c0.push_back(row.c0_error);
  }
  if (values.size() >= 2) {
    res.l2_fit = loglog_fit(xs, l2);
    res.c0_fit = loglog_fit(xs, c0);
  }
  return res;
}

MassBracket critical_mass_scan(const BlowupPredicate& predicate, const MassScanOptions& opts) {
  if (!(opts.hi > opts.lo)) throw std::invalid_argument("mass scan: need lo < hi");
  MassBracket b;
  if (opts.mode == ScanMode::Grid) {
    if (!(opts.step > 0.0)) throw std::invalid_argument("mass scan: grid step must be positive");
    const long count = std::lround((opts.hi - opts.lo) / opts.step) + 1;
    std::vector<MassVerdict> v(static_cast<std::size_t>(count));
    parallel_for(v.size(), opts.jobs, [&](std::size_t i) {
      const double m = std::round((opts.lo + double(i) * opts.step) * 1e9) / 1e9;
      v[i] = predicate(m);
    });
    b.evaluated = v;
    const auto first = std::find_if(v.begin(), v.end(), [](const MassVerdict& m) { return m.blowup; });
    if (first == v.end()) throw NoBracketError("mass scan: no blow-up anywhere in the range");
    if (first == v.begin()) throw NoBracketError("mass scan: blow-up at every mass in the range");
    b.lower = *(first - 1);
    b.upper = *first;
    return b;
  }
  if (!(opts.width > 0.0)) throw std::invalid_argument("mass scan: bisection width must be positive");
  MassVerdict lo = predicate(opts.lo), hi = predicate(opts.hi);
  b.evaluated = {lo, hi};
  if (lo.blowup) throw NoBracketError("mass scan: blow-up at the lower end");
  if (!hi.blowup) throw NoBracketError("mass scan: no blow-up at the upper end");
  while (hi.mass - lo.mass > opts.width * (1.0 + 1e-12)) {
    const MassVerdict mid = predicate(0.5 * (lo.mass + hi.mass));
    b.evaluated.push_back(mid);
    (mid.blowup ? hi : lo) = mid;
  }
  b.lower = lo;
  b.upper = hi;
  return b;
}

BlowupPredicate sipf_predicate(const Config& base, int H_hi, int H_lo, const BlowupRule& rule) {
  return [=](double mass) {
    Config c = base;
    c.phys.mass = mass;
    const auto r = ratio_diagnostic(c, H_hi, H_lo);
    const auto v = classify_blowup(r.ratio, rule);
    double peak = 0.0;
    for (double x : r.ratio.ratio) peak = std::max(peak, x);
    std::ostringstream ev;
    ev << "max ratio " << peak << (r.ratio.diverged ? ", diverged" : "");
    return MassVerdict{mass, v.blowup, v.onset, ev.str()};
  };
}

BlowupPredicate fdm_predicate(const PhysParams& phys, double ic_radius, const RadialGrid& grid, double dt,
                              double horizon) {
  return [=](double mass) {
    PhysParams p = phys;
    p.mass = mass;
    const auto r = fdm_run(p, ic_radius, grid, dt, horizon);
    std::ostringstream ev;
    ev << "sup|c| " << r.sup_c << (r.unstable ? ", unstable" : "");
    return MassVerdict{mass, r.unstable, r.unstable_time, ev.str()};
  };
}

VarianceStudy variance_study(const Config& cfg) {
  VarianceStudy v;
  v.series = run(cfg);
  v.fit = variance_fit(v.series);
  return v;
}

}  // namespace sipf
