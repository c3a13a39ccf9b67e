#include "sipf/driver.hpp"

#include <cmath>

#include "sipf/initial.hpp"
#include "sipf/parallel.hpp"

namespace sipf {

namespace {

bool all_finite(const SpectralField& f) {
  for (const auto& v : f.coeffs.values())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

bool all_finite(const ParticleEnsemble& e) {
  for (const auto& x : e.positions)
    if (!is_finite(x)) return false;
  return true;
}

}  // namespace

std::string status_string(const DiagnosticsSeries& s) {
  if (!s.diverged()) return "completed";
  return "diverged@" + std::to_string(s.diverged_step);
}

double position_variance(const ParticleEnsemble& ens) {
  const std::size_t P = ens.size();
  if (P < 2) return 0.0;
  Vec3 mean;
  for (const auto& x : ens.positions) mean += x;
  mean *= 1.0 / double(P);
  double acc = 0.0;
  for (const auto& x : ens.positions) acc += norm2(x - mean);
  return acc / double(P - 1);
}

Simulation::Simulation(const Config& cfg)
    : cfg_(cfg), vc_(validate_or_throw(cfg)), threads_(resolve_threads(cfg.run.threads)) {
  auto [ens, c0] = sample_initial(cfg.init, vc_.disc);
  state_.particles = std::move(ens);
  state_.prev = c0;
  state_.cur = std::move(c0);
  drift_ = std::make_unique<FieldDriftEvaluator>(vc_.disc, vc_.phys, vc_.scale.beta);
}

Simulation::~Simulation() = default;

StepDiagnostics Simulation::diagnostics() const {
  StepDiagnostics d;
  d.time = state_.time;
  d.c_inf = field_max_abs(state_.cur, cfg_.run.refine);
  d.c0 = total_concentration(state_.cur);
  d.variance = position_variance(state_.particles);
  return d;
}

bool Simulation::step(const RunCallbacks& cb) {
  const long n = state_.step + 1;
  // X_n is driven by c_{n-2}; prev holds exactly that level.
  if (state_.prev_index != n - 2) throw std::logic_error("staggering violated");
  drift_->bind(state_.prev);
  const auto stats =
      particle_step(state_.particles, *drift_, vc_.phys, vc_.disc, vc_.scale.beta, n - 1, cfg_.run, threads_);
  skipped_pairs_ += stats.skipped_pairs;
  state_.step = n;
  state_.time = double(n) * vc_.disc.dt;
  if (!all_finite(state_.particles)) return false;

  const ModeArray rho_hat = deposit_particles(state_.particles.positions, vc_.phys.mass, vc_.disc, threads_);
  SpectralField next = field_step(state_.cur, rho_hat, vc_.phys, vc_.disc);
  SpectralField used = std::move(state_.prev);
  state_.prev = std::move(state_.cur);
  state_.prev_index = state_.cur_index;
  state_.cur = std::move(next);
  state_.cur_index = n;
  if (!all_finite(state_.cur)) return false;

  if (cb.on_step) {
    const StepDiagnostics d = diagnostics();
    cb.on_step(StepView{state_, rho_hat, used, d});
  }
  return true;
}

DiagnosticsSeries run(const Config& cfg, const RunCallbacks& cb) {
  Simulation sim(cfg);
  const auto& vc = sim.config();
  DiagnosticsSeries series;
  series.modes = vc.disc.modes;
  series.particles = vc.disc.particles;
  series.dt = vc.disc.dt;
  series.seed = vc.disc.seed;
  series.entries.reserve(std::size_t(vc.steps) + 1);
  series.entries.push_back(sim.diagnostics());
  if (cb.on_snapshot) cb.on_snapshot(sim.state());

  const long every = cfg.run.snapshot_every;
  RunCallbacks inner;
  inner.on_step = [&](const StepView& v) {
    series.entries.push_back(v.diagnostics);
    if (cb.on_step) cb.on_step(v);
  };
  for (long n = 1; n <= vc.steps; ++n) {
    if (!sim.step(inner)) {
      series.status = RunStatus::Diverged;
      series.diverged_step = n;
      break;
    }
    if (cb.on_snapshot && ((every > 0 && n % every == 0) || n == vc.steps)) cb.on_snapshot(sim.state());
  }
  series.skipped_pairs = sim.skipped_pairs();
  return series;
}

}  // namespace sipf
