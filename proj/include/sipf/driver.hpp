#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sipf/config.hpp"
#include "sipf/particles.hpp"
#include "sipf/spectral.hpp"

namespace sipf {

struct StepDiagnostics {
  double time = 0.0;
  double c_inf = 0.0;     // max |c_n| on the quadrature grid
  double c0 = 0.0;        // integral of c_n over the box
  double variance = 0.0;  // trace of the particle position covariance

  friend bool operator==(const StepDiagnostics&, const StepDiagnostics&) = default;
};

enum class RunStatus { Completed, Diverged };

struct DiagnosticsSeries {
  std::vector<StepDiagnostics> entries;  // entries[0] is t = 0
  int modes = 0;
  std::size_t particles = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::Completed;
  long diverged_step = -1;
  std::size_t skipped_pairs = 0;

  [[nodiscard]] bool diverged() const { return status == RunStatus::Diverged; }
};

std::string status_string(const DiagnosticsSeries& s);

/// After step n: particles hold X_n, `prev` is c_{n-1}, `cur` is c_n.
/// Before the first step prev = cur = c_0 (prev plays c_{-1}).
struct SimulationState {
  long step = 0;
  double time = 0.0;
  ParticleEnsemble particles;
  SpectralField prev;
  SpectralField cur;
  long prev_index = -1;  // time level of `prev`
  long cur_index = 0;    // time level of `cur`
};

/// Trace of the empirical covariance of the positions.
double position_variance(const ParticleEnsemble& ens);

struct StepView {
  const SimulationState& state;
  const ModeArray& rho_hat;  // deposition of X_n
  const SpectralField& drift_field;  // the field the particle update used
  const StepDiagnostics& diagnostics;
};

struct RunCallbacks {
  std::function<void(const StepView&)> on_step;
  /// Called at step 0, every `snapshot_every` steps and at the last step.
  std::function<void(const SimulationState&)> on_snapshot;
};

class Simulation {
 public:
  explicit Simulation(const Config& cfg);
  ~Simulation();

  /// Advances one step. Returns false if the step produced non-finite values;
  /// the state is then left as computed and the run should stop.
  bool step(const RunCallbacks& cb = {});

  [[nodiscard]] const SimulationState& state() const { return state_; }
  [[nodiscard]] const ValidatedConfig& config() const { return vc_; }
  [[nodiscard]] StepDiagnostics diagnostics() const;
  [[nodiscard]] int threads() const { return threads_; }
  [[nodiscard]] std::size_t skipped_pairs() const { return skipped_pairs_; }

 private:
  Config cfg_;
  ValidatedConfig vc_;
  int threads_;
  SimulationState state_;
  std::unique_ptr<FieldDriftEvaluator> drift_;
  std::size_t skipped_pairs_ = 0;
};

/// Runs to the horizon (or the first divergence), collecting diagnostics after every step.
DiagnosticsSeries run(const Config& cfg, const RunCallbacks& cb = {});

}  // namespace sipf
