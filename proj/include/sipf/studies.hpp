#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sipf/config.hpp"
#include "sipf/diagnostics.hpp"
#include "sipf/driver.hpp"
#include "sipf/radial_fdm.hpp"

namespace sipf {

class UndefinedRatioError : public DiagnosticsError {
 public:
  UndefinedRatioError(long step, double time);
  long step;
  double time;
};

struct RatioResult {
  RatioSeries ratio;
  DiagnosticsSeries hi;
  DiagnosticsSeries lo;
};

/// Two runs of `cfg` differing only in the mode count (same seed, hence the
/// same Brownian substreams). The series starts at step 1; c_0 may vanish.
RatioResult ratio_diagnostic(const Config& cfg, int H_hi, int H_lo, int jobs = 1);

/// sup_t c_inf for each H plus linear and logarithmic fits.
ScalingFits cinf_vs_H_scan(const Config& cfg, const std::vector<int>& modes, int jobs = 1);

enum class ConvergenceAxis { Dt, Particles, Modes };

ConvergenceAxis parse_axis(const std::string& s);
std::string axis_name(ConvergenceAxis a);

struct ConvergenceRow {
  double value = 0.0;
  double l2_error = 0.0;  // final field against the reference run
  double c0_error = 0.0;  // total concentration against its exact law
  double c0_final = 0.0;  // same, at the final time only
};

struct ConvergenceResult {
  ConvergenceAxis axis = ConvergenceAxis::Dt;
  double reference = 0.0;
  double reference_c0_error = 0.0;
  std::vector<ConvergenceRow> rows;
  LinearFit l2_fit;  // log-log
  LinearFit c0_fit;  // log-log
};

/// Runs `base` at each value of the axis and at the reference value. On the
/// dt axis the member runs resolve the Brownian path at the reference step,
/// so every run follows the same path.
ConvergenceResult convergence_study(ConvergenceAxis axis, const std::vector<double>& values, double reference,
                                    const Config& base, int jobs = 1);

struct MassVerdict {
  double mass = 0.0;
  bool blowup = false;
  double onset = -1.0;
  std::string evidence;
};

using BlowupPredicate = std::function<MassVerdict(double mass)>;

struct MassBracket {
  MassVerdict lower;  // no blow-up
  MassVerdict upper;  // blow-up
  std::vector<MassVerdict> evaluated;

  [[nodiscard]] double width() const { return upper.mass - lower.mass; }
};

class NoBracketError : public DiagnosticsError {
 public:
  using DiagnosticsError::DiagnosticsError;
};

enum class ScanMode { Grid, Bisection };

struct MassScanOptions {
  ScanMode mode = ScanMode::Grid;
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.2;   // grid spacing
  double width = 0.2;  // bisection stopping width
  int jobs = 1;        // concurrent member evaluations (grid mode)
};

/// Assumes blow-up is monotone in the mass over [lo, hi].
MassBracket critical_mass_scan(const BlowupPredicate& predicate, const MassScanOptions& opts);

/// Ratio diagnostic at the given mass, classified with `rule`.
BlowupPredicate sipf_predicate(const Config& base, int H_hi, int H_lo, const BlowupRule& rule);

/// Radial reference solver at the given mass; blow-up means the run was flagged unstable.
BlowupPredicate fdm_predicate(const PhysParams& phys, double ic_radius, const RadialGrid& grid, double dt,
                              double horizon);

struct VarianceStudy {
  DiagnosticsSeries series;
  LinearFit fit;
};

VarianceStudy variance_study(const Config& cfg);

}  // namespace sipf
