#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sipf/config.hpp"
#include "sipf/driver.hpp"
#include "sipf/spectral.hpp"

namespace sipf {

/// Exact total concentration for the linear c equation:
///   (c0(0) - M/k^2) exp(-k^2 t / eps) + M/k^2.
double c0_ground_truth(double t, const PhysParams& phys, double c0_initial);

/// sqrt( (1/T) int_0^T (|c0_num - c0| / |c0|)^2 dt ), trapezoid rule over the
/// series time stamps. A point where both values are zero contributes 0.
double c0_error(const DiagnosticsSeries& series, const PhysParams& phys, double c0_initial);
double c0_error(std::span<const double> time, std::span<const double> c0_num, const PhysParams& phys,
                double c0_initial);

/// |c0_num(T) - c0(T)| / |c0(T)| at the last entry of the series.
double c0_final_error(const DiagnosticsSeries& series, const PhysParams& phys, double c0_initial);

/// ||a - b|| / ||b|| over the modes both cubes contain.
double field_l2_error(const SpectralField& a, const SpectralField& b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);
/// Fit of log y against log x.
LinearFit loglog_fit(std::span<const double> x, std::span<const double> y);

/// r(t) = c_inf(H_hi) / c_inf(H_lo). Entries from a divergence onwards are +inf.
struct RatioSeries {
  std::vector<double> time;
  std::vector<double> ratio;
  bool diverged = false;
  double diverged_time = -1.0;
};

struct BlowupVerdict {
  bool blowup = false;
  double onset = -1.0;
};

struct BlowupRule {
  double threshold = 1.5;
  long sustain = 10;
};

/// Blow-up iff ratio > threshold for `sustain` consecutive entries, or a run
/// diverged. The onset is the first entry of the qualifying stretch.
BlowupVerdict classify_blowup(const RatioSeries& r, const BlowupRule& rule = {});

/// Ratio of native-grid maxima of the screened point-mass field at resolutions
/// H_hi and H_lo: the value a fully collapsed density would produce.
double delta_limit_ratio(int H_hi, int H_lo, double box_len, double k);

/// Threshold halfway (in excess over 1) between a smooth profile and the
/// point-mass limit for the given resolution pair.
double calibrated_threshold(int H_hi, int H_lo, double box_len, double k);

struct ScalingFits {
  std::vector<int> modes;
  std::vector<double> sup_cinf;
  LinearFit linear;  // sup_cinf vs H
  LinearFit log;     // sup_cinf vs ln H
};

ScalingFits fit_cinf_scaling(std::vector<int> modes, std::vector<double> sup_cinf);

/// Least-squares slope of the variance trace against time. Needs >= 10 entries.
LinearFit variance_fit(std::span<const double> time, std::span<const double> variance);
LinearFit variance_fit(const DiagnosticsSeries& series);

/// Mode-wise bound on c_hat_n = L^3 alpha_n implied by |rho_hat| <= M:
///   M_c + A^n (|c_hat_0| - M_c),  M_c = M / (|w|^2 + k^2).
double spectral_envelope(double omega_sq, long n, double c_hat0_abs, const PhysParams& phys, double dt);

class DiagnosticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sipf
