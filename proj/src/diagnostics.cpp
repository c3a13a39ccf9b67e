#include "sipf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sipf {

double c0_ground_truth(double t, const PhysParams& phys, double c0_initial) {
  const double steady = phys.mass / (phys.k * phys.k);
  if (phys.epsilon == 0.0) return t > 0.0 ? steady : c0_initial;
  return (c0_initial - steady) * std::exp(-phys.k * phys.k * t / phys.epsilon) + steady;
}

double c0_error(std::span<const double> time, std::span<const double> c0_num, const PhysParams& phys,
                double c0_initial) {
  if (time.size() != c0_num.size() || time.size() < 2)
    throw DiagnosticsError("c0_error: need at least two matching samples");
  auto sq = [&](std::size_t i) {
    const double exact = c0_ground_truth(time[i], phys, c0_initial);
    const double diff = std::abs(c0_num[i] - exact);
    if (exact == 0.0) {
      if (diff == 0.0) return 0.0;
      throw DiagnosticsError("c0_error: ground truth vanishes at t = " + std::to_string(time[i]));
    }
    const double r = diff / std::abs(exact);
    return r * r;
  };
  double integral = 0.0;
  double prev = sq(0);
  for (std::size_t i = 1; i < time.size(); ++i) {
    const double cur = sq(i);
    integral += 0.5 * (prev + cur) * (time[i] - time[i - 1]);
    prev = cur;
  }
  const double span = time.back() - time.front();
  return std::sqrt(integral / span);
}

double c0_error(const DiagnosticsSeries& series, const PhysParams& phys, double c0_initial) {
  std::vector<double> t, c;
  for (const auto& e : series.entries) {
    t.push_back(e.time);
    c.push_back(e.c0);
  }
  return c0_error(t, c, phys, c0_initial);
}

double c0_final_error(const DiagnosticsSeries& series, const PhysParams& phys, double c0_initial) {
  if (series.entries.empty()) throw DiagnosticsError("c0_final_error: empty series");
  const auto& e = series.entries.back();
  const double exact = c0_ground_truth(e.time, phys, c0_initial);
  if (exact == 0.0) throw DiagnosticsError("c0_final_error: ground truth vanishes at the final time");
  return std::abs(e.c0 - exact) / std::abs(exact);
}

double field_l2_error(const SpectralField& a, const SpectralField& b) {
  const auto& small = a.modes() <= b.modes() ? a.coeffs : b.coeffs;
  double num = 0.0, den = 0.0;
  // coarse Nyquist planes skipped
  const int lo = small.min_index() + 1;
  for (int j = lo; j <= small.max_index(); ++j)
    for (int m = lo; m <= small.max_index(); ++m)
      for (int l = lo; l <= small.max_index(); ++l) {
        const cplx bv = b.coeffs(j, m, l);
        num += std::norm(a.coeffs(j, m, l) - bv);
        den += std::norm(bv);
      }
  if (den == 0.0) throw DiagnosticsError("field_l2_error: reference field is zero");
  return std::sqrt(num / den);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DiagnosticsError("linear_fit: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DiagnosticsError("linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    sse += e * e;
  }
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return f;
}

LinearFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DiagnosticsError("loglog_fit: non-positive value");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return linear_fit(lx, ly);
}

BlowupVerdict classify_blowup(const RatioSeries& r, const BlowupRule& rule) {
  BlowupVerdict v;
  long run = 0;
  for (std::size_t i = 0; i < r.ratio.size(); ++i) {
    if (std::isinf(r.ratio[i])) return {true, r.time[i]};
    if (r.ratio[i] > rule.threshold) {
      if (++run >= rule.sustain) return {true, r.time[i + 1 - std::size_t(run)]};
    } else {
      run = 0;
    }
  }
  if (r.diverged) return {true, r.diverged_time};
  return v;
}

namespace {

double point_mass_peak(int H, double box_len, double k) {
  const double w = 2.0 * std::numbers::pi / box_len;
  double s = 0.0;
  for (int j = -H / 2 + 1; j < H / 2; ++j)
    for (int m = -H / 2 + 1; m < H / 2; ++m)
      for (int l = -H / 2 + 1; l < H / 2; ++l) s += 1.0 / (w * w * double(j * j + m * m + l * l) + k * k);
  return s;
}

}  // namespace

double delta_limit_ratio(int H_hi, int H_lo, double box_len, double k) {
  return point_mass_peak(H_hi, box_len, k) / point_mass_peak(H_lo, box_len, k);
}

double calibrated_threshold(int H_hi, int H_lo, double box_len, double k) {
  return 1.0 + 0.5 * (delta_limit_ratio(H_hi, H_lo, box_len, k) - 1.0);
}

ScalingFits fit_cinf_scaling(std::vector<int> modes, std::vector<double> sup_cinf) {
  if (modes.size() < 3 || modes.size() != sup_cinf.size())
    throw DiagnosticsError("cinf scaling: need at least three resolutions");
  ScalingFits f;
  std::vector<double> h, lh;
  for (int H : modes) {
    h.push_back(double(H));
    lh.push_back(std::log(double(H)));
  }
  f.linear = linear_fit(h, sup_cinf);
  f.log = linear_fit(lh, sup_cinf);
  f.modes = std::move(modes);
  f.sup_cinf = std::move(sup_cinf);
  return f;
}

double spectral_envelope(double omega_sq, long n, double c_hat0_abs, const PhysParams& phys, double dt) {
  const double mc = phys.mass / (omega_sq + phys.k * phys.k);
  const double a = phys.epsilon == 0.0 ? 0.0 : 1.0 / (1.0 + (omega_sq + phys.k * phys.k) * dt / phys.epsilon);
  return mc + std::pow(a, double(n)) * (c_hat0_abs - mc);
}

LinearFit variance_fit(std::span<const double> time, std::span<const double> variance) {
  if (time.size() < 10) throw DiagnosticsError("variance_fit: need at least 10 snapshots");
  return linear_fit(time, variance);
}

LinearFit variance_fit(const DiagnosticsSeries& series) {
  if (series.diverged()) throw DiagnosticsError("variance_fit: run diverged");
  std::vector<double> t, v;
  for (const auto& e : series.entries) {
    t.push_back(e.time);
    v.push_back(e.variance);
  }
  return variance_fit(t, v);
}

}  // namespace sipf
