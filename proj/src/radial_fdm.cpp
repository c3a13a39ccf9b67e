#include "sipf/radial_fdm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sipf {

double RadialGrid::volume(std::size_t i) const {
  const double hh = h();
  const double lo = i == 0 ? 0.0 : (double(i) - 0.5) * hh;
  const double hi = i + 1 == nodes() ? r_max : (double(i) + 0.5) * hh;
  return (hi * hi * hi - lo * lo * lo) / 3.0;
}

double RadialGrid::face(std::size_t i) const {
  const double r = (double(i) + 0.5) * h();
  return r * r;
}

std::vector<double> solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                                      std::span<const double> c, std::span<const double> d) {
  const std::size_t n = b.size();
  std::vector<double> cp(n), x(n);
  double denom = b[0];
  cp[0] = n > 1 ? c[0] / denom : 0.0;
  x[0] = d[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = b[i] - a[i] * cp[i - 1];
    cp[i] = i + 1 < n ? c[i] / denom : 0.0;
    x[i] = (d[i] - a[i] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
  return x;
}

double tridiagonal_residual(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                            std::span<const double> d, std::span<const double> x) {
  const std::size_t n = b.size();
  double res = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = b[i] * x[i];
    if (i > 0) ax += a[i] * x[i - 1];
    if (i + 1 < n) ax += c[i] * x[i + 1];
    res = std::max(res, std::abs(ax - d[i]));
    scale = std::max(scale, std::abs(d[i]));
  }
  return scale > 0.0 ? res / scale : res;
}

double radial_mass(const RadialState& s, const RadialGrid& grid) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) m += grid.volume(i) * s.rho[i];
  return 4.0 * std::numbers::pi * m;
}

RadialState radial_initial(double mass, double radius, const RadialGrid& grid) {
  RadialState s;
  s.rho.assign(grid.nodes(), 0.0);
  s.c.assign(grid.nodes(), 0.0);
  double vol = 0.0;
  for (std::size_t i = 0; i < grid.nodes(); ++i)
    if (double(i) * grid.h() <= radius * (1.0 + 1e-12)) {
      s.rho[i] = 1.0;
      vol += grid.volume(i);
    }
  if (vol == 0.0) throw std::invalid_argument("radial_initial: radius below one cell");
  const double level = mass / (4.0 * std::numbers::pi * vol);
  for (auto& v : s.rho) v *= level;
  return s;
}

namespace {

/// Tridiagonal coefficients of (diag - coef * lap), lap the finite-volume Laplacian.
void assemble(const RadialGrid& grid, double diag, double coef, std::vector<double>& a, std::vector<double>& b,
              std::vector<double>& c) {
  const std::size_t n = grid.nodes();
  a.assign(n, 0.0);
  b.assign(n, diag);
  c.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = grid.volume(i) * grid.h();
    if (i + 1 < n) {
      const double w = coef * grid.face(i) / v;
      c[i] = -w;
      b[i] += w;
    }
    if (i > 0) {
      const double w = coef * grid.face(i - 1) / v;
      a[i] = -w;
      b[i] += w;
    }
  }
}

}  // namespace

RadialStepper::RadialStepper(const PhysParams& phys, const RadialGrid& grid, double dt)
    : phys_(phys), grid_(grid), dt_(dt) {
  const std::size_t n = grid.nodes();
  for (std::size_t i = 0; i < n; ++i) {
    inv_volume_.push_back(1.0 / grid.volume(i));
    if (i + 1 < n) face_.push_back(grid.face(i));
  }
  std::vector<double> a, b, c;
  assemble(grid, phys.epsilon / dt + phys.k * phys.k, 1.0, a, b, c);
  c_factor_ = factor(a, b, c);
  assemble(grid, 1.0 / dt, phys.mu, a, b, c);
  rho_factor_ = factor(a, b, c);
  rhs_.resize(n);
  flux_.resize(n > 0 ? n - 1 : 0);
}

RadialStepper::Factor RadialStepper::factor(const std::vector<double>& a, const std::vector<double>& b,
                                            const std::vector<double>& c) {
  const std::size_t n = b.size();
  Factor f{a, std::vector<double>(n, 0.0), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double pivot = b[i] - (i > 0 ? a[i] * f.upper[i - 1] : 0.0);
    f.inv_pivot[i] = 1.0 / pivot;
    if (i + 1 < n) f.upper[i] = c[i] / pivot;
  }
  return f;
}

void RadialStepper::solve(const Factor& f, std::vector<double>& x) {
  const std::size_t n = x.size();
  x[0] *= f.inv_pivot[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - f.lower[i] * x[i - 1]) * f.inv_pivot[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= f.upper[i] * x[i + 1];
}

void RadialStepper::step(RadialState& s) {
  const std::size_t n = grid_.nodes();
  const double h = grid_.h();

  // c-equation, fully implicit with the old density as source.
  for (std::size_t i = 0; i < n; ++i) rhs_[i] = phys_.epsilon / dt_ * s.c[i] + s.rho[i];
  solve(c_factor_, rhs_);
  s.c.swap(rhs_);

  // Upwind transport fluxes through the faces, velocity from the new c.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double v = phys_.chi * (s.c[i + 1] - s.c[i]) / h;
    flux_[i] = face_[i] * v * (v > 0.0 ? s.rho[i] : s.rho[i + 1]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double div = 0.0;
    if (i + 1 < n) div += flux_[i];
    if (i > 0) div -= flux_[i - 1];
    s.rho[i] = s.rho[i] / dt_ - div * inv_volume_[i];
  }
  solve(rho_factor_, s.rho);
  s.time += dt_;
}

RadialState fdm_step(const RadialState& s, const PhysParams& phys, const RadialGrid& grid, double dt) {
  RadialState out = s;
  RadialStepper(phys, grid, dt).step(out);
  return out;
}

FdmResult fdm_run(const PhysParams& phys, double ic_radius, const RadialGrid& grid, double dt, double horizon,
                  const FdmOptions& opts) {
  if (grid.intervals < 10) throw std::invalid_argument("fdm_run: need at least 10 intervals");
  FdmResult res;
  RadialState s = radial_initial(phys.mass, ic_radius, grid);
  const long steps = std::lround(horizon / dt);
  const long early = std::max(1L, steps / 10);
  double early_scale = 0.0;
  res.series.push_back({0.0, 0.0, radial_mass(s, grid)});
  RadialStepper stepper(phys, grid, dt);
  for (long n = 1; n <= steps; ++n) {
    stepper.step(s);
    s.time = double(n) * dt;
    double sup = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < s.c.size(); ++i) {
      if (!std::isfinite(s.c[i]) || !std::isfinite(s.rho[i])) finite = false;
      sup = std::max(sup, std::abs(s.c[i]));
    }
    if (finite) res.sup_c = std::max(res.sup_c, sup);
    if (n <= early) early_scale = std::max(early_scale, sup);
    const bool runaway = n > early && early_scale > 0.0 && sup > opts.growth_limit * early_scale;
    if (!finite || runaway) {
      res.unstable = true;
      res.unstable_time = s.time;
      res.series.push_back({s.time, sup, radial_mass(s, grid)});
      break;
    }
    if (n % opts.record_every == 0 || n == steps) res.series.push_back({s.time, sup, radial_mass(s, grid)});
  }
  res.final_state = std::move(s);
  return res;
}

}  // namespace sipf
