#pragma once

#include <span>
#include <vector>

#include "sipf/config.hpp"

namespace sipf {

/// Nodes r_i = i h, i = 0..N, h = r_max / N. Each node owns the control
/// volume [r_i - h/2, r_i + h/2] clipped to [0, r_max]; zero flux through r = 0
/// and r = r_max.
struct RadialGrid {
  double r_max = 20.0;
  long intervals = 20000;

  [[nodiscard]] double h() const { return r_max / double(intervals); }
  [[nodiscard]] std::size_t nodes() const { return std::size_t(intervals) + 1; }
  /// Control-volume measure of node i divided by 4 pi.
  [[nodiscard]] double volume(std::size_t i) const;
  /// Face measure r_{i+1/2}^2 between nodes i and i + 1.
  [[nodiscard]] double face(std::size_t i) const;
};

struct RadialState {
  std::vector<double> rho;
  std::vector<double> c;
  double time = 0.0;
};

/// Solves a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i (a_0 and c_{n-1} unused).
std::vector<double> solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                                      std::span<const double> c, std::span<const double> d);

/// max |A x - d| / max |d|.
double tridiagonal_residual(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                            std::span<const double> d, std::span<const double> x);

/// 4 pi sum V_i rho_i.
double radial_mass(const RadialState& s, const RadialGrid& grid);

/// rho uniform on r_i <= radius, scaled so the discrete mass is `mass`; c = 0.
RadialState radial_initial(double mass, double radius, const RadialGrid& grid);

/// One step. c: (eps/dt + k^2 - lap) c^{n+1} = eps c^n / dt + rho^n.
/// rho: implicit diffusion, explicit first-order upwind transport with
/// velocity chi dc^{n+1}/dr.
RadialState fdm_step(const RadialState& s, const PhysParams& phys, const RadialGrid& grid, double dt);

/// fdm_step with the grid geometry and both tridiagonal factorizations cached.
class RadialStepper {
 public:
  RadialStepper(const PhysParams& phys, const RadialGrid& grid, double dt);
  /// Advances `s` in place.
  void step(RadialState& s);

 private:
  struct Factor {
    std::vector<double> lower;      // sub-diagonal
    std::vector<double> upper;      // c'_i of the sweep
    std::vector<double> inv_pivot;  // 1 / pivot_i
  };
  static Factor factor(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c);
  static void solve(const Factor& f, std::vector<double>& x);

  PhysParams phys_;
  RadialGrid grid_;
  double dt_;
  std::vector<double> inv_volume_, face_;
  Factor c_factor_, rho_factor_;
  std::vector<double> rhs_, flux_;
};

struct FdmSample {
  double time = 0.0;
  double sup_c = 0.0;
  double mass = 0.0;
};

struct FdmResult {
  std::vector<FdmSample> series;
  RadialState final_state;
  double sup_c = 0.0;       // over all recorded times and nodes
  bool unstable = false;
  double unstable_time = -1.0;
};

struct FdmOptions {
  long record_every = 100;
  /// Flag when sup|c| exceeds this multiple of its scale over the first tenth of the run.
  double growth_limit = 1e6;
};

FdmResult fdm_run(const PhysParams& phys, double ic_radius, const RadialGrid& grid, double dt, double horizon,
                  const FdmOptions& opts = {});

}  // namespace sipf
