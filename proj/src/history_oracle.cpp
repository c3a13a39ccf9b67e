#include "sipf/history_oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sipf {

namespace {

/// int_a^b of the radial factor g(u) with grad_z G = -g(u) z.
double radial_time_integral(double r2, double a, double b, const PhysParams& phys) {
  const double eps = phys.epsilon;
  const double k2 = phys.k * phys.k;
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double tau = u / eps;
    const double heat = std::pow(4.0 * std::numbers::pi * tau, -1.5) * std::exp(-r2 / (4.0 * tau));
    return heat / (2.0 * tau) * std::exp(-k2 * u / eps);
  };
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(g, a, b, 12, 1e-10);
}

}  // namespace

Vec3 history_drift(std::span<const std::vector<Vec3>> history, std::size_t p, const PhysParams& phys, double dt) {
  const std::size_t n = history.size();
  if (n == 0) return Vec3{};
  const std::size_t P = history.front().size();
  if (P > 20 || n > 50) throw std::invalid_argument("history oracle: limited to P <= 20 and n <= 50");
  if (!(phys.epsilon > 0.0)) throw std::invalid_argument("history oracle: needs eps > 0");
  const Vec3 x = history.back()[p];
  Vec3 grad;
  for (std::size_t j = 0; j < n; ++j) {
    // interval j spans u = t_n - s in [(n-1-j) dt, (n-j) dt]
    const double a = double(n - 1 - j) * dt, b = double(n - j) * dt;
    for (std::size_t q = 0; q < P; ++q) {
      if (q == p) continue;
      const Vec3 z = x - history[j][q];
      const double w = radial_time_integral(norm2(z), a, b, phys);
      grad -= z * w;
    }
  }
  return grad * (phys.chi * dt * phys.mass / (double(P) * phys.epsilon));
}

std::vector<Vec3> history_drift(std::span<const std::vector<Vec3>> history, const PhysParams& phys, double dt) {
  std::vector<Vec3> out;
  if (history.empty()) return out;
  for (std::size_t p = 0; p < history.front().size(); ++p) out.push_back(history_drift(history, p, phys, dt));
  return out;
}

Vec3 elliptic_attraction(const Vec3& z, double k) {
  const double r = norm(z);
  return z * (-std::exp(-k * r) * (1.0 + k * r) / (4.0 * std::numbers::pi * r * r * r));
}

}  // namespace sipf
