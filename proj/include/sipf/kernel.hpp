#pragma once

#include <stdexcept>

#include "sipf/vec3.hpp"

namespace sipf {

class SingularPointError : public std::domain_error {
 public:
  SingularPointError() : std::domain_error("kernel evaluated at its singular point x = 0") {}
};

/// Green's function of (lap - beta^2) in R^3:  K(x) = -exp(-beta |x|) / (4 pi |x|).
double eval_kernel(const Vec3& x, double beta);

/// grad K(x) = exp(-beta r)(1 + beta r) x / (4 pi r^3). Points away from the origin.
Vec3 eval_kernel_grad(const Vec3& x, double beta);

/// Radial factor of grad K: grad K(x) = kernel_grad_factor(r) * x. Requires r > 0.
inline double kernel_grad_factor(double r, double beta) {
  constexpr double inv_four_pi = 0.07957747154594767;
  const double br = beta * r;
  return std::exp(-br) * (1.0 + br) * inv_four_pi / (r * r * r);
}

/// Fourier symbol of K:  -1 / (|omega|^2 + beta^2).
double kernel_symbol(double omega_sq, double beta);

}  // namespace sipf
