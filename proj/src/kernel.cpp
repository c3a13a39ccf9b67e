#include "sipf/kernel.hpp"

#include <numbers>

namespace sipf {

double eval_kernel(const Vec3& x, double beta) {
  const double r = norm(x);
  if (r == 0.0) throw SingularPointError();
  return -std::exp(-beta * r) / (4.0 * std::numbers::pi * r);
}

Vec3 eval_kernel_grad(const Vec3& x, double beta) {
  const double r = norm(x);
  if (r == 0.0) throw SingularPointError();
  return x * kernel_grad_factor(r, beta);
}

double kernel_symbol(double omega_sq, double beta) { return -1.0 / (omega_sq + beta * beta); }

}  // namespace sipf
