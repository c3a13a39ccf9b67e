#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "sipf/config.hpp"
#include "sipf/rng.hpp"
#include "sipf/spectral.hpp"
#include "sipf/vec3.hpp"

namespace sipf::testing {

/// Hand-rolled generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(substream(seed, StreamTag::Test, 0, 0)) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  Vec3 vec(double a, double b) { return {uniform(a, b), uniform(a, b), uniform(a, b)}; }
  Vec3 direction() {
    Vec3 v;
    do v = standard_normal3(rng_);
    while (norm(v) < 1e-12);
    return v * (1.0 / norm(v));
  }
  /// Point with |x| in [r0, r1].
  Vec3 shell(double r0, double r1) { return direction() * uniform(r0, r1); }
  std::vector<Vec3> cloud(std::size_t n, double half) {
    std::vector<Vec3> v(n);
    for (auto& x : v) x = vec(-half, half);
    return v;
  }
  SplitMix64& engine() { return rng_; }

 private:
  SplitMix64 rng_;
};

/// Random Hermitian field with modes |j|,|m|,|l| <= band (Nyquist planes zero).
inline SpectralField random_field(Gen& g, double box_len, int modes, int band, double scale = 1.0) {
  SpectralField f(box_len, modes);
  auto& c = f.coeffs;
  band = std::min(band, modes / 2 - 1);
  for (int j = -band; j <= band; ++j)
    for (int m = -band; m <= band; ++m)
      for (int l = -band; l <= band; ++l) {
        if (c(j, m, l) != cplx{}) continue;
        if (j == 0 && m == 0 && l == 0) {
          c(0, 0, 0) = g.uniform(-scale, scale);
          continue;
        }
        const cplx v(g.uniform(-scale, scale), g.uniform(-scale, scale));
        c(j, m, l) = v;
        c(-j, -m, -l) = std::conj(v);
      }
  return f;
}

inline PhysParams eg_params(double mass = 20.0) {
  PhysParams p;
  p.mu = 1.0;
  p.chi = 1.0;
  p.epsilon = 1e-4;
  p.k = 0.1;
  p.mass = mass;
  return p;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace sipf::testing
