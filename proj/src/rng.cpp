#include "sipf/rng.hpp"

#include <cmath>
#include <random>

namespace sipf {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitMix64 substream(std::uint64_t seed, StreamTag tag, std::uint64_t particle, std::uint64_t index) {
  std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
  h = mix(h ^ static_cast<std::uint64_t>(tag));
  h = mix(h ^ (particle + 0x632be59bd9b4e019ULL));
  h = mix(h ^ (index * 0x85ebca77c2b2ae63ULL + 1));
  return SplitMix64(h);
}

Vec3 standard_normal3(SplitMix64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec3 v;
  v.x = normal(rng);
  v.y = normal(rng);
  v.z = normal(rng);
  return v;
}

void brownian_increments(std::uint64_t seed, long step, long substeps, double mu, double dt,
                         std::span<Vec3> out) {
  if (mu == 0.0) {
    for (auto& v : out) v = Vec3{};
    return;
  }
  const double amp = std::sqrt(2.0 * mu * dt / double(substeps));
  for (std::size_t p = 0; p < out.size(); ++p) {
    Vec3 sum;
    for (long s = 0; s < substeps; ++s) {
      auto rng = substream(seed, StreamTag::Brownian, p, std::uint64_t(step * substeps + s));
      sum += standard_normal3(rng);
    }
    out[p] = sum * amp;
  }
}

std::vector<Vec3> brownian_increments(std::uint64_t seed, long step, long substeps, double mu,
                                      double dt, std::size_t particles) {
  std::vector<Vec3> out(particles);
  brownian_increments(seed, step, substeps, mu, dt, out);
  return out;
}

}  // namespace sipf
