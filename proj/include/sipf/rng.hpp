#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sipf/vec3.hpp"

namespace sipf {

/// SplitMix64 generator. Cheap to construct, which is what makes one
/// substream per (particle, step) affordable.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

enum class StreamTag : std::uint64_t {
  InitialSample = 0x696e6974,
  Brownian = 0x62726f77,
  Test = 0x74657374,
};

/// Deterministic substream keyed by (root seed, purpose, particle, index).
/// The stream for a given key never depends on P, thread count or call order.
SplitMix64 substream(std::uint64_t seed, StreamTag tag, std::uint64_t particle, std::uint64_t index);

/// Three independent standard normals from the given engine.
Vec3 standard_normal3(SplitMix64& rng);

/// sqrt(2 mu dt) * N for every particle, for step `step` (0-based).
/// The Brownian path is resolved on sub-intervals of width dt / substeps:
/// the increment is the sum of `substeps` sub-interval increments, so runs
/// with dt and dt/2 (and substeps doubled) share the same underlying path.
std::vector<Vec3> brownian_increments(std::uint64_t seed, long step, long substeps, double mu,
                                      double dt, std::size_t particles);

void brownian_increments(std::uint64_t seed, long step, long substeps, double mu, double dt,
                         std::span<Vec3> out);

}  // namespace sipf
