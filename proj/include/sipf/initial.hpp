#pragma once

#include <cstdint>
#include <utility>

#include "sipf/config.hpp"
#include "sipf/particles.hpp"
#include "sipf/rng.hpp"
#include "sipf/spectral.hpp"

namespace sipf {

/// Uniform point in the ball of radius `radius` about `center`.
Vec3 sample_ball(SplitMix64& rng, const Vec3& center, double radius);

/// Particle counts per cluster: P / n each, the remainder going to the first clusters.
std::vector<std::size_t> cluster_allocation(std::size_t particles, std::size_t clusters);

/// rho_0 samples (one substream per particle) and the initial field c_0.
/// Throws ConfigError for balls outside the box or P below the cluster count.
std::pair<ParticleEnsemble, SpectralField> sample_initial(const InitSpec& init, const Discretization& disc);

/// Initial field: all zeros for "zero", otherwise a snapshot file whose modes
/// are copied onto the target cube (missing modes stay zero).
SpectralField initial_field(const InitSpec& init, const Discretization& disc);

}  // namespace sipf
