#pragma once

#include <span>
#include <vector>

#include "sipf/config.hpp"
#include "sipf/vec3.hpp"

namespace sipf {

/// Full-history particle drift for tiny ensembles (P <= 20, n <= 50, c_0 = 0).
///
/// The concentration at t_n is the Duhamel sum over past intervals,
///   c(x, t_n) = sum_j int_{t_{j-1}}^{t_j} (M/(P eps)) sum_q G(x - X_q^{j-1}, t_n - s) ds,
///   G(z, u) = (4 pi u/eps)^{-3/2} exp(-eps |z|^2 / (4u)) exp(-k^2 u / eps),
/// and the increment of particle p over the next step is chi dt grad c(X_p^{n-1}, t_n),
/// with the self term q = p omitted. history[j] holds the positions used on the
/// (j+1)-th interval; the last entry is the current configuration.
Vec3 history_drift(std::span<const std::vector<Vec3>> history, std::size_t p, const PhysParams& phys,
                   double dt);

/// All particles at once.
std::vector<Vec3> history_drift(std::span<const std::vector<Vec3>> history, const PhysParams& phys, double dt);

/// grad of the screened steady kernel exp(-k r)/(4 pi r): the n -> infinity limit
/// of one frozen source in the history sum, per unit source mass.
Vec3 elliptic_attraction(const Vec3& z, double k);

}  // namespace sipf
