#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "sipf/config.hpp"
#include "sipf/spectral.hpp"
#include "sipf/vec3.hpp"

namespace sipf {

/// P particle positions in [-L/2, L/2]^3; rho ~ (M/P) sum_p delta(x - X_p).
struct ParticleEnsemble {
  std::vector<Vec3> positions;

  [[nodiscard]] std::size_t size() const { return positions.size(); }
};

/// Componentwise clamp into [-L/2, L/2].
Vec3 clamp_to_domain(const Vec3& x, double box_len);

struct PairwiseDrift {
  std::vector<Vec3> increments;
  /// Pairs closer than the r_min floor (or exactly coincident) that were skipped.
  std::size_t skipped_pairs = 0;
};

/// increment_p = -(chi M dt / P) sum_{q != p} grad K(X_p - X_q).
/// Each unordered pair is evaluated once and applied with opposite signs.
PairwiseDrift pairwise_drift(std::span<const Vec3> positions, const PhysParams& phys, double beta, double dt,
                             double r_min = 0.0, int threads = 1);

/// Offset that moves x to the center of its quadrature cell:
/// L/(2H) + floor(x / (L/H)) (L/H) - x, componentwise.
Vec3 compute_shift(const Vec3& x, const Discretization& disc);

/// Evaluates the field part of the drift,
///   -eps chi (L/H)^3 sum_g grad K((x + s) - x_g) c(x_g - s),  s = compute_shift(x),
/// for many particles against one field. The kernel values only depend on
/// the integer cell offset between x + s and x_g, so they are tabulated once.
class FieldDriftEvaluator {
 public:
  FieldDriftEvaluator(const Discretization& disc, const PhysParams& phys, double beta);
  ~FieldDriftEvaluator();
  FieldDriftEvaluator(const FieldDriftEvaluator&) = delete;
  FieldDriftEvaluator& operator=(const FieldDriftEvaluator&) = delete;

  /// Binds the field c_{n-1}. Throws CorruptedFieldError if it is not Hermitian.
  void bind(const SpectralField& field);

  /// Drift for each position (parallel over fixed blocks).
  std::vector<Vec3> drift(std::span<const Vec3> positions, int threads = 1) const;

  /// Drift for one position.
  Vec3 drift(const Vec3& x) const;

 private:
  struct Scratch;
  Vec3 drift_with(const Vec3& x, Scratch& scratch) const;

  Discretization disc_;
  double prefactor_;  // -eps chi h^3
  int modes_;
  std::vector<Vec3> table_;  // grad K at offsets (o + 1/2) h, o in [-H+1, H]^3
  std::vector<cplx> bound_half_;  // field coefficients in FFTW half-spectrum layout
  bool bound_zero_ = true;
  struct PlanHolder;
  std::unique_ptr<PlanHolder> plan_;
};

/// Field part of the drift at one point (convenience wrapper).
Vec3 field_drift(const Vec3& x, const SpectralField& field, const PhysParams& phys, double beta,
                 const Discretization& disc);

struct StepStats {
  std::size_t skipped_pairs = 0;
};

/// One particle update: X <- clamp(X + pairwise + field + Brownian).
/// `field` is the staggered c_{n-1}; `step` keys the Brownian substreams.
StepStats particle_step(ParticleEnsemble& ens, const FieldDriftEvaluator& field_drift, const PhysParams& phys,
                        const Discretization& disc, double beta, long step, const RunOptions& opts, int threads);

}  // namespace sipf
