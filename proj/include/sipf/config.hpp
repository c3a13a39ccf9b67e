#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sipf/vec3.hpp"

namespace sipf {

/// Physical coefficients of the Keller-Segel system
///   rho_t = div(mu grad rho - chi rho grad c),  eps c_t = lap c - k^2 c + rho
/// together with the conserved total mass of rho.
struct PhysParams {
  double mu = 1.0;
  double chi = 1.0;
  double epsilon = 1e-4;
  double k = 0.1;
  double mass = 20.0;

  friend bool operator==(const PhysParams&, const PhysParams&) = default;
};

struct Discretization {
  double box_len = 8.0;        // L, domain is [-L/2, L/2]^3
  int modes = 24;              // H, Fourier modes per dimension (even)
  std::size_t particles = 10000;
  double dt = 1e-4;
  double horizon = 0.1;        // T
  std::uint64_t seed = 1;

  /// Number of time steps T/dt, rounded to the nearest integer.
  [[nodiscard]] long steps() const;
  /// Quadrature cell width L/H.
  [[nodiscard]] double cell() const { return box_len / modes; }

  friend bool operator==(const Discretization&, const Discretization&) = default;
};

/// Screening rate of the one-step Green's function: beta^2 = k^2 + eps/dt.
struct KernelScale {
  double beta = 1.0;

  static KernelScale from(const PhysParams& phys, double dt);
  [[nodiscard]] double beta_sq() const { return beta * beta; }
};

enum class DensityShape { Ball, MultiBall };

struct InitSpec {
  DensityShape shape = DensityShape::Ball;
  std::vector<Vec3> centers{Vec3{}};
  double radius = 1.0;
  std::string c0 = "zero";  // "zero" or a path to a field snapshot CSV

  friend bool operator==(const InitSpec&, const InitSpec&) = default;
};

/// Vertices of the regular tetrahedron used for the four-cluster initial data.
std::vector<Vec3> tetrahedron_centers();

struct RunOptions {
  int threads = 0;              // 0: SIPF_THREADS or hardware concurrency
  long snapshot_every = 100;    // 0 disables snapshots
  long noise_substeps = 1;      // Brownian path resolution: sub-intervals per step
  double r_min = 0.0;           // pair-distance floor, off by default
  int refine = 1;               // zero-padding factor for the c_inf estimate
  bool snapshot_particles = true;
  bool snapshot_field = true;

  friend bool operator==(const RunOptions&, const RunOptions&) = default;
};

struct Config {
  PhysParams phys;
  Discretization disc;
  InitSpec init;
  RunOptions run;
  /// Keys outside the phys/disc/init/run namespaces (e.g. study.*), kept verbatim.
  std::map<std::string, std::string> extra;

  friend bool operator==(const Config&, const Config&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  [[nodiscard]] const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct ValidatedConfig {
  PhysParams phys;
  Discretization disc;
  KernelScale scale;
  long steps = 0;
};

struct ValidationResult {
  std::optional<ValidatedConfig> config;
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const { return config.has_value(); }
};

ValidationResult validate_config(const PhysParams& phys, const Discretization& disc);

/// Validates phys/disc plus the initial-condition geometry; throws ConfigError.
ValidatedConfig validate_or_throw(const Config& cfg);

/// Key-value text format: `key = value` per line, `#` starts a comment.
Config parse_config(std::string_view text);
std::string serialize_config(const Config& cfg);
Config load_config(const std::string& path);

/// Applies a single `key=value` override (same keys as the file format).
void apply_override(Config& cfg, std::string_view assignment);

/// Angular frequencies omega = (2 pi / L)(j, m, l) over the centered mode cube
/// j, m, l in {-H/2, ..., H/2 - 1}.
class ModeFrequencies {
 public:
  explicit ModeFrequencies(const Discretization& disc);

  [[nodiscard]] int min_index() const { return -modes_ / 2; }
  [[nodiscard]] int max_index() const { return modes_ / 2 - 1; }
  [[nodiscard]] double axis(int j) const { return scale_ * j; }
  [[nodiscard]] Vec3 omega(int j, int m, int l) const { return {axis(j), axis(m), axis(l)}; }
  [[nodiscard]] double omega_sq(int j, int m, int l) const {
    return scale_ * scale_ * double(j * j + m * m + l * l);
  }

 private:
  int modes_;
  double scale_;
};

ModeFrequencies mode_frequencies(const Discretization& disc);

}  // namespace sipf
