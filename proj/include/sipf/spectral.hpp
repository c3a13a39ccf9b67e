#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sipf/config.hpp"
#include "sipf/vec3.hpp"

namespace sipf {

using cplx = std::complex<double>;

/// Complex values on the centered H^3 mode cube j, m, l in {-H/2, ..., H/2-1},
/// stored j-major. The same layout indexes the H^3 quadrature grid
/// x_{j,m,l} = (j, m, l) L / H.
///
/// Modes with any index equal to -H/2 (the Nyquist planes) have no conjugate
/// partner inside the cube. Everything in this module keeps them at zero so
/// that the represented function is real everywhere, not just on the grid.
class ModeCube {
 public:
  ModeCube() = default;
  explicit ModeCube(int modes) : modes_(modes), data_(std::size_t(modes) * modes * modes) {}

  [[nodiscard]] int modes() const { return modes_; }
  [[nodiscard]] int min_index() const { return -modes_ / 2; }
  [[nodiscard]] int max_index() const { return modes_ / 2 - 1; }
  [[nodiscard]] bool contains(int j, int m, int l) const {
    return j >= min_index() && j <= max_index() && m >= min_index() && m <= max_index() &&
           l >= min_index() && l <= max_index();
  }
  [[nodiscard]] bool is_nyquist(int j, int m, int l) const {
    return j == min_index() || m == min_index() || l == min_index();
  }
  [[nodiscard]] std::size_t index(int j, int m, int l) const {
    const int h = modes_ / 2;
    return (std::size_t(j + h) * modes_ + std::size_t(m + h)) * modes_ + std::size_t(l + h);
  }
  cplx& operator()(int j, int m, int l) { return data_[index(j, m, l)]; }
  const cplx& operator()(int j, int m, int l) const { return data_[index(j, m, l)]; }

  [[nodiscard]] std::span<cplx> values() { return data_; }
  [[nodiscard]] std::span<const cplx> values() const { return data_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }

  friend bool operator==(const ModeCube&, const ModeCube&) = default;

 private:
  int modes_ = 0;
  std::vector<cplx> data_;
};

/// Fourier transform of the particle density, rho_hat(omega) = (M/P) sum_p exp(-i omega.X_p).
/// rho_hat(0) is the total mass.
struct ModeArray {
  ModeCube values;
};

/// Field c(x) = sum alpha_{j,m,l} exp(i omega.x) on the centered box of side L.
/// The coefficients are those of the basis functions, so the integral of c
/// over the box is L^3 alpha_000.
struct SpectralField {
  double box_len = 0.0;
  ModeCube coeffs;

  SpectralField() = default;
  SpectralField(double box_len, int modes) : box_len(box_len), coeffs(modes) {}

  [[nodiscard]] int modes() const { return coeffs.modes(); }

  friend bool operator==(const SpectralField&, const SpectralField&) = default;
};

class CorruptedFieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Particle deposition. Parallel over fixed particle blocks with a tree
/// reduction, so the result is bitwise independent of `threads`.
ModeArray deposit_particles(std::span<const Vec3> positions, double mass, const Discretization& disc,
                            int threads = 1);

/// One implicit-Euler step of the field:
///   c_n(w) = A(w) c_{n-1}(w) + rho_hat(w) / (L^3 (|w|^2 + beta^2)),
///   A(w) = 1 / (1 + (|w|^2 + k^2) dt / eps),  A = 0 when eps = 0.
SpectralField field_step(const SpectralField& prev, const ModeArray& rho_hat, const PhysParams& phys,
                         const Discretization& disc);

/// Largest |alpha(-w) - conj(alpha(w))| (and |alpha| on Nyquist planes),
/// relative to max |alpha|. Zero for an all-zero field.
double hermitian_asymmetry(const SpectralField& field);

/// c at the H^3 quadrature points x_{j,m,l}, in ModeCube layout.
/// Throws CorruptedFieldError if the field is not Hermitian to 1e-10 or the
/// inverse transform leaves an imaginary residue above 1e-8.
std::vector<double> eval_field_grid(const SpectralField& field);

/// c at the points x_{j,m,l} - shift.
std::vector<double> eval_field_shifted(const SpectralField& field, const Vec3& shift);

/// max |c| over the quadrature grid refined `refine` times by zero padding.
double field_max_abs(const SpectralField& field, int refine = 1);

/// Integral of c over the box, L^3 Re(alpha_000).
double total_concentration(const SpectralField& field);

/// Forward transform of grid samples (ModeCube layout) back to coefficients.
SpectralField field_from_grid(std::span<const double> values, double box_len, int modes);

/// Snapshot CSV: two header lines, then rows j,m,l,re,im.
void write_field_snapshot(std::ostream& out, const SpectralField& field, long step, double time);
void write_field_snapshot(const std::string& path, const SpectralField& field, long step, double time);

/// Reads a snapshot written by write_field_snapshot. Entries outside the
/// target cube are dropped, as are Nyquist-plane entries.
SpectralField read_field_snapshot(std::istream& in);
SpectralField read_field_snapshot(const std::string& path);

}  // namespace sipf
