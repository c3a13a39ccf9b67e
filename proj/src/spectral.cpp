#include "sipf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fft.hpp"
#include "sipf/parallel.hpp"

namespace sipf {

namespace {

constexpr std::size_t kDepositBlock = 256;
constexpr double kHermitianTol = 1e-10;
constexpr double kImagTol = 1e-8;

int wrap(int j, int n) { return j < 0 ? j + n : j; }

/// Coefficients into an n^3 FFT buffer (standard order), zero padded if n > H.
void scatter_to_fft(const SpectralField& field, int n, cplx* buf) {
  std::fill(buf, buf + std::size_t(n) * n * n, cplx{});
  const auto& c = field.coeffs;
  for (int j = c.min_index(); j <= c.max_index(); ++j)
    for (int m = c.min_index(); m <= c.max_index(); ++m)
      for (int l = c.min_index(); l <= c.max_index(); ++l)
        buf[(std::size_t(wrap(j, n)) * n + wrap(m, n)) * n + wrap(l, n)] = c(j, m, l);
}

void require_hermitian(const SpectralField& field) {
  const double asym = hermitian_asymmetry(field);
  if (asym > kHermitianTol) {
    std::ostringstream os;
    os << "field is not Hermitian (relative asymmetry " << asym << ")";
    throw CorruptedFieldError(os.str());
  }
}

/// Real parts of a backward transform in standard order, reordered to the
/// centered grid layout; checks the imaginary residue.
std::vector<double> real_grid(const cplx* buf, int n) {
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t i = 0; i < std::size_t(n) * n * n; ++i) {
    max_re = std::max(max_re, std::abs(buf[i].real()));
    max_im = std::max(max_im, std::abs(buf[i].imag()));
  }
  if (max_im > kImagTol * std::max(max_re, 1e-300) && max_im > 1e-300) {
    std::ostringstream os;
    os << "inverse transform has imaginary residue " << max_im << " vs magnitude " << max_re;
    throw CorruptedFieldError(os.str());
  }
  ModeCube layout(n);
  std::vector<double> out(layout.size());
  const int h = n / 2;
  for (int g1 = -h; g1 < h; ++g1)
    for (int g2 = -h; g2 < h; ++g2)
      for (int g3 = -h; g3 < h; ++g3)
        out[layout.index(g1, g2, g3)] = buf[(std::size_t(wrap(g1, n)) * n + wrap(g2, n)) * n + wrap(g3, n)].real();
  return out;
}

}  // namespace

ModeArray deposit_particles(std::span<const Vec3> positions, double mass, const Discretization& disc,
                            int threads) {
  const int H = disc.modes;
  const int h = H / 2;
  const int lo = -h + 1;  // Nyquist planes stay empty
  const int width = H - 1;
  const int half = h;  // l = 0 .. h-1
  const std::size_t half_size = std::size_t(width) * width * half;
  const double scale = 2.0 * std::numbers::pi / disc.box_len;

  const std::size_t blocks = (positions.size() + kDepositBlock - 1) / kDepositBlock;
  std::vector<std::vector<cplx>> parts(std::max<std::size_t>(blocks, 1), std::vector<cplx>(half_size));

  parallel_for(blocks, threads, [&](std::size_t b) {
    auto& acc = parts[b];
    std::vector<double> e1r(width), e1i(width), e2r(width), e2i(width), e3r(half), e3i(half);
    const std::size_t end = std::min(positions.size(), (b + 1) * kDepositBlock);
    for (std::size_t p = b * kDepositBlock; p < end; ++p) {
      const Vec3& x = positions[p];
      for (int j = lo; j <= h - 1; ++j) {
        const double w = scale * j;
        e1r[j - lo] = std::cos(w * x.x);
        e1i[j - lo] = -std::sin(w * x.x);
        e2r[j - lo] = std::cos(w * x.y);
        e2i[j - lo] = -std::sin(w * x.y);
      }
      for (int l = 0; l < half; ++l) {
        e3r[l] = std::cos(scale * l * x.z);
        e3i[l] = -std::sin(scale * l * x.z);
      }
      for (int a = 0; a < width; ++a) {
        for (int c = 0; c < width; ++c) {
          const double pr = e1r[a] * e2r[c] - e1i[a] * e2i[c];
          const double pi = e1r[a] * e2i[c] + e1i[a] * e2r[c];
          cplx* row = acc.data() + (std::size_t(a) * width + c) * half;
          for (int l = 0; l < half; ++l) {
            row[l] += cplx(pr * e3r[l] - pi * e3i[l], pr * e3i[l] + pi * e3r[l]);
          }
        }
      }
    }
  });
  tree_reduce(parts);

  const double weight = positions.empty() ? 0.0 : mass / double(positions.size());
  const auto& acc = parts[0];
  ModeArray out{ModeCube(H)};
  auto& cube = out.values;
  auto half_at = [&](int j, int m, int l) { return acc[(std::size_t(j - lo) * width + (m - lo)) * half + l] * weight; };
  for (int j = lo; j <= h - 1; ++j) {
    for (int m = lo; m <= h - 1; ++m) {
      for (int l = 1; l < half; ++l) {
        const cplx v = half_at(j, m, l);
        cube(j, m, l) = v;
        cube(-j, -m, -l) = std::conj(v);
      }
      // l = 0 plane: keep the canonical half and mirror it exactly.
      if (j > 0 || (j == 0 && m >= 0)) {
        const cplx v = half_at(j, m, 0);
        cube(j, m, 0) = v;
        cube(-j, -m, 0) = std::conj(v);
      }
    }
  }
  cube(0, 0, 0) = cplx(positions.empty() ? 0.0 : mass, 0.0);
  return out;
}

SpectralField field_step(const SpectralField& prev, const ModeArray& rho_hat, const PhysParams& phys,
                         const Discretization& disc) {
  const int H = prev.modes();
  if (rho_hat.values.modes() != H) throw std::invalid_argument("field_step: mode cube size mismatch");
  const ModeFrequencies freq(disc);
  const double k2 = phys.k * phys.k;
  const double beta2 = k2 + (phys.epsilon > 0.0 ? phys.epsilon / disc.dt : 0.0);
  const double vol = std::pow(prev.box_len, 3);
  SpectralField next(prev.box_len, H);
  const auto& a = prev.coeffs;
  const auto& r = rho_hat.values;
  auto& out = next.coeffs;
  for (int j = a.min_index(); j <= a.max_index(); ++j) {
    for (int m = a.min_index(); m <= a.max_index(); ++m) {
      for (int l = a.min_index(); l <= a.max_index(); ++l) {
        const double w2 = freq.omega_sq(j, m, l);
        const double decay = phys.epsilon > 0.0 ? 1.0 / (1.0 + (w2 + k2) * disc.dt / phys.epsilon) : 0.0;
        out(j, m, l) = decay * a(j, m, l) + r(j, m, l) / (vol * (w2 + beta2));
      }
    }
  }
  return next;
}

double hermitian_asymmetry(const SpectralField& field) {
  const auto& c = field.coeffs;
  double max_abs = 0.0;
  for (const auto& v : c.values()) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) return 0.0;
  double worst = 0.0;
  for (int j = c.min_index(); j <= c.max_index(); ++j)
    for (int m = c.min_index(); m <= c.max_index(); ++m)
      for (int l = c.min_index(); l <= c.max_index(); ++l) {
        const double d = c.is_nyquist(j, m, l) ? std::abs(c(j, m, l))
                                               : std::abs(c(-j, -m, -l) - std::conj(c(j, m, l)));
        worst = std::max(worst, d);
      }
  return worst / max_abs;
}

std::vector<double> eval_field_grid(const SpectralField& field) {
  require_hermitian(field);
  const int n = field.modes();
  detail::BackwardC2C fft(n);
  scatter_to_fft(field, n, fft.data());
  fft.execute();
  return real_grid(fft.data(), n);
}

std::vector<double> eval_field_shifted(const SpectralField& field, const Vec3& shift) {
  const ModeFrequencies freq(Discretization{.box_len = field.box_len, .modes = field.modes()});
  SpectralField shifted = field;
  auto& c = shifted.coeffs;
  for (int j = c.min_index(); j <= c.max_index(); ++j)
    for (int m = c.min_index(); m <= c.max_index(); ++m)
      for (int l = c.min_index(); l <= c.max_index(); ++l)
        c(j, m, l) *= std::polar(1.0, -dot(freq.omega(j, m, l), shift));
  return eval_field_grid(shifted);
}

double field_max_abs(const SpectralField& field, int refine) {
  require_hermitian(field);
  const int n = field.modes() * std::max(1, refine);
  detail::BackwardC2C fft(n);
  scatter_to_fft(field, n, fft.data());
  fft.execute();
  double best = 0.0;
  for (std::size_t i = 0; i < std::size_t(n) * n * n; ++i) best = std::max(best, std::abs(fft.data()[i].real()));
  return best;
}

double total_concentration(const SpectralField& field) {
  return std::pow(field.box_len, 3) * field.coeffs(0, 0, 0).real();
}

SpectralField field_from_grid(std::span<const double> values, double box_len, int modes) {
  ModeCube layout(modes);
  if (values.size() != layout.size()) throw std::invalid_argument("field_from_grid: size mismatch");
  detail::ForwardC2C fft(modes);
  const int h = modes / 2;
  for (int g1 = -h; g1 < h; ++g1)
    for (int g2 = -h; g2 < h; ++g2)
      for (int g3 = -h; g3 < h; ++g3)
        fft.data()[(std::size_t(wrap(g1, modes)) * modes + wrap(g2, modes)) * modes + wrap(g3, modes)] =
            values[layout.index(g1, g2, g3)];
  fft.execute();
  SpectralField out(box_len, modes);
  const double norm = 1.0 / double(layout.size());
  for (int j = -h; j < h; ++j)
    for (int m = -h; m < h; ++m)
      for (int l = -h; l < h; ++l) {
        if (out.coeffs.is_nyquist(j, m, l)) continue;
        out.coeffs(j, m, l) =
            fft.data()[(std::size_t(wrap(j, modes)) * modes + wrap(m, modes)) * modes + wrap(l, modes)] * norm;
      }
  return out;
}

void write_field_snapshot(std::ostream& out, const SpectralField& field, long step, double time) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "# L=%.17g,H=%d,step=%ld,time=%.17g\n", field.box_len, field.modes(), step, time);
  out << buf << "j,m,l,re,im\n";
  const auto& c = field.coeffs;
  for (int j = c.min_index(); j <= c.max_index(); ++j)
    for (int m = c.min_index(); m <= c.max_index(); ++m)
      for (int l = c.min_index(); l <= c.max_index(); ++l) {
        const cplx v = c(j, m, l);
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g\n", j, m, l, v.real(), v.imag());
        out << buf;
      }
}

void write_field_snapshot(const std::string& path, const SpectralField& field, long step, double time) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_field_snapshot(out, field, step, time);
}

SpectralField read_field_snapshot(std::istream& in) {
  std::string line;
  double box_len = 0.0;
  int modes = 0;
  if (!std::getline(in, line) || std::sscanf(line.c_str(), "# L=%lf,H=%d", &box_len, &modes) != 2 || modes <= 0 ||
      modes % 2 != 0)
    throw std::runtime_error("field snapshot: malformed header '" + line + "'");
  std::getline(in, line);  // column names
  SpectralField field(box_len, modes);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int j, m, l;
    double re, im;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lf", &j, &m, &l, &re, &im) != 5)
      throw std::runtime_error("field snapshot: malformed row '" + line + "'");
    if (!field.coeffs.contains(j, m, l) || field.coeffs.is_nyquist(j, m, l)) continue;
    field.coeffs(j, m, l) = cplx(re, im);
  }
  return field;
}

SpectralField read_field_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read field snapshot '" + path + "'");
  return read_field_snapshot(in);
}

}  // namespace sipf
