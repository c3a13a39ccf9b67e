#include "sipf/particles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "sipf/kernel.hpp"
#include "sipf/parallel.hpp"
#include "sipf/rng.hpp"

namespace sipf {

namespace {

constexpr std::size_t kPairBlock = 128;
constexpr std::size_t kDriftBlock = 64;

int wrap(int j, int n) { return j < 0 ? j + n : j; }

}  // namespace

Vec3 clamp_to_domain(const Vec3& x, double box_len) {
  const double h = box_len / 2.0;
  return {std::clamp(x.x, -h, h), std::clamp(x.y, -h, h), std::clamp(x.z, -h, h)};
}

PairwiseDrift pairwise_drift(std::span<const Vec3> positions, const PhysParams& phys, double beta, double dt,
                             double r_min, int threads) {
  const std::size_t P = positions.size();
  PairwiseDrift out;
  out.increments.assign(P, Vec3{});
  if (P < 2) return out;
  const double coef = phys.chi * phys.mass * dt / double(P);
  const double r_min_sq = r_min * r_min;

  const std::size_t blocks = (P + kPairBlock - 1) / kPairBlock;
  std::vector<std::vector<Vec3>> parts(blocks);
  std::vector<std::size_t> skipped(blocks, 0);
  parallel_for(blocks, threads, [&](std::size_t b) {
    auto& inc = parts[b];
    inc.assign(P, Vec3{});
    const std::size_t end = std::min(P, (b + 1) * kPairBlock);
    for (std::size_t p = b * kPairBlock; p < end; ++p) {
      const Vec3 xp = positions[p];
      Vec3 acc;
      for (std::size_t q = p + 1; q < P; ++q) {
        const double dx = xp.x - positions[q].x;
        const double dy = xp.y - positions[q].y;
        const double dz = xp.z - positions[q].z;
        const double r2 = dx * dx + dy * dy + dz * dz;
        if (r2 == 0.0 || r2 < r_min_sq) {
          ++skipped[b];
          continue;
        }
        const double f = coef * kernel_grad_factor(std::sqrt(r2), beta);
        // grad K(X_p - X_q) points from q to p; p moves against it, q along it.
        acc.x -= f * dx;
        acc.y -= f * dy;
        acc.z -= f * dz;
        inc[q].x += f * dx;
        inc[q].y += f * dy;
        inc[q].z += f * dz;
      }
      inc[p] += acc;
    }
  });
  tree_reduce(parts);
  out.increments = std::move(parts[0]);
  for (auto s : skipped) out.skipped_pairs += s;
  return out;
}

Vec3 compute_shift(const Vec3& x, const Discretization& disc) {
  const double h = disc.cell();
  Vec3 s;
  for (int i = 0; i < 3; ++i) s[i] = 0.5 * h + std::floor(x[i] / h) * h - x[i];
  return s;
}

struct FieldDriftEvaluator::PlanHolder {
  explicit PlanHolder(int n) : plan(n) {}
  detail::C2RPlan plan;
};

struct FieldDriftEvaluator::Scratch {
  explicit Scratch(const detail::C2RPlan& plan, int n)
      : spectrum(plan.half_size()), values(plan.real_size()), p1(n), p2(n), p3(n / 2 + 1) {}
  detail::FftwBuffer<cplx> spectrum;
  detail::FftwBuffer<double> values;
  std::vector<cplx> p1, p2, p3;
};

FieldDriftEvaluator::FieldDriftEvaluator(const Discretization& disc, const PhysParams& phys, double beta)
    : disc_(disc),
      prefactor_(-phys.epsilon * phys.chi * std::pow(disc.cell(), 3)),
      modes_(disc.modes),
      plan_(std::make_unique<PlanHolder>(disc.modes)) {
  const int H = modes_;
  const int span = 2 * H;
  const double h = disc.cell();
  table_.resize(std::size_t(span) * span * span);
  for (int a = 0; a < span; ++a)
    for (int b = 0; b < span; ++b)
      for (int c = 0; c < span; ++c) {
        const Vec3 d{(a - H + 1 + 0.5) * h, (b - H + 1 + 0.5) * h, (c - H + 1 + 0.5) * h};
        table_[(std::size_t(a) * span + b) * span + c] = eval_kernel_grad(d, beta);
      }
  bound_half_.assign(plan_->plan.half_size(), cplx{});
}

FieldDriftEvaluator::~FieldDriftEvaluator() = default;

void FieldDriftEvaluator::bind(const SpectralField& field) {
  if (field.modes() != modes_) throw std::invalid_argument("FieldDriftEvaluator: mode count mismatch");
  if (hermitian_asymmetry(field) > 1e-10) throw CorruptedFieldError("field drift: field is not Hermitian");
  const int H = modes_;
  const int hl = H / 2 + 1;
  std::fill(bound_half_.begin(), bound_half_.end(), cplx{});
  bound_zero_ = true;
  const auto& c = field.coeffs;
  for (int j = c.min_index(); j <= c.max_index(); ++j)
    for (int m = c.min_index(); m <= c.max_index(); ++m)
      for (int l = 0; l <= c.max_index(); ++l) {
        const cplx v = c(j, m, l);
        if (v != cplx{}) bound_zero_ = false;
        bound_half_[(std::size_t(wrap(j, H)) * H + wrap(m, H)) * hl + l] = v;
      }
}

Vec3 FieldDriftEvaluator::drift_with(const Vec3& x, Scratch& s) const {
  if (bound_zero_) return Vec3{};
  const int H = modes_;
  const int hl = H / 2 + 1;
  const double h = disc_.cell();
  const double w0 = 2.0 * std::numbers::pi / disc_.box_len;
  const Vec3 shift = compute_shift(x, disc_);

  // Phases exp(-i omega shift) per axis, in FFT order.
  for (int a = 0; a < H; ++a) {
    const int j = a < H / 2 ? a : a - H;
    s.p1[a] = std::polar(1.0, -w0 * j * shift.x);
    s.p2[a] = std::polar(1.0, -w0 * j * shift.y);
  }
  for (int l = 0; l < hl; ++l) s.p3[l] = std::polar(1.0, -w0 * l * shift.z);

  for (int a = 0; a < H; ++a)
    for (int b = 0; b < H; ++b) {
      const cplx pab = s.p1[a] * s.p2[b];
      const cplx* src = bound_half_.data() + (std::size_t(a) * H + b) * hl;
      cplx* dst = s.spectrum.data() + (std::size_t(a) * H + b) * hl;
      for (int l = 0; l < hl; ++l) {
        const cplx ph(pab.real() * s.p3[l].real() - pab.imag() * s.p3[l].imag(),
                      pab.real() * s.p3[l].imag() + pab.imag() * s.p3[l].real());
        dst[l] = cplx(src[l].real() * ph.real() - src[l].imag() * ph.imag(),
                      src[l].real() * ph.imag() + src[l].imag() * ph.real());
      }
    }
  plan_->plan.execute(s.spectrum.data(), s.values.data());

  // Cell of x + shift; the kernel offset for grid point g is n - g.
  int n[3];
  for (int i = 0; i < 3; ++i) n[i] = int(std::floor(x[i] / h));
  const int span = 2 * H;
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (int g1 = -H / 2; g1 < H / 2; ++g1) {
    const int o1 = n[0] - g1 + H - 1;
    for (int g2 = -H / 2; g2 < H / 2; ++g2) {
      const int o2 = n[1] - g2 + H - 1;
      const double* vals = s.values.data() + (std::size_t(wrap(g1, H)) * H + wrap(g2, H)) * H;
      const Vec3* trow = table_.data() + (std::size_t(o1) * span + o2) * span;
      for (int g3 = -H / 2; g3 < H / 2; ++g3) {
        const double cv = vals[wrap(g3, H)];
        const Vec3& t = trow[n[2] - g3 + H - 1];
        sx += t.x * cv;
        sy += t.y * cv;
        sz += t.z * cv;
      }
    }
  }
  return Vec3{sx, sy, sz} * prefactor_;
}

Vec3 FieldDriftEvaluator::drift(const Vec3& x) const {
  Scratch s(plan_->plan, modes_);
  return drift_with(x, s);
}

std::vector<Vec3> FieldDriftEvaluator::drift(std::span<const Vec3> positions, int threads) const {
  std::vector<Vec3> out(positions.size());
  if (bound_zero_) return out;
  const std::size_t blocks = (positions.size() + kDriftBlock - 1) / kDriftBlock;
  parallel_for(blocks, threads, [&](std::size_t b) {
    Scratch s(plan_->plan, modes_);
    const std::size_t end = std::min(positions.size(), (b + 1) * kDriftBlock);
    for (std::size_t p = b * kDriftBlock; p < end; ++p) out[p] = drift_with(positions[p], s);
  });
  return out;
}

Vec3 field_drift(const Vec3& x, const SpectralField& field, const PhysParams& phys, double beta,
                 const Discretization& disc) {
  FieldDriftEvaluator eval(disc, phys, beta);
  eval.bind(field);
  return eval.drift(x);
}

StepStats particle_step(ParticleEnsemble& ens, const FieldDriftEvaluator& field_drift, const PhysParams& phys,
                        const Discretization& disc, double beta, long step, const RunOptions& opts, int threads) {
  const auto pair = pairwise_drift(ens.positions, phys, beta, disc.dt, opts.r_min, threads);
  const auto field = field_drift.drift(ens.positions, threads);
  const auto noise = brownian_increments(disc.seed, step, opts.noise_substeps, phys.mu, disc.dt, ens.size());
  for (std::size_t p = 0; p < ens.size(); ++p) {
    ens.positions[p] = clamp_to_domain(ens.positions[p] + pair.increments[p] + field[p] + noise[p], disc.box_len);
  }
  return StepStats{pair.skipped_pairs};
}

}  // namespace sipf
