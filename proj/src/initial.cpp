#include "sipf/initial.hpp"

#include <cmath>
#include <random>
#include <string>

#include "sipf/rng.hpp"

namespace sipf {

Vec3 sample_ball(SplitMix64& rng, const Vec3& center, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec3 dir = standard_normal3(rng);
  double n = norm(dir);
  while (n == 0.0) {
    dir = standard_normal3(rng);
    n = norm(dir);
  }
  const double r = radius * std::cbrt(unit(rng));
  return center + dir * (r / n);
}

std::vector<std::size_t> cluster_allocation(std::size_t particles, std::size_t clusters) {
  std::vector<std::size_t> counts(clusters, clusters ? particles / clusters : 0);
  for (std::size_t c = 0; c < clusters && c < particles % clusters; ++c) ++counts[c];
  return counts;
}

namespace {

void check_geometry(const InitSpec& init, const Discretization& disc) {
  std::vector<std::string> bad;
  if (!(init.radius > 0.0)) bad.push_back("init.radius must be positive");
  if (init.centers.empty()) bad.push_back("init: at least one center is required");
  if (init.shape == DensityShape::Ball && init.centers.size() != 1)
    bad.push_back("init: a single ball takes exactly one center");
  for (const auto& c : init.centers)
    for (int i = 0; i < 3; ++i)
      if (std::abs(c[i]) + init.radius > disc.box_len / 2.0) {
        bad.push_back("init: ball leaves the domain");
        i = 3;
      }
  if (disc.particles < init.centers.size()) bad.push_back("init: fewer particles than clusters");
  if (!bad.empty()) throw ConfigError(bad);
}

}  // namespace

SpectralField initial_field(const InitSpec& init, const Discretization& disc) {
  SpectralField out(disc.box_len, disc.modes);
  if (init.c0 == "zero" || init.c0.empty()) return out;
  const SpectralField src = read_field_snapshot(init.c0);
  if (std::abs(src.box_len - disc.box_len) > 1e-12 * disc.box_len)
    throw ConfigError({"init.c0: snapshot box length does not match disc.box_len"});
  const auto& s = src.coeffs;
  auto& d = out.coeffs;
  for (int j = d.min_index() + 1; j <= d.max_index(); ++j)
    for (int m = d.min_index() + 1; m <= d.max_index(); ++m)
      for (int l = d.min_index() + 1; l <= d.max_index(); ++l)
        if (s.contains(j, m, l) && !s.is_nyquist(j, m, l)) d(j, m, l) = s(j, m, l);
  return out;
}

std::pair<ParticleEnsemble, SpectralField> sample_initial(const InitSpec& init, const Discretization& disc) {
  check_geometry(init, disc);
  ParticleEnsemble ens;
  ens.positions.reserve(disc.particles);
  const auto counts = cluster_allocation(disc.particles, init.centers.size());
  std::size_t p = 0;
  for (std::size_t c = 0; c < counts.size(); ++c)
    for (std::size_t i = 0; i < counts[c]; ++i, ++p) {
      auto rng = substream(disc.seed, StreamTag::InitialSample, p, 0);
      ens.positions.push_back(sample_ball(rng, init.centers[c], init.radius));
    }
  return {std::move(ens), initial_field(init, disc)};
}

}  // namespace sipf
