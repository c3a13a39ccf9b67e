#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sipf/particles.hpp"
#include "sipf/spectral.hpp"

namespace sipf {

/// 8-bit RGB raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image(int w, int h) : width(w), height(h), rgb(std::size_t(w) * h * 3, 255) {}
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

void write_png(const std::filesystem::path& file, const Image& img);

/// c on the z = 0 plane of the quadrature grid, upsampled by zero padding.
void plot_field_slice(const std::filesystem::path& file, const SpectralField& field, int refine = 4);

/// x-y, x-z and y-z projections side by side.
void plot_particles(const std::filesystem::path& file, const ParticleEnsemble& e, double box_len);

/// Polylines on shared axes; each curve gets its own color.
void plot_series(const std::filesystem::path& file, const std::vector<std::vector<double>>& xs,
                 const std::vector<std::vector<double>>& ys);

}  // namespace sipf
