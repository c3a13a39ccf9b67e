#include "sipf/plot.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace sipf {

void Image::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  auto* px = &rgb[(std::size_t(y) * width + x) * 3];
  px[0] = r;
  px[1] = g;
  px[2] = b;
}

void write_png(const std::filesystem::path& file, const Image& img) {
  FILE* fp = std::fopen(file.c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot write " + file.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("png encoding failed: " + file.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, png_uint_32(img.width), png_uint_32(img.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y)
    png_write_row(png, const_cast<png_bytep>(&img.rgb[std::size_t(y) * img.width * 3]));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

namespace {

// piecewise-linear approximation of a perceptual dark-blue to yellow map
std::array<std::uint8_t, 3> colormap(double t) {
  static constexpr double stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, int(t));
  const double f = t - i;
  std::array<std::uint8_t, 3> c{};
  for (int k = 0; k < 3; ++k) c[k] = std::uint8_t(std::lround(stops[i][k] * (1 - f) + stops[i + 1][k] * f));
  return c;
}

void line(Image& img, double x0, double y0, double x1, double y1, std::array<std::uint8_t, 3> c) {
  const int n = int(std::max(std::abs(x1 - x0), std::abs(y1 - y0))) + 1;
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / n;
    img.set(int(std::lround(x0 + t * (x1 - x0))), int(std::lround(y0 + t * (y1 - y0))), c[0], c[1], c[2]);
  }
}

}  // namespace

void plot_field_slice(const std::filesystem::path& file, const SpectralField& field, int refine) {
  SpectralField fine(field.box_len, field.modes() * refine);
  const auto& src = field.coeffs;
  for (int j = src.min_index(); j <= src.max_index(); ++j)
    for (int m = src.min_index(); m <= src.max_index(); ++m)
      for (int l = src.min_index(); l <= src.max_index(); ++l) fine.coeffs(j, m, l) = src(j, m, l);
  const auto grid = eval_field_grid(fine);
  const int n = fine.modes();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<double> slice(std::size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double v = grid[fine.coeffs.index(a - n / 2, b - n / 2, 0)];
      slice[std::size_t(a) * n + b] = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const int px = std::max(1, 512 / n);
  Image img(n * px, n * px);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto c = colormap(hi > lo ? (slice[std::size_t(a) * n + b] - lo) / (hi - lo) : 0.0);
      for (int dy = 0; dy < px; ++dy)
        for (int dx = 0; dx < px; ++dx) img.set(a * px + dx, (n - 1 - b) * px + dy, c[0], c[1], c[2]);
    }
  write_png(file, img);
}

void plot_particles(const std::filesystem::path& file, const ParticleEnsemble& e, double box_len) {
  constexpr int panel = 300;
  Image img(3 * panel + 20, panel);
  const int axes[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int p = 0; p < 3; ++p) {
    const int ox = p * (panel + 10);
    line(img, ox, 0, ox + panel - 1, 0, {0, 0, 0});
    line(img, ox, panel - 1, ox + panel - 1, panel - 1, {0, 0, 0});
    line(img, ox, 0, ox, panel - 1, {0, 0, 0});
    line(img, ox + panel - 1, 0, ox + panel - 1, panel - 1, {0, 0, 0});
    for (const auto& x : e.positions) {
      const double u = (x[axes[p][0]] / box_len + 0.5) * (panel - 1);
      const double v = (0.5 - x[axes[p][1]] / box_len) * (panel - 1);
      img.set(ox + int(u), int(v), 30, 60, 200);
    }
  }
  write_png(file, img);
}

void plot_series(const std::filesystem::path& file, const std::vector<std::vector<double>>& xs,
                 const std::vector<std::vector<double>>& ys) {
  constexpr int W = 640, Hh = 400, pad = 20;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (std::size_t c = 0; c < xs.size(); ++c)
    for (std::size_t i = 0; i < xs[c].size(); ++i) {
      if (!std::isfinite(ys[c][i])) continue;
      x0 = std::min(x0, xs[c][i]);
      x1 = std::max(x1, xs[c][i]);
      y0 = std::min(y0, ys[c][i]);
      y1 = std::max(y1, ys[c][i]);
    }
  Image img(W, Hh);
  line(img, pad, Hh - pad, W - pad, Hh - pad, {0, 0, 0});
  line(img, pad, pad, pad, Hh - pad, {0, 0, 0});
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  auto sx = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
  auto sy = [&](double y) { return Hh - pad - (y - y0) / (y1 - y0) * (Hh - 2 * pad); };
  static constexpr std::array<std::array<std::uint8_t, 3>, 4> palette{
      {{200, 30, 30}, {30, 60, 200}, {30, 150, 60}, {160, 90, 0}}};
  for (std::size_t c = 0; c < xs.size(); ++c)
    for (std::size_t i = 1; i < xs[c].size(); ++i) {
      if (!std::isfinite(ys[c][i]) || !std::isfinite(ys[c][i - 1])) continue;
      line(img, sx(xs[c][i - 1]), sy(ys[c][i - 1]), sx(xs[c][i]), sy(ys[c][i]), palette[c % palette.size()]);
    }
  write_png(file, img);
}

}  // namespace sipf
