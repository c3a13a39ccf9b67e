#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "sipf/diagnostics.hpp"
#include "sipf/spectral.hpp"
#include "support.hpp"

using namespace sipf;
using sipf::testing::Gen;

namespace {

Discretization disc_of(double L, int H, double dt = 1e-4) {
  Discretization d;
  d.box_len = L;
  d.modes = H;
  d.dt = dt;
  return d;
}

double max_abs_diff(const ModeCube& a, const ModeCube& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

/// Direct evaluation of the series at a point.
double direct_eval(const SpectralField& f, const Vec3& x) {
  const double w = 2 * std::numbers::pi / f.box_len;
  const auto& c = f.coeffs;
  cplx s{};
  for (int j = c.min_index(); j <= c.max_index(); ++j)
    for (int m = c.min_index(); m <= c.max_index(); ++m)
      for (int l = c.min_index(); l <= c.max_index(); ++l)
        s += c(j, m, l) * std::polar(1.0, w * (j * x.x + m * x.y + l * x.z));
  return s.real();
}

}  // namespace

TEST_CASE("deposition: particles at the origin") {
  const auto d = disc_of(8, 8);
  std::vector<Vec3> x(17, Vec3{});
  const auto r = deposit_particles(x, 20.0, d);
  const auto& c = r.values;
  for (int j = c.min_index(); j <= c.max_index(); ++j)
    for (int m = c.min_index(); m <= c.max_index(); ++m)
      for (int l = c.min_index(); l <= c.max_index(); ++l) {
        if (c.is_nyquist(j, m, l))
          CHECK(c(j, m, l) == cplx{});
        else
          CHECK(std::abs(c(j, m, l) - cplx(20.0)) < 1e-12);
      }
}

TEST_CASE("deposition: zero mode is the mass, two symmetric particles give 2 cos") {
  const auto d = disc_of(8, 12);
  Gen g(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = g.cloud(std::size_t(g.integer(1, 300)), 4.0);
    CHECK(deposit_particles(cloud, 7.5, d).values(0, 0, 0) == cplx(7.5));
  }
  const Vec3 x0{0.3, -1.1, 0.7};
  const std::vector<Vec3> pair{x0, -x0};
  const auto r = deposit_particles(pair, 2.0, d);
  const auto f = mode_frequencies(d);
  for (int j = -5; j <= 5; ++j)
    for (int m = -5; m <= 5; ++m)
      for (int l = -5; l <= 5; ++l) {
        const double expect = 2 * std::cos(dot(f.omega(j, m, l), x0));
        CHECK(std::abs(r.values(j, m, l) - cplx(expect)) < 1e-12);
      }
}

TEST_CASE("property: deposition matches the direct sum, is bounded by M and Hermitian") {
  Gen g(2);
  for (int trial = 0; trial < 25; ++trial) {
    const int H = 2 * g.integer(2, 7);
    const auto d = disc_of(g.uniform(2, 10), H);
    const auto cloud = g.cloud(std::size_t(g.integer(1, 600)), d.box_len / 2);
    const double M = g.uniform(1, 100);
    const auto r = deposit_particles(cloud, M, d, g.integer(1, 4));
    const auto f = mode_frequencies(d);
    const int j = g.integer(-H / 2 + 1, H / 2 - 1), m = g.integer(-H / 2 + 1, H / 2 - 1),
              l = g.integer(-H / 2 + 1, H / 2 - 1);
    cplx direct{};
    for (const auto& x : cloud) direct += std::polar(M / double(cloud.size()), -dot(f.omega(j, m, l), x));
    CHECK(std::abs(r.values(j, m, l) - direct) < 1e-10 * M);
    for (const auto& v : r.values.values()) CHECK(std::abs(v) <= M * (1 + 1e-12));
    CHECK(hermitian_asymmetry(SpectralField{d.box_len, H}) == 0.0);
    SpectralField as_field(d.box_len, H);
    as_field.coeffs = r.values;
    CHECK(hermitian_asymmetry(as_field) <= 1e-14);
  }
}

TEST_CASE("deposition is bitwise independent of the thread count") {
  Gen g(3);
  const auto d = disc_of(8, 12);
  const auto cloud = g.cloud(1500, 4.0);
  const auto a = deposit_particles(cloud, 80, d, 1);
  for (int t : {2, 3, 7}) CHECK(deposit_particles(cloud, 80, d, t).values == a.values);
}

TEST_CASE("field_step examples") {
  const auto d = disc_of(8, 8);
  PhysParams p = testing::eg_params();
  Gen g(4);
  const auto rho = deposit_particles(g.cloud(50, 2.0), 20.0, d);
  const auto freq = mode_frequencies(d);
  const double vol = 512.0;

  SUBCASE("elliptic limit") {
    p.epsilon = 0.0;
    const auto prev = testing::random_field(g, 8, 8, 3);
    const auto out = field_step(prev, rho, p, d);
    for (int j = -3; j <= 3; ++j)
      for (int m = -3; m <= 3; ++m)
        for (int l = -3; l <= 3; ++l) {
          const cplx expect = rho.values(j, m, l) / (vol * (freq.omega_sq(j, m, l) + p.k * p.k));
          CHECK(std::abs(out.coeffs(j, m, l) - expect) < 1e-14 * std::abs(expect) + 1e-300);
        }
  }
  SUBCASE("steady state is a fixed point") {
    SpectralField steady(8, 8);
    for (int j = -3; j <= 3; ++j)
      for (int m = -3; m <= 3; ++m)
        for (int l = -3; l <= 3; ++l)
          steady.coeffs(j, m, l) = rho.values(j, m, l) / (vol * (freq.omega_sq(j, m, l) + p.k * p.k));
    const auto out = field_step(steady, rho, p, d);
    CHECK(max_abs_diff(out.coeffs, steady.coeffs) < 1e-13 * std::abs(steady.coeffs(0, 0, 0)));
  }
  SUBCASE("zero mode from rest") {
    ModeArray r{ModeCube(8)};
    r.values(0, 0, 0) = 20.0;
    const auto out = field_step(SpectralField(8, 8), r, p, d);
    CHECK(total_concentration(out) == doctest::Approx(20.0 / 1.01).epsilon(1e-14));
    CHECK(total_concentration(out) == doctest::Approx(19.80198).epsilon(1e-6));
  }
  SUBCASE("eps -> 0 continuity") {
    const auto prev = testing::random_field(g, 8, 8, 3);
    PhysParams tiny = p, zero = p;
    tiny.epsilon = 1e-16;
    zero.epsilon = 0.0;
    const auto a = field_step(prev, rho, tiny, d), b = field_step(prev, rho, zero, d);
    double scale = 0.0;
    for (const auto& v : b.coeffs.values()) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(a.coeffs, b.coeffs) <= 1e-8 * scale);
  }
  SUBCASE("Hermitian symmetry is preserved") {
    auto f = testing::random_field(g, 8, 8, 3);
    for (int n = 0; n < 10; ++n) f = field_step(f, rho, p, d);
    CHECK(hermitian_asymmetry(f) <= 1e-14);
  }
}

TEST_CASE("property: stability envelope over a random forcing sequence") {
  Gen g(5);
  const auto d = disc_of(8, 8, 1e-4);
  const PhysParams p = testing::eg_params(80);
  auto c = testing::random_field(g, 8, 8, 3, 0.01);
  const auto c0 = c;
  const auto freq = mode_frequencies(d);
  for (long n = 1; n <= 60; ++n) {
    c = field_step(c, deposit_particles(g.cloud(40, 4.0), p.mass, d), p, d);
    for (int j = -3; j <= 3; ++j)
      for (int m = -3; m <= 3; ++m)
        for (int l = -3; l <= 3; ++l) {
          const double bound = spectral_envelope(freq.omega_sq(j, m, l), n, 512.0 * std::abs(c0.coeffs(j, m, l)), p, d.dt);
          CHECK(512.0 * std::abs(c.coeffs(j, m, l)) <= bound * (1 + 1e-12));
        }
  }
}

TEST_CASE("eval_field_grid") {
  SUBCASE("constant mode") {
    SpectralField f(8, 8);
    f.coeffs(0, 0, 0) = 2.5;
    for (double v : eval_field_grid(f)) CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
  }
  SUBCASE("cosine pair") {
    SpectralField f(8, 8);
    f.coeffs(1, 0, 0) = 0.5;
    f.coeffs(-1, 0, 0) = 0.5;
    const auto v = eval_field_grid(f);
    for (int j = -4; j < 4; ++j)
      for (int m = -4; m < 4; ++m)
        for (int l = -4; l < 4; ++l)
          CHECK(v[f.coeffs.index(j, m, l)] == doctest::Approx(std::cos(2 * std::numbers::pi * j / 8.0)).epsilon(1e-13));
  }
  SUBCASE("property: grid round trip and direct evaluation") {
    Gen g(6);
    for (int trial = 0; trial < 10; ++trial) {
      const int H = 2 * g.integer(2, 8);
      const auto f = testing::random_field(g, g.uniform(2, 10), H, H / 2 - 1);
      const auto v = eval_field_grid(f);
      const auto back = field_from_grid(v, f.box_len, H);
      CHECK(max_abs_diff(back.coeffs, f.coeffs) < 1e-10);
      const int j = g.integer(-H / 2, H / 2 - 1), m = g.integer(-H / 2, H / 2 - 1), l = g.integer(-H / 2, H / 2 - 1);
      const double h = f.box_len / H;
      CHECK(v[f.coeffs.index(j, m, l)] == doctest::Approx(direct_eval(f, Vec3{j * h, m * h, l * h})).epsilon(1e-11));
    }
  }
  SUBCASE("corrupted field") {
    SpectralField f(8, 8);
    f.coeffs(1, 2, 3) = cplx(1.0, 0.5);
    CHECK_THROWS_AS(eval_field_grid(f), CorruptedFieldError);
    SpectralField n(8, 8);
    n.coeffs(-4, 0, 0) = 1.0;
    CHECK_THROWS_AS(eval_field_grid(n), CorruptedFieldError);
  }
}

TEST_CASE("eval_field_shifted") {
  Gen g(7);
  SUBCASE("zero shift") {
    const auto f = testing::random_field(g, 8, 8, 3);
    CHECK(eval_field_shifted(f, Vec3{}) == eval_field_grid(f));
  }
  SUBCASE("constant field") {
    SpectralField f(8, 8);
    f.coeffs(0, 0, 0) = -1.25;
    for (double v : eval_field_shifted(f, g.vec(-3, 3))) CHECK(v == doctest::Approx(-1.25).epsilon(1e-14));
  }
  SUBCASE("property: cosine translation") {
    for (int trial = 0; trial < 20; ++trial) {
      SpectralField f(8, 12);
      f.coeffs(1, 0, 0) = 0.5;
      f.coeffs(-1, 0, 0) = 0.5;
      const Vec3 s = g.vec(-2, 2);
      const auto v = eval_field_shifted(f, s);
      const int j = g.integer(-6, 5), m = g.integer(-6, 5), l = g.integer(-6, 5);
      const double x = j * 8.0 / 12.0;
      CHECK(v[f.coeffs.index(j, m, l)] == doctest::Approx(std::cos(2 * std::numbers::pi * (x - s.x) / 8.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("field_max_abs and total_concentration") {
  SpectralField f(8, 8);
  f.coeffs(0, 0, 0) = -3.0;
  CHECK(field_max_abs(f) == doctest::Approx(3.0));
  CHECK(total_concentration(f) == doctest::Approx(-3.0 * 512));

  SpectralField cosf(8, 8);
  cosf.coeffs(1, 0, 0) = 0.5;
  cosf.coeffs(-1, 0, 0) = 0.5;
  CHECK(field_max_abs(cosf, 2) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(field_max_abs(cosf, 1) == doctest::Approx(1.0).epsilon(1e-13));

  Gen g(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto smooth = testing::random_field(g, 8, 16, 1);
    smooth.coeffs(0, 0, 0) = 3.0;
    const double a = field_max_abs(smooth, 1), b = field_max_abs(smooth, 2);
    CHECK(std::abs(a - b) < 0.05 * b);
  }

  // elliptic steady state of mass M: c0 = M / k^2
  const auto d = disc_of(8, 8);
  PhysParams p = testing::eg_params(37.0);
  p.epsilon = 0.0;
  const auto steady = field_step(SpectralField(8, 8), deposit_particles(g.cloud(30, 3.0), p.mass, d), p, d);
  CHECK(total_concentration(steady) == doctest::Approx(37.0 / 0.01).epsilon(1e-13));
}

TEST_CASE("snapshot round trip") {
  Gen g(9);
  const auto f = testing::random_field(g, 6.5, 8, 3);
  std::stringstream ss;
  write_field_snapshot(ss, f, 42, 0.125);
  const auto back = read_field_snapshot(ss);
  CHECK(back == f);
}
