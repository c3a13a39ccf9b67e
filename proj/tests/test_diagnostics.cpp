#include <doctest.h>

#include <cmath>
#include <limits>

#include "sipf/diagnostics.hpp"
#include "support.hpp"

using namespace sipf;
using sipf::testing::Gen;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

RatioSeries ratios(std::vector<double> r) {
  RatioSeries s;
  for (std::size_t i = 0; i < r.size(); ++i) s.time.push_back(0.01 * double(i + 1));
  s.ratio = std::move(r);
  return s;
}

}  // namespace

TEST_CASE("c0 ground truth") {
  const PhysParams p = testing::eg_params(20.0);
  CHECK(c0_ground_truth(0.0, p, 3.0) == doctest::Approx(3.0));
  CHECK(c0_ground_truth(1.0, p, 0.0) == doctest::Approx(2000.0 * (1 - std::exp(-100.0))));
  CHECK(c0_ground_truth(1e-4, p, 0.0) == doctest::Approx(2000.0 * (1 - std::exp(-0.01))));
  CHECK(c0_ground_truth(0.3, p, 2000.0) == doctest::Approx(2000.0));
}

TEST_CASE("c0 error") {
  const PhysParams p = testing::eg_params(80.0);
  std::vector<double> t, exact, off;
  for (int i = 0; i <= 64; ++i) {
    t.push_back(i * 0.01 / 64);
    exact.push_back(c0_ground_truth(t.back(), p, 0.0));
    off.push_back(1.01 * exact.back());
  }
  CHECK(c0_error(t, exact, p, 0.0) == 0.0);
  // the 0/0 point at t = 0 drops half a trapezoid panel
  CHECK(c0_error(t, off, p, 0.0) == doctest::Approx(0.01 * std::sqrt(1 - 1.0 / 128)).epsilon(1e-10));
  off[0] = 1.0;
  CHECK_THROWS_AS(c0_error(t, off, p, 0.0), DiagnosticsError);

  SUBCASE("implicit Euler with trapezoid weights depends on k^2 T / eps only") {
    // Closed form of the scalar recursion c_n = A c_{n-1} + M dt/(eps + k^2 dt), A = 1/(1 + k^2 dt/eps).
    auto err = [&](const PhysParams& q, double T, int n) {
      const double dt = T / n, A = 1.0 / (1.0 + q.k * q.k * dt / q.epsilon), ss = q.mass / (q.k * q.k);
      std::vector<double> tt, cc;
      for (int i = 0; i <= n; ++i) {
        tt.push_back(i * dt);
        cc.push_back(ss * (1 - std::pow(A, i)));
      }
      return c0_error(tt, cc, q, 0.0);
    };
    PhysParams q = p;
    const double e1 = err(q, 0.01, 16);
    q.epsilon = 1e-3;
    q.mass = 3.0;
    CHECK(err(q, 0.1, 16) == doctest::Approx(e1).epsilon(1e-12));
    CHECK(e1 == doctest::Approx(0.02316).epsilon(1e-3));
    CHECK(err(p, 0.01, 128) == doctest::Approx(0.00305).epsilon(1e-2));
  }
}

TEST_CASE("final-time c0 error reproduces the published table") {
  // k^2 T / eps = 1; the table lists 0.01773, 0.00898, 0.00452, 0.00227, 0.00113 for dt = T/16 .. T/256
  const PhysParams p = testing::eg_params(80.0);
  const double T = 0.01;
  const std::vector<double> published{0.01773, 0.00898, 0.00452, 0.00227, 0.00113};
  for (std::size_t i = 0; i < published.size(); ++i) {
    const int n = 16 << i;
    const double dt = T / n, A = 1.0 / (1.0 + p.k * p.k * dt / p.epsilon);
    DiagnosticsSeries s;
    double c = 0.0;
    s.entries.push_back({0.0, 0, 0, 0});
    for (int j = 1; j <= n; ++j) {
      c = A * c + p.mass * dt / (p.epsilon + p.k * p.k * dt);
      s.entries.push_back({j * dt, 0, c, 0});
    }
    CHECK(c0_final_error(s, p, 0.0) == doctest::Approx(published[i]).epsilon(0.004));
    CHECK(c0_error(s, p, 0.0) > published[i]);
  }
  CHECK_THROWS_AS(c0_final_error(DiagnosticsSeries{}, p, 0.0), DiagnosticsError);
}

TEST_CASE("property: c0 error is stable under resampling of the time axis") {
  const PhysParams p = testing::eg_params(80.0);
  const double T = 0.01;
  auto num = [&](double t) { return c0_ground_truth(t, p, 0.0) * (1 + 0.03 * std::sin(300 * t) + 0.01); };
  Gen g(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> t1, c1, t2, c2;
    const int n1 = g.integer(400, 800), n2 = g.integer(400, 800);
    const double power = g.uniform(1.0, 2.0);
    for (int i = 0; i <= n1; ++i) {
      t1.push_back(T * i / n1);
      c1.push_back(num(t1.back()));
    }
    for (int i = 0; i <= n2; ++i) {
      t2.push_back(T * std::pow(double(i) / n2, power));
      c2.push_back(num(t2.back()));
    }
    CHECK(std::abs(c0_error(t1, c1, p, 0.0) - c0_error(t2, c2, p, 0.0)) <= 1e-3);
  }
}

TEST_CASE("property: field L2 distance obeys the triangle inequality") {
  Gen g(4);
  auto norm_of = [](const SpectralField& f) {
    double s = 0.0;
    const auto& c = f.coeffs;
    for (int j = c.min_index() + 1; j <= c.max_index(); ++j)
      for (int m = c.min_index() + 1; m <= c.max_index(); ++m)
        for (int l = c.min_index() + 1; l <= c.max_index(); ++l) s += std::norm(c(j, m, l));
    return std::sqrt(s);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testing::random_field(g, 8, 8, 3), b = testing::random_field(g, 8, 8, 3),
               c = testing::random_field(g, 8, 8, 3);
    const double ac = field_l2_error(a, c) * norm_of(c);
    const double ab = field_l2_error(a, b) * norm_of(b);
    const double bc = field_l2_error(b, c) * norm_of(c);
    CHECK(ac <= (ab + bc) * (1 + 1e-12));
  }
}

TEST_CASE("field L2 error") {
  Gen g(1);
  const auto b = testing::random_field(g, 8, 12, 4);
  CHECK(field_l2_error(b, b) == 0.0);
  SpectralField a = b;
  for (auto& v : a.coeffs.values()) v *= 1.1;
  CHECK(field_l2_error(a, b) == doctest::Approx(0.1).epsilon(1e-12));
  // a coarser field equal to b on its interior modes
  SpectralField coarse(8, 8);
  for (int j = -3; j <= 3; ++j)
    for (int m = -3; m <= 3; ++m)
      for (int l = -3; l <= 3; ++l) coarse.coeffs(j, m, l) = b.coeffs(j, m, l);
  CHECK(field_l2_error(coarse, b) == doctest::Approx(0.0).scale(1.0));
  CHECK(field_l2_error(b, coarse) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(field_l2_error(b, SpectralField(8, 12)), DiagnosticsError);
}

TEST_CASE("fits") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(2.5 * v - 1);
  const auto f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.5));
  CHECK(f.intercept == doctest::Approx(-1));
  CHECK(f.r2 == doctest::Approx(1.0));
  std::vector<double> pw;
  for (double v : x) pw.push_back(3 * std::pow(v, 1.5));
  CHECK(loglog_fit(x, pw).slope == doctest::Approx(1.5));

  Gen g(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs, ys;
    const int n = g.integer(3, 30);
    for (int i = 0; i < n; ++i) {
      xs.push_back(g.uniform(0, 10));
      ys.push_back(g.uniform(-10, 10));
    }
    const auto r = linear_fit(xs, ys);
    CHECK(r.r2 >= -1e-12);
    CHECK(r.r2 <= 1 + 1e-12);
  }
}

TEST_CASE("blow-up classification") {
  const BlowupRule rule{1.5, 3};
  CHECK_FALSE(classify_blowup(ratios({1.0, 1.1, 1.6, 1.7, 1.2, 1.6, 1.7}), rule).blowup);
  const auto v = classify_blowup(ratios({1.0, 1.1, 1.6, 1.7, 1.8, 1.9}), rule);
  CHECK(v.blowup);
  CHECK(v.onset == doctest::Approx(0.03));
  const auto i = classify_blowup(ratios({1.0, 1.1, inf, inf}), rule);
  CHECK(i.blowup);
  CHECK(i.onset == doctest::Approx(0.03));
  auto d = ratios({1.0, 1.0});
  d.diverged = true;
  d.diverged_time = 0.05;
  CHECK(classify_blowup(d, rule).blowup);
  CHECK(classify_blowup(d, rule).onset == 0.05);
  CHECK_FALSE(classify_blowup(ratios({}), rule).blowup);
}

TEST_CASE("delta-limit ratio and calibrated threshold") {
  const double r = delta_limit_ratio(12, 8, 8.0, 0.1);
  CHECK(r > 1.0);
  CHECK(calibrated_threshold(12, 8, 8.0, 0.1) == doctest::Approx(1 + 0.5 * (r - 1)));
  CHECK(calibrated_threshold(12, 8, 8.0, 0.1) == doctest::Approx(1.14359).epsilon(1e-5));
  CHECK(delta_limit_ratio(24, 12, 8.0, 0.1) > r);

  // direct sum oracle
  auto sum = [](int H) {
    const double w = 2 * std::acos(-1.0) / 8.0;
    double s = 0.0;
    for (int j = -H / 2 + 1; j < H / 2; ++j)
      for (int m = -H / 2 + 1; m < H / 2; ++m)
        for (int l = -H / 2 + 1; l < H / 2; ++l) s += 1.0 / (w * w * (j * j + m * m + l * l) + 0.01);
    return s;
  };
  CHECK(r == doctest::Approx(sum(12) / sum(8)).epsilon(1e-12));
}

TEST_CASE("c_inf scaling fits") {
  const auto f = fit_cinf_scaling({8, 12, 16, 20}, {10, 14, 18, 22});
  CHECK(f.linear.r2 == doctest::Approx(1.0));
  CHECK(f.log.r2 < f.linear.r2);
  CHECK_THROWS_AS(fit_cinf_scaling({8, 12}, {1, 2}), DiagnosticsError);
}

TEST_CASE("spectral envelope") {
  const PhysParams p = testing::eg_params(80.0);
  CHECK(spectral_envelope(1.0, 0, 3.0, p, 1e-4) == doctest::Approx(3.0));
  CHECK(spectral_envelope(1.0, 100000, 3.0, p, 1e-4) == doctest::Approx(80.0 / 1.01));
  // one step from rest: A^1 forcing bound M/(|w|^2 + beta^2)
  const double beta2 = 0.01 + 1.0;
  CHECK(spectral_envelope(2.0, 1, 0.0, p, 1e-4) == doctest::Approx(80.0 / (2.0 + beta2)));
}

TEST_CASE("variance fit") {
  std::vector<double> t, v;
  for (int i = 0; i < 20; ++i) {
    t.push_back(0.01 * i);
    v.push_back(0.6 + 6.0 * t.back());
  }
  CHECK(variance_fit(t, v).slope == doctest::Approx(6.0));
  CHECK_THROWS_AS(variance_fit(std::span(t).first(5), std::span(v).first(5)), DiagnosticsError);
  DiagnosticsSeries s;
  for (int i = 0; i < 20; ++i) s.entries.push_back({t[i], 0, 0, v[i]});
  CHECK(variance_fit(s).slope == doctest::Approx(6.0));
  s.status = RunStatus::Diverged;
  CHECK_THROWS_AS(variance_fit(s), DiagnosticsError);
}
