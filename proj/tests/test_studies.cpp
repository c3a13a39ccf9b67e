#include <doctest.h>

#include <cmath>

#include "sipf/diagnostics.hpp"
#include "sipf/driver.hpp"
#include "sipf/rng.hpp"
#include "sipf/studies.hpp"
#include "support.hpp"

using namespace sipf;
using sipf::testing::Gen;

namespace {

Config tiny(double mass = 40.0, int H = 8, std::size_t P = 80, double dt = 1e-3, double T = 0.02) {
  Config cfg;
  cfg.phys = testing::eg_params(mass);
  cfg.disc.modes = H;
  cfg.disc.particles = P;
  cfg.disc.dt = dt;
  cfg.disc.horizon = T;
  cfg.run.threads = 1;
  cfg.run.snapshot_every = 0;
  return cfg;
}

BlowupPredicate step_at(double critical) {
  return [critical](double m) { return MassVerdict{m, m > critical, m > critical ? 0.05 : -1.0, ""}; };
}

}  // namespace

TEST_CASE("ratio of identical resolutions is exactly one") {
  const auto r = ratio_diagnostic(tiny(), 8, 8);
  REQUIRE(r.ratio.ratio.size() == 20);
  CHECK(r.ratio.time.front() == doctest::Approx(1e-3));
  for (double v : r.ratio.ratio) CHECK(v == 1.0);
  CHECK_FALSE(classify_blowup(r.ratio).blowup);
  const auto two = ratio_diagnostic(tiny(), 8, 8, 2);
  CHECK(two.ratio.ratio == r.ratio.ratio);
}

TEST_CASE("ratio series of a finer run") {
  const auto r = ratio_diagnostic(tiny(), 12, 8);
  for (std::size_t i = 0; i < r.ratio.ratio.size(); ++i)
    CHECK(r.ratio.ratio[i] == doctest::Approx(r.hi.entries[i + 1].c_inf / r.lo.entries[i + 1].c_inf));
}

TEST_CASE("mass scans on a synthetic predicate") {
  MassScanOptions grid;
  grid.lo = 46.0;
  grid.hi = 50.0;
  grid.step = 0.2;
  const auto g = critical_mass_scan(step_at(47.7), grid);
  CHECK(g.lower.mass == doctest::Approx(47.6));
  CHECK(g.upper.mass == doctest::Approx(47.8));
  CHECK(g.evaluated.size() == 21);
  grid.jobs = 3;
  const auto g3 = critical_mass_scan(step_at(47.7), grid);
  CHECK(g3.lower.mass == g.lower.mass);
  CHECK(g3.upper.mass == g.upper.mass);

  MassScanOptions bis;
  bis.mode = ScanMode::Bisection;
  bis.lo = 20.0;
  bis.hi = 80.0;
  bis.width = 0.2;
  Gen gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const double crit = gen.uniform(20.5, 79.5);
    const auto b = critical_mass_scan(step_at(crit), bis);
    CHECK(b.lower.mass <= crit);
    CHECK(b.upper.mass > crit);
    CHECK(b.width() <= 0.2 * (1 + 1e-12));
    CHECK_FALSE(b.lower.blowup);
    CHECK(b.upper.blowup);
  }
  CHECK_THROWS_AS(critical_mass_scan(step_at(10.0), grid), NoBracketError);
  CHECK_THROWS_AS(critical_mass_scan(step_at(90.0), grid), NoBracketError);
  CHECK_THROWS_AS(critical_mass_scan(step_at(10.0), bis), NoBracketError);
}

TEST_CASE("grid scan endpoints reproduce their verdicts") {
  const auto pred = fdm_predicate(testing::eg_params(), 1.0, RadialGrid{20.0, 400}, 1e-3, 0.5);
  MassScanOptions o;
  o.lo = 20.0;
  o.hi = 200.0;
  o.step = 30.0;
  const auto b = critical_mass_scan(pred, o);
  for (const auto& end : {b.lower, b.upper}) {
    const auto again = pred(end.mass);
    CHECK(again.blowup == end.blowup);
    CHECK(again.onset == end.onset);
  }
  const auto sipf = sipf_predicate(tiny(), 12, 8, BlowupRule{});
  const auto a = sipf(30.0), c = sipf(30.0);
  CHECK(a.blowup == c.blowup);
  CHECK(a.evidence == c.evidence);
}

TEST_CASE("convergence study bookkeeping") {
  const Config base = tiny(40.0, 8, 60, 1e-3, 0.004);
  const auto r = convergence_study(ConvergenceAxis::Dt, {1e-3, 5e-4}, 2.5e-4, base);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(row.l2_error > 0.0);
    CHECK(row.c0_error > 0.0);
  }
  CHECK(r.rows[1].c0_error < r.rows[0].c0_error);
  CHECK(r.reference_c0_error < r.rows[1].c0_error);
  CHECK_THROWS(convergence_study(ConvergenceAxis::Dt, {1e-3, 4e-4}, 3e-4, base));
  CHECK(parse_axis("p") == ConvergenceAxis::Particles);
  CHECK(axis_name(parse_axis("h")) == "H");
  CHECK_THROWS(parse_axis("x"));
}

TEST_CASE("c_inf scan") {
  const auto f = cinf_vs_H_scan(tiny(60.0), {6, 8, 10});
  CHECK(f.modes == std::vector<int>{6, 8, 10});
  for (double v : f.sup_cinf) CHECK(v > 0.0);
}

TEST_CASE("variance of free Brownian motion grows like 6 mu t") {
  const std::size_t P = 20000;
  std::vector<Vec3> x(P);
  std::vector<double> t, var;
  const double dt = 0.01;
  for (long n = 0; n <= 20; ++n) {
    t.push_back(double(n) * dt);
    var.push_back(position_variance(ParticleEnsemble{x}));
    const auto inc = brownian_increments(5, n, 1, 1.0, dt, P);
    for (std::size_t p = 0; p < P; ++p) x[p] += inc[p];
  }
  CHECK(variance_fit(t, var).slope == doctest::Approx(6.0).epsilon(0.05));
  const std::vector<double> frozen(21, position_variance(ParticleEnsemble{x}));
  CHECK(variance_fit(t, frozen).slope == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("variance study runs end to end") {
  Config cfg = tiny(20.0, 8, 200, 1e-3, 0.02);
  const auto v = variance_study(cfg);
  CHECK(v.series.entries.size() == 21);
  CHECK(v.fit.slope > 0.0);
}
