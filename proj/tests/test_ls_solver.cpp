#include <cmath>
#include <random>

#include "bdls/errors.hpp"
#include "bdls/initial_data.hpp"
#include "bdls/ls_solver.hpp"
#include "bdls/numerics.hpp"
#include "bdls/qssa.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bdls;
using bdls_tests::ts;

namespace {

LSState make_ls(double x_max, long cells, double u) {
  LSState s;
  s.x_max = x_max;
  s.dx = x_max / static_cast<double>(cells);
  s.u = u;
  s.f = Eigen::ArrayXd::Zero(cells);
  s.m = u;
  return s;
}

}  // namespace

TEST_CASE("upwind fluxes") {
  // Flat aggregation, no fragmentation tail: v = u everywhere.
  const auto fam = RateFamily::power_law(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0);
  const auto regime = classify_regime(fam);
  LSState s = make_ls(1.0, 4, 2.0);
  s.f << 1.0, 2.0, 3.0, 4.0;
  s.m = s.u + s.cluster_mass();
  // interior: v > 0 upwinds from the left cell
  CHECK(ls_rhs_flux(fam, regime, s, 2) == doctest::Approx(2.0 * 2.0).epsilon(1e-15));
  // boundary inflow = alpha u^2 while u > rho
  CHECK(ls_rhs_flux(fam, regime, s, 0) == doctest::Approx(4.0).epsilon(1e-15));
  // outlet: free outflow
  CHECK(ls_rhs_flux(fam, regime, s, 4) == doctest::Approx(2.0 * 4.0).epsilon(1e-15));

  const auto fast = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.5, 1.0, 0.0);
  const auto fast_regime = classify_regime(fast);
  REQUIRE(fast_regime.kind == RegimeKind::Fast);
  LSState sf = make_ls(1.0, 4, 1.0);
  CHECK(ls_rhs_flux(fast, fast_regime, sf, 0) == 0.0);
}

TEST_CASE("nucleation inflow fills the first cell") {
  const auto fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.5, 1.0, 1.0);
  const auto regime = classify_regime(fam);
  LSConfig cfg;
  cfg.x_max = 1.0;
  cfg.cells = 10;
  cfg.cfl = 0.5;
  cfg.t_end = 1.0;
  LSState s = make_ls(cfg.x_max, cfg.cells, 1.0);
  const LSState next = ls_step(fam, regime, s, cfg);
  const double dt = next.t;
  const double n_of_u = nucleation_rate(regime, fam, 1.0);
  CHECK(next.f[0] == doctest::Approx(dt * n_of_u / s.dx).epsilon(1e-13));
  for (long j = 1; j < cfg.cells; ++j) CHECK(next.f[j] == 0.0);
}

TEST_CASE("stalled state at u = rho exits the regime") {
  // Equal exponents 0: v(x) = a_bar u - b_bar vanishes identically at u = rho.
  const auto fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.0, 0.0, 0.0);
  const auto regime = classify_regime(fam);
  LSConfig cfg;
  cfg.x_max = 1.0;
  cfg.cells = 8;
  cfg.t_end = 1.0;
  cfg.dt_cap = 0.01;
  LSState s = make_ls(cfg.x_max, cfg.cells, regime.rho);
  s.m = s.u;  // empty distribution
  CHECK_THROWS_AS(ls_step(fam, regime, s, cfg), regime_exit);
}

TEST_CASE("mass constraint holds to roundoff after every step") {
  const auto fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.25, 0.5, 1.0, 0.5);
  const auto regime = classify_regime(fam);
  const InitialData init = InitialData::bump(0.4, 1.0, 0.2, 1.0);
  LSConfig cfg;
  cfg.x_max = 3.0;
  cfg.cells = 200;
  cfg.t_end = 0.5;
  LSState s = sample_ls(init, cfg.x_max, cfg.cells);
  for (int k = 0; k < 50; ++k) {
    s = ls_step(fam, regime, s, cfg);
    CHECK(std::abs(s.u + s.cluster_mass() - s.m) < 1e-12 * s.m);
  }
}

TEST_CASE("upwind with CFL <= 1 preserves positivity") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> upos(0.1, 2.0);
  std::uniform_real_distribution<double> ur(0.0, 0.9);
  for (int trial = 0; trial < 60; ++trial) {
    const double r_a = ur(rng);
    const auto fam = RateFamily::power_law(upos(rng), upos(rng), upos(rng),
                                           upos(rng), r_a, r_a + ur(rng),
                                           ur(rng));
    const auto regime = classify_regime(fam);
    LSConfig cfg;
    cfg.x_max = 2.0;
    cfg.cells = 30;
    cfg.cfl = 1.0;
    cfg.t_end = 1.0;
    cfg.freeze_u = true;  // isolates the scheme from the projection
    LSState s = make_ls(cfg.x_max, cfg.cells, regime.rho + upos(rng));
    for (long j = 0; j < cfg.cells; ++j) s.f[j] = upos(rng) - 0.1;
    s.f = s.f.max(0.0);
    s.m = s.u + s.cluster_mass();
    for (int k = 0; k < 10; ++k) {
      s = ls_step(fam, regime, s, cfg);
      CHECK((s.f >= 0.0).all());
    }
  }
}

TEST_CASE("frozen-u translation matches the characteristics solution") {
  // a(x) = 1, b = 0: the profile translates at speed u exactly.
  const auto fam = RateFamily::power_law(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0);
  const auto regime = classify_regime(fam);
  const InitialData init = InitialData::bump(1.0, 0.8, 0.15, 0.5);
  const double t_end = 0.5;

  auto l1_error = [&](long cells) {
    LSConfig cfg;
    cfg.x_max = 3.0;
    cfg.cells = cells;
    cfg.cfl = 0.9;
    cfg.t_end = t_end;
    cfg.freeze_u = true;
    cfg.zero_inflow = true;
    LSState s = sample_ls(init, cfg.x_max, cells);
    const auto traj = ls_solve(fam, regime, s, cfg, ts({t_end}));
    const LSState& end = traj.samples.back();
    double err = 0;
    for (long j = 0; j < cells; ++j) {
      const double exact = init.eval(end.cell_center(j) - 0.5 * t_end);
      err += std::abs(end.f[j] - exact) * end.dx;
    }
    return err;
  };

  const double e1 = l1_error(100);
  const double e2 = l1_error(200);
  const double order = std::log2(e1 / e2);
  CHECK(order > 0.7);
  CHECK(order < 1.3);
}

TEST_CASE("variable-speed transport matches the characteristics oracle") {
  // a(x) = sqrt(x), b = 0, frozen u: characteristics satisfy
  // sqrt(X(t)) = sqrt(x0) + u t / 2, and conservative transport gives
  // f(t, x) = f0(x0) sqrt(x0/x).
  const auto fam = RateFamily::power_law(1.0, 0.0, 1.0, 0.0, 0.5, 0.5, 0.0);
  const auto regime = classify_regime(fam);
  const InitialData init = InitialData::bump(1.0, 0.9, 0.12, 0.6);
  const double u = 0.6;
  const double t_end = 0.8;

  auto exact = [&](double x) {
    const double root = std::sqrt(x) - 0.5 * u * t_end;
    if (root <= 0.0) return 0.0;
    const double x0 = root * root;
    return init.eval(x0) * root / std::sqrt(x);
  };
  auto l1_error = [&](long cells) {
    LSConfig cfg;
    cfg.x_max = 4.0;
    cfg.cells = cells;
    cfg.cfl = 0.9;
    cfg.t_end = t_end;
    cfg.freeze_u = true;
    cfg.zero_inflow = true;
    const auto traj =
        ls_solve(fam, regime, sample_ls(init, cfg.x_max, cells), cfg, ts({t_end}));
    const LSState& end = traj.samples.back();
    double err = 0;
    for (long j = 0; j < cells; ++j) {
      err += std::abs(end.f[j] - exact(end.cell_center(j))) * end.dx;
    }
    return err;
  };
  const double e1 = l1_error(200);
  const double e2 = l1_error(400);
  CHECK(e1 < 0.05);
  const double order = std::log2(e1 / e2);
  CHECK(order > 0.7);
  CHECK(order < 1.3);
}

TEST_CASE("pure transport is linear in the profile when u is frozen") {
  const auto fam = RateFamily::power_law(1.0, 0.0, 1.0, 0.0, 0.5, 0.5, 0.0);
  const auto regime = classify_regime(fam);
  LSConfig cfg;
  cfg.x_max = 2.0;
  cfg.cells = 64;
  cfg.t_end = 0.4;
  cfg.freeze_u = true;
  cfg.zero_inflow = true;

  const InitialData init = InitialData::bump(0.7, 0.6, 0.1, 0.9);
  LSState s1 = sample_ls(init, cfg.x_max, cfg.cells);
  LSState s2 = s1;
  const double lambda = 3.5;
  s2.f *= lambda;
  s2.m = s2.u + s2.cluster_mass();

  const auto t1 = ls_solve(fam, regime, s1, cfg, ts({0.4}));
  const auto t2 = ls_solve(fam, regime, s2, cfg, ts({0.4}));
  for (long j = 0; j < cfg.cells; ++j) {
    CHECK(std::abs(t2.samples.back().f[j] - lambda * t1.samples.back().f[j]) <=
          1e-13 * (1.0 + std::abs(t1.samples.back().f[j])));
  }
}

TEST_CASE("empty initial profile: inflow integrates the nucleation rate") {
  const auto fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.5, 1.5, 1.0);
  const auto regime = classify_regime(fam);
  REQUIRE(regime.kind == RegimeKind::Slow);
  LSConfig cfg;
  cfg.x_max = 2.0;
  cfg.cells = 400;
  cfg.t_end = 0.5;
  cfg.record_dense = true;
  LSState s = make_ls(cfg.x_max, cfg.cells, 1.0);
  const auto traj = ls_solve(fam, regime, s, cfg, ts({0.5}));

  // Total cluster number at t equals the time integral of alpha u(s)^2.
  KahanAccumulator quad;
  for (std::size_t k = 1; k < traj.dense.size(); ++k) {
    const double dt = traj.dense[k].t - traj.dense[k - 1].t;
    const double n0 = fam.alpha * traj.dense[k - 1].u * traj.dense[k - 1].u;
    const double n1 = fam.alpha * traj.dense[k].u * traj.dense[k].u;
    quad.add(0.5 * dt * (n0 + n1));
  }
  const double number = traj.samples.back().f.sum() * traj.samples.back().dx;
  CHECK(number == doctest::Approx(quad.value()).epsilon(0.02));
  CHECK(number > 0.0);
}

TEST_CASE("fast regime with empty profile stays empty") {
  const auto fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.5, 1.0, 0.0);
  const auto regime = classify_regime(fam);
  REQUIRE(regime.kind == RegimeKind::Fast);
  LSConfig cfg;
  cfg.x_max = 1.0;
  cfg.cells = 50;
  cfg.t_end = 0.3;
  LSState s = make_ls(cfg.x_max, cfg.cells, 1.0);
  const auto traj = ls_solve(fam, regime, s, cfg, ts({0.0, 0.3}));
  CHECK((traj.samples.back().f == 0.0).all());
  CHECK(traj.samples.back().u == 1.0);
}

TEST_CASE("solve validation and trivial horizon") {
  const auto fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.0, 0.0, 0.0);
  const auto regime = classify_regime(fam);  // rho = 0.5
  LSConfig cfg;
  cfg.x_max = 1.0;
  cfg.cells = 10;
  cfg.t_end = 1.0;

  LSState below = make_ls(cfg.x_max, cfg.cells, 0.3);
  CHECK_THROWS_AS(ls_solve(fam, regime, below, cfg, ts({1.0})), validation_error);

  LSState s = make_ls(cfg.x_max, cfg.cells, 1.0);
  LSConfig zero = cfg;
  zero.t_end = 0.0;
  const auto traj = ls_solve(fam, regime, s, zero, ts({0.0}));
  REQUIRE(traj.samples.size() == 1);
  CHECK(traj.samples[0].u == 1.0);
}

TEST_CASE("regime exit truncates the trajectory and reports the time") {
  // Slow de-nucleation with rho > 0: the inflow alpha u^2 keeps consuming
  // monomers even as u approaches rho, so u crosses in finite time.
  const auto fam = RateFamily::power_law(2.0, 1.0, 1.0, 0.5, 0.0, 0.0, 1.0);
  const auto regime = classify_regime(fam);  // rho = 0.5
  REQUIRE(regime.kind == RegimeKind::Slow);
  LSConfig cfg;
  cfg.x_max = 2.0;
  cfg.cells = 50;
  cfg.t_end = 6.0;
  LSState s = make_ls(cfg.x_max, cfg.cells, regime.rho + 0.02);
  const auto traj = ls_solve(fam, regime, s, cfg, linspace(0.0, 6.0, 13));
  REQUIRE(traj.exit_time.has_value());
  CHECK(*traj.exit_time > 0.0);
  CHECK(*traj.exit_time < 6.0);
  CHECK(traj.times.back() < 6.0);
}

TEST_CASE("translation-test residual is small on a 400-cell grid") {
  const auto fam = RateFamily::power_law(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0);
  const auto regime = classify_regime(fam);
  const InitialData init = InitialData::bump(1.0, 0.8, 0.15, 0.5);
  LSConfig cfg;
  cfg.x_max = 3.0;
  cfg.cells = 400;
  cfg.cfl = 0.9;
  cfg.t_end = 0.5;
  cfg.freeze_u = true;
  cfg.zero_inflow = true;
  cfg.record_dense = true;
  const auto traj =
      ls_solve(fam, regime, sample_ls(init, cfg.x_max, cfg.cells), cfg, ts({0.5}));
  const double pi = 3.14159265358979323846;
  auto ct = [=](double t) { return std::cos(pi * t); };        // T = 0.5
  auto cx = [=](double x) { return std::cos(pi * x / 6.0); };  // X = 3
  SpaceTimeTestFunction phi{
      [=](double t, double x) { return ct(t) * ct(t) * cx(x) * cx(x); },
      [=](double t, double x) {
        return -2.0 * pi * ct(t) * std::sin(pi * t) * cx(x) * cx(x);
      },
      [=](double t, double x) {
        return -ct(t) * ct(t) * pi / 3.0 * cx(x) * std::sin(pi * x / 6.0);
      }};
  const double residual =
      std::abs(weak_form_residual(fam, regime, traj, phi, true));
  CHECK(residual < 1e-3);
  CHECK(residual > 0.0);
}

TEST_CASE("weak-form residual is zero for the zero test function") {
  const auto fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.5, 1.0, 1.0);
  const auto regime = classify_regime(fam);
  LSConfig cfg;
  cfg.x_max = 1.0;
  cfg.cells = 20;
  cfg.t_end = 0.1;
  cfg.record_dense = true;
  LSState s = make_ls(cfg.x_max, cfg.cells, 1.0);
  const auto traj = ls_solve(fam, regime, s, cfg, ts({0.1}));
  SpaceTimeTestFunction zero{[](double, double) { return 0.0; },
                             [](double, double) { return 0.0; },
                             [](double, double) { return 0.0; }};
  CHECK(weak_form_residual(fam, regime, traj, zero) == 0.0);
}
