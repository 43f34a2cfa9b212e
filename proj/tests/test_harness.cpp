#include <cmath>
#include <cstdio>
#include <filesystem>

#include "bdls/errors.hpp"
#include "bdls/harness.hpp"
#include "bdls/numerics.hpp"
#include "bdls/qssa.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bdls;
using bdls_tests::ts;

TEST_CASE("sign-change index exists for the weighted entropy estimate") {
  // r(1+delta) - 1 = -0.25 < 0: the expression turns nonpositive for good.
  const long i0 = lemma65_check(0.5, 0.5, 10000);
  CHECK(i0 <= 10000);
  CHECK(i0 >= 2);

  // Independent spot check at a few indices past I_0 and a grid of x.
  const double r = 0.5, d = 0.5, rd = r * d;
  for (long i : {i0, i0 + 7, 4 * i0}) {
    for (double x = 0.0; x <= 1.0; x += 0.01) {
      const double ir = std::pow(static_cast<double>(i), r);
      const double im1r = std::pow(static_cast<double>(i - 1), r);
      const double value =
          ir * (std::pow(i + 0.5 + x, rd) - std::pow(i - 0.5 + x, rd)) -
          d * (ir - im1r) * std::pow(i - 0.5 + x, rd);
      CHECK(value <= 0.0);
    }
  }

  CHECK_THROWS_AS(lemma65_check(0.5, 1.0, 1000), validation_error);  // delta too big
  CHECK_THROWS_AS(lemma65_check(1.2, 0.1, 1000), validation_error);
}

TEST_CASE("harder delta values keep the index within the scan") {
  // The trend of I_0 with delta is reported, not asserted.
  for (double frac : {0.25, 0.5, 0.9}) {
    const double r = 0.7;
    const long i0 = lemma65_check(r, frac * (1.0 / r - 1.0), 200000);
    INFO("delta fraction ", frac, " -> I0 = ", i0);
    CHECK(i0 <= 200000);
  }
}

TEST_CASE("boundary identification on a synthetic settled trajectory") {
  const auto fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.0, 0.5, 0.0);
  const auto regime = classify_regime(fam);
  REQUIRE(regime.kind == RegimeKind::Compensated);

  // Build a trajectory whose c_2 sits exactly on the closed form.
  BDTrajectory traj;
  traj.fam = fam;
  const double eps = 0.01;
  for (double t : linspace(0.0, 1.0, 21)) {
    BDState s;
    s.t = t;
    s.eps = eps;
    s.u = 1.0 + 0.1 * t;
    s.c = Eigen::ArrayXd::Zero(19);
    s.ci(2) = d2_limit(regime, fam, s.u);  // r_a = 0: d_2 = c_2
    traj.times.push_back(t);
    traj.states.push_back(s);
  }
  const auto ident = boundary_identification(traj, fam, regime, 0.0, 1.0);
  CHECK(ident.discrepancy < 1e-14);
  CHECK(ident.times.front() >= 0.1);  // transient skip

  CHECK_THROWS_AS(boundary_identification(traj, fam, regime, 0.98, 1.0),
                  validation_error);  // no samples survive the skip
}

TEST_CASE("entropy monitor on an inert trajectory is identically zero") {
  const auto fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.5, 0.5, 0.5);
  BDState s;
  s.eps = 0.1;
  s.u = 0.0;  // no free particles: nothing ever nucleates
  s.c = Eigen::ArrayXd::Zero(19);
  IntegratorConfig cfg;
  cfg.t_end = 0.5;
  const auto traj = integrate(fam, s, cfg, linspace(0.0, 0.5, 6));
  const auto series = entropy_monitor(traj, 0.5, fam.r_a);
  for (double v : series.values) CHECK(v == 0.0);

  const auto uneven = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.5, 1.0, 0.5);
  BDTrajectory wrong;
  wrong.fam = uneven;
  CHECK_THROWS_AS(entropy_monitor(wrong, 0.5, 0.5), validation_error);
  BDTrajectory bare;
  CHECK_THROWS_AS(entropy_monitor(bare, 0.5, 0.5), validation_error);
}

TEST_CASE("one-entry sweep at t = 0 reports the sampling error only") {
  SweepPlan plan;
  plan.fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.25, 0.5, 1.0, 1.5);
  plan.init = InitialData::bump(0.4, 1.0, 0.25, 1.0);
  plan.eps_list = {0.1};
  plan.t_samples = {0.0};
  plan.x_max = 3.0;
  plan.bd_cfg.t_end = 0.1;
  plan.ls_cells = 200;
  plan.u_trace_points = 5;
  const auto report = run_sweep(plan);
  REQUIRE(report.runs.size() == 1);
  REQUIRE(report.runs[0].ok);
  CHECK(report.runs[0].distances[0] == report.runs[0].initial_distance);
  CHECK(report.runs[0].distances[0] > 0.0);
}

TEST_CASE("compensated-regime sweep also converges") {
  SweepPlan plan;
  plan.fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.5, 0.5, 0.5);
  plan.init = InitialData::bump(0.4, 1.0, 0.25, 1.0);
  plan.eps_list = {0.1, 0.05};
  plan.t_samples = {0.5};
  plan.x_max = 3.0;
  plan.bd_cfg.t_end = 0.5;
  plan.bd_cfg.rtol = 1e-8;
  plan.ls_cells = 400;
  plan.u_trace_points = 11;
  const auto report = run_sweep(plan);
  REQUIRE(report.regime.kind == RegimeKind::Compensated);
  REQUIRE(report.runs.size() == 2);
  REQUIRE(report.runs[0].ok);
  REQUIRE(report.runs[1].ok);
  CHECK(report.runs[1].distances[0] < report.runs[0].distances[0]);
  CHECK(report.runs[1].sup_u_err < report.runs[0].sup_u_err);
}

TEST_CASE("sweep produces a full, deterministic report") {
  SweepPlan plan;
  plan.fam = RateFamily::power_law(1.0, 1.0, 1.0, 0.25, 0.5, 1.0, 1.5);
  plan.init = InitialData::bump(0.4, 1.0, 0.25, 1.0);
  plan.eps_list = {0.1, 0.05};
  plan.t_samples = {0.25, 0.5};
  plan.x_max = 3.0;
  plan.bd_cfg.t_end = 0.5;
  plan.bd_cfg.rtol = 1e-8;
  plan.ls_cells = 300;
  plan.u_trace_points = 21;
  plan.workers = 2;

  const auto report = run_sweep(plan);
  REQUIRE(report.runs.size() == 2);
  for (const auto& run : report.runs) {
    REQUIRE(run.ok);
    REQUIRE(run.distances.size() == 2);
    CHECK(run.sup_u_err >= 0.0);
    CHECK(run.laplace_sup.size() == plan.z_list.size());
  }
  // Finer eps sits closer to the reference.
  CHECK(report.runs[1].distances[0] < report.runs[0].distances[0]);
  CHECK(report.runs[1].distances[1] < report.runs[0].distances[1]);
  CHECK(report.runs[1].initial_distance < report.runs[0].initial_distance);
  CHECK(report.runs[1].sup_u_err < report.runs[0].sup_u_err);

  // Bit-identical repeat (fixed reduction orders, no clocks in outputs).
  const auto again = run_sweep(plan);
  for (std::size_t k = 0; k < report.runs.size(); ++k) {
    CHECK(report.runs[k].sup_u_err == again.runs[k].sup_u_err);
    CHECK(report.runs[k].distances == again.runs[k].distances);
    CHECK(report.runs[k].laplace_sup == again.runs[k].laplace_sup);
  }

  // Failure transparency: an impossible dt_min turns into a recorded row.
  SweepPlan doomed = plan;
  doomed.bd_cfg.dt_min = 0.2;
  doomed.bd_cfg.dt_init = 0.2;
  const auto failing = run_sweep(doomed);
  std::size_t recorded = 0;
  for (const auto& run : failing.runs) {
    if (!run.ok) {
      ++recorded;
      CHECK(run.failure == "stiffness");
    }
  }
  CHECK(failing.runs.size() == recorded + (failing.runs.size() - recorded));
  CHECK(recorded > 0);

  // Report files land on disk.
  const std::string dir = "harness_test_out";
  write_report(report, plan, dir, "[rates]\nalpha = 1\n");
  for (const char* name : {"report.csv", "boundary.csv", "laplace.csv",
                           "entropy.csv", "lemma65.csv", "meta"}) {
    CHECK(std::filesystem::exists(dir + std::string("/") + name));
  }
  std::filesystem::remove_all(dir);
}
