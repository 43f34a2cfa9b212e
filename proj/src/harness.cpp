#include "bdls/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "bdls/csv.hpp"
#include "bdls/errors.hpp"
#include "bdls/numerics.hpp"
#include "bdls/qssa.hpp"

namespace bdls {

namespace {

std::vector<double> merged_sample_times(const SweepPlan& plan) {
  std::vector<double> times = linspace(0.0, plan.bd_cfg.t_end,
                                       std::max<long>(plan.u_trace_points, 2));
  times.insert(times.end(), plan.t_samples.begin(), plan.t_samples.end());
  times.push_back(0.0);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-13; }),
              times.end());
  return times;
}

void validate_plan(const SweepPlan& plan) {
  plan.fam.check();
  if (plan.eps_list.empty()) throw validation_error("sweep: eps_list is empty");
  for (std::size_t k = 0; k < plan.eps_list.size(); ++k) {
    if (!(plan.eps_list[k] > 0)) {
      throw validation_error("sweep: eps_list entries must be positive");
    }
    if (k > 0 && !(plan.eps_list[k] < plan.eps_list[k - 1])) {
      throw validation_error("sweep: eps_list must be strictly decreasing");
    }
  }
  if (!(plan.x_max > 0)) throw validation_error("sweep: x_max must be positive");
  for (double t : plan.t_samples) {
    if (t < 0 || t > plan.bd_cfg.t_end) {
      throw validation_error("sweep: t_samples must lie in [0, t_end]");
    }
  }
  validate(plan.bd_cfg);
}

SweepRun execute_run(const SweepPlan& plan, const LSTrajectory& reference,
                     const std::vector<double>& sample_times,
                     const TestFunctionFamily& metric, double eps) {
  SweepRun run;
  run.eps = eps;
  run.failure_t = std::numeric_limits<double>::quiet_NaN();

  BDState state0 = sample_bd(plan.init, eps, default_i_max(plan.x_max, eps));
  BDTrajectory traj;
  try {
    traj = integrate(plan.fam, state0, plan.bd_cfg, sample_times, plan.watch);
    run.ok = true;
  } catch (const stiffness_error& e) {
    run.ok = false;
    run.failure = "stiffness";
    run.failure_t = e.t;
    return run;
  } catch (const regime_exit& e) {
    run.ok = false;
    run.failure = "regime-exit";
    run.failure_t = e.t;
    return run;
  }

  run.initial_distance = weak_star_distance(
      density_of(traj.states.front()).grid(), reference.samples.front().grid(),
      metric);
  for (double t : plan.t_samples) {
    run.distances.push_back(weak_star_distance(density_of(traj.at_time(t)).grid(),
                                               reference.at_time(t).grid(),
                                               metric));
  }
  double sup_u = 0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    sup_u = std::max(sup_u, std::abs(traj.states[k].u -
                                     reference.at_time(traj.times[k]).u));
  }
  run.sup_u_err = sup_u;
  for (double z : plan.z_list) {
    double sup_f = 0;
    for (const auto& s : traj.states) {
      sup_f = std::max(sup_f, laplace(s, z, plan.fam.r_a));
    }
    run.laplace_sup.push_back(sup_f);
    run.laplace_initial.push_back(laplace(traj.states.front(), z, plan.fam.r_a));
  }
  run.trajectory = std::move(traj);
  return run;
}

}  // namespace

ConvergenceReport run_sweep(const SweepPlan& plan) {
  validate_plan(plan);
  const NucleationRegime regime = classify_regime(plan.fam);
  const std::vector<double> sample_times = merged_sample_times(plan);
  const TestFunctionFamily metric = TestFunctionFamily::default_family(plan.x_max);

  ConvergenceReport report;
  report.regime = regime;
  report.u_trace_times = sample_times;

  // One fine reference for the whole sweep so the discretization error of
  // the transport side stays fixed while eps varies.
  const double finest = plan.eps_list.back();
  const long cells =
      plan.ls_cells > 0
          ? plan.ls_cells
          : 4 * static_cast<long>(std::ceil(plan.x_max / finest));
  LSConfig ls_cfg;
  ls_cfg.x_max = plan.x_max;
  ls_cfg.cells = cells;
  ls_cfg.cfl = plan.ls_cfl;
  ls_cfg.t_end = plan.bd_cfg.t_end;
  LSState ls_init = sample_ls(plan.init, plan.x_max, cells);
  report.reference = ls_solve(plan.fam, regime, ls_init, ls_cfg, sample_times);
  if (report.reference.exit_time) {
    throw regime_exit("sweep: the reference transport run left the u > rho regime",
                      *report.reference.exit_time);
  }

  report.runs.resize(plan.eps_list.size());
  const long hw = static_cast<long>(std::thread::hardware_concurrency());
  const long workers =
      std::max<long>(1, std::min<long>(plan.workers > 0 ? plan.workers : hw,
                                       static_cast<long>(plan.eps_list.size())));
  std::atomic<std::size_t> cursor{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= plan.eps_list.size()) return;
      report.runs[k] = execute_run(plan, report.reference, sample_times,
                                   metric, plan.eps_list[k]);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (long w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return report;
}

BoundaryIdentification boundary_identification(const BDTrajectory& traj,
                                               const RateFamily& fam,
                                               const NucleationRegime& regime,
                                               double window_t0, double window_t1,
                                               double skip_fraction) {
  if (!(window_t1 > window_t0)) {
    throw validation_error("boundary: window must have positive length");
  }
  if (!(skip_fraction >= 0 && skip_fraction < 1)) {
    throw validation_error("boundary: skip fraction must lie in [0,1)");
  }
  const double t_start = window_t0 + skip_fraction * (window_t1 - window_t0);

  BoundaryIdentification out;
  out.kind = regime.kind;
  out.window_t0 = t_start;
  out.window_t1 = window_t1;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    if (t < t_start || t > window_t1) continue;
    const BDState& s = traj.states[k];
    out.times.push_back(t);
    if (regime.kind == RegimeKind::Fast) {
      out.observed.push_back(fam.beta * std::pow(s.eps, fam.eta) * s.ci(2));
      out.predicted.push_back(fam.alpha * s.u * s.u);
    } else {
      out.observed.push_back(rescaled_small_cluster(s, 2, fam.r_a));
      out.predicted.push_back(d2_limit(regime, fam, s.u));
    }
  }
  if (out.times.size() < 2) {
    throw validation_error(
        "boundary: window leaves fewer than two samples after the transient skip");
  }

  if (regime.kind == RegimeKind::Fast) {
    // Averaged identification: trapezoid means over the window.
    KahanAccumulator num, den;
    for (std::size_t k = 1; k < out.times.size(); ++k) {
      const double dt = out.times[k] - out.times[k - 1];
      num.add(0.5 * dt * (out.observed[k] + out.observed[k - 1]));
      den.add(0.5 * dt * (out.predicted[k] + out.predicted[k - 1]));
    }
    out.discrepancy = std::abs(num.value() - den.value()) / den.value();
  } else {
    std::vector<double> rel;
    rel.reserve(out.times.size());
    for (std::size_t k = 0; k < out.times.size(); ++k) {
      rel.push_back(std::abs(out.observed[k] - out.predicted[k]) /
                    out.predicted[k]);
    }
    out.discrepancy = median(rel);
  }
  return out;
}

long lemma65_check(double r, double delta, long i_scan_max) {
  if (!(r > 0 && r < 1)) throw validation_error("lemma: r must lie in (0,1)");
  if (!(delta > 0 && delta < 1.0 / r - 1.0)) {
    throw validation_error("lemma: delta must lie in (0, 1/r - 1)");
  }
  if (i_scan_max < 2) throw validation_error("lemma: i_scan_max must be >= 2");

  const double rd = r * delta;
  long last_violation = 1;
  for (long i = 2; i <= i_scan_max; ++i) {
    const double ir = std::pow(static_cast<double>(i), r);
    const double im1r = std::pow(static_cast<double>(i - 1), r);
    bool violated = false;
    for (int g = 0; g <= 100; ++g) {
      const double x = static_cast<double>(g) / 100.0;
      const double lo = static_cast<double>(i) - 0.5 + x;
      const double hi = static_cast<double>(i) + 0.5 + x;
      const double lo_rd = std::pow(lo, rd);
      const double value = ir * (std::pow(hi, rd) - lo_rd) -
                           delta * (ir - im1r) * lo_rd;
      if (value > 0) {
        violated = true;
        break;
      }
    }
    if (violated) last_violation = i;
  }
  if (last_violation >= i_scan_max) {
    throw validation_error(
        "lemma: no index found below i_scan_max with a nonpositive tail; "
        "this contradicts the expected sign and signals a bug");
  }
  return std::max<long>(2, last_violation + 1);
}

EntropySeries entropy_monitor(const BDTrajectory& traj, double delta, double r_a) {
  if (!traj.fam) throw validation_error("entropy: trajectory carries no rates");
  if (traj.fam->r_a != traj.fam->r_b) {
    throw validation_error(
        "entropy: the boundedness monitor applies to r_a == r_b rates only");
  }
  EntropySeries series;
  series.times = traj.times;
  for (const auto& s : traj.states) {
    series.values.push_back(entropy_functional(density_of(s), delta, r_a));
  }
  double peak = 0;
  for (double v : series.values) peak = std::max(peak, v);
  series.growth_constant = peak / (series.values.front() + 1.0);
  return series;
}

double default_entropy_delta(double r_a) {
  if (r_a <= 0) return 0.5;
  return std::min(0.5, 0.5 * (1.0 / r_a - 1.0));
}

void write_bd_trajectory_csv(const std::string& path, const BDTrajectory& traj) {
  CsvWriter csv(path);
  std::vector<std::string> names = {"t", "u", "mass", "tail", "eps_eta_c2"};
  for (long i : traj.watch) names.push_back("eps_ra_c" + std::to_string(i));
  csv.header(names);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<double> row = {traj.times[k], traj.states[k].u,
                               traj.mass_series[k], traj.tail_series[k],
                               traj.eps_eta_c2[k]};
    for (const auto& w : traj.watch_series) row.push_back(w[k]);
    csv.row(row);
  }
}

void write_bd_snapshot_csv(const std::string& path, const BDState& state) {
  CsvWriter csv(path);
  csv.header({"i", "c_i"});
  for (long i = 2; i <= state.i_max(); ++i) {
    csv.row({static_cast<double>(i), state.ci(i)});
  }
}

void write_bd_monitor_csv(const std::string& path, const BDTrajectory& traj,
                          const std::vector<double>& z_list, double delta) {
  if (!traj.fam) throw validation_error("monitor: trajectory carries no rates");
  const RateFamily& fam = *traj.fam;
  CsvWriter csv(path);
  csv.header({"t", "z", "F_eps", "moment_1", "moment_x", "moment_phi", "entropy"});
  const MomentFunction one =
      MomentFunction::custom([](double) { return 1.0; }, "1");
  const MomentFunction ident =
      MomentFunction::custom([](double x) { return x; }, "x");
  const MomentFunction phi = MomentFunction::default_phi();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const BDState& s = traj.states[k];
    const SteppedDensity dens = density_of(s);
    const double m1 = moment(dens, one);
    const double mx = moment(dens, ident);
    const double mphi = moment(dens, phi);
    const double ent = entropy_functional(dens, delta, fam.r_a);
    for (double z : z_list) {
      csv.row({traj.times[k], z, laplace(s, z, fam.r_a), m1, mx, mphi, ent});
    }
  }
}

void write_ls_trace_csv(const std::string& path, const RateFamily& fam,
                        const NucleationRegime& regime, const LSTrajectory& traj) {
  CsvWriter csv(path);
  csv.header({"t", "u", "mass_residual", "N_of_u"});
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const LSState& s = traj.samples[k];
    const double n_of_u =
        s.u > regime.rho ? nucleation_rate(regime, fam, s.u) : 0.0;
    csv.row({traj.times[k], s.u, s.u + s.cluster_mass() - s.m, n_of_u});
  }
}

void write_ls_snapshot_csv(const std::string& path, const LSState& state) {
  CsvWriter csv(path);
  csv.header({"x", "f"});
  for (long j = 0; j < state.cells(); ++j) {
    csv.row({state.cell_center(j), state.f[j]});
  }
}

void write_report(const ConvergenceReport& report, const SweepPlan& plan,
                  const std::string& out_dir, const std::string& config_echo) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string base = out_dir + "/";

  {
    CsvWriter csv(base + "report.csv");
    csv.header({"eps", "t", "dist_weak_star", "sup_u_err", "dist_initial",
                "status", "failure_t"});
    for (const auto& run : report.runs) {
      if (!run.ok) {
        csv.row_mixed({format_double(run.eps), "", "", "", "", run.failure,
                       format_double(run.failure_t)});
        continue;
      }
      for (std::size_t k = 0; k < plan.t_samples.size(); ++k) {
        csv.row_mixed({format_double(run.eps), format_double(plan.t_samples[k]),
                       format_double(run.distances[k]),
                       format_double(run.sup_u_err),
                       format_double(run.initial_distance), "ok", ""});
      }
    }
  }
  {
    CsvWriter csv(base + "laplace.csv");
    csv.header({"eps", "z", "F_sup", "F_initial"});
    for (const auto& run : report.runs) {
      if (!run.ok) continue;
      for (std::size_t k = 0; k < plan.z_list.size(); ++k) {
        csv.row({run.eps, plan.z_list[k], run.laplace_sup[k],
                 run.laplace_initial[k]});
      }
    }
  }
  {
    CsvWriter csv(base + "boundary.csv");
    csv.header({"eps", "regime", "discrepancy", "window_t0", "window_t1"});
    for (const auto& run : report.runs) {
      if (!run.ok) continue;
      const auto ident =
          boundary_identification(run.trajectory, plan.fam, report.regime, 0.0,
                                  plan.bd_cfg.t_end, plan.window_skip);
      csv.row_mixed({format_double(run.eps), regime_name(ident.kind),
                     format_double(ident.discrepancy),
                     format_double(ident.window_t0),
                     format_double(ident.window_t1)});
    }
  }
  {
    CsvWriter csv(base + "entropy.csv");
    csv.header({"t", "entropy"});
    if (plan.fam.r_a == plan.fam.r_b) {
      for (const auto& run : report.runs) {
        if (!run.ok) continue;
        if (run.eps != plan.eps_list.back()) continue;
        const auto series = entropy_monitor(
            run.trajectory, default_entropy_delta(plan.fam.r_a), plan.fam.r_a);
        for (std::size_t k = 0; k < series.times.size(); ++k) {
          csv.row({series.times[k], series.values[k]});
        }
      }
    }
  }
  {
    CsvWriter csv(base + "lemma65.csv");
    csv.header({"r", "delta", "I0"});
    const double r = plan.fam.r_a;
    if (r > 0 && r < 1) {
      for (double frac : {0.25, 0.5, 0.9}) {
        const double delta = frac * (1.0 / r - 1.0);
        csv.row({r, delta, static_cast<double>(lemma65_check(r, delta, 100000))});
      }
    }
  }
  {
    std::ofstream meta(base + "meta", std::ios::binary);
    meta << "# sweep report\n";
    meta << "# convergence is asserted as a monotone trend along the "
            "configured eps list; no rate is implied\n";
    meta << "regime = " << regime_name(report.regime.kind) << "\n";
    meta << "rho = " << format_double(report.regime.rho) << "\n";
    meta << "pure_aggregation = " << (plan.fam.pure_aggregation() ? 1 : 0) << "\n";
    meta << "no_tail_fragmentation_with_beta_positive = "
         << (plan.fam.mixed_no_tail_fragmentation() ? 1 : 0) << "\n";
    meta << "launched = " << report.runs.size() << "\n";
    std::size_t failures = 0;
    for (const auto& run : report.runs) {
      if (!run.ok) ++failures;
    }
    meta << "succeeded = " << report.runs.size() - failures << "\n";
    meta << "failed = " << failures << "\n\n";
    meta << config_echo;
  }
}

}  // namespace bdls
