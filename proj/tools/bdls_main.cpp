// Command-line front end: bd-run, ls-run, sweep, qssa, check-lemma over a
// line-oriented configuration file.
//
// Exit codes: 0 success, 2 validation error, 3 stiffness error,
// 4 regime exit (u reached rho; the horizon time is printed).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bdls/bd_system.hpp"
#include "bdls/csv.hpp"
#include "bdls/errors.hpp"
#include "bdls/harness.hpp"
#include "bdls/initial_data.hpp"
#include "bdls/ls_solver.hpp"
#include "bdls/numerics.hpp"
#include "bdls/qssa.hpp"
#include "bdls/run_config.hpp"
#include "bdls/scaling.hpp"

namespace {

using namespace bdls;

struct CliArgs {
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  double r = 0;
  double delta = 0;
  long i_max = 0;
  bool has_r = false, has_delta = false;
};

CliArgs parse_args(int argc, char** argv) {
  CliArgs args;
  if (argc < 2) throw validation_error("usage: bdls <bd-run|ls-run|sweep|qssa|check-lemma> [flags]");
  args.subcommand = argv[1];
  for (int k = 2; k < argc; ++k) {
    const std::string flag = argv[k];
    auto next = [&]() -> std::string {
      if (k + 1 >= argc) throw validation_error("flag " + flag + " needs a value");
      return argv[++k];
    };
    if (flag == "--config") args.config_path = next();
    else if (flag == "--out") args.out_dir = next();
    else if (flag == "--set") args.sets.push_back(next());
    else if (flag == "--r") { args.r = std::stod(next()); args.has_r = true; }
    else if (flag == "--delta") { args.delta = std::stod(next()); args.has_delta = true; }
    else if (flag == "--i-max") args.i_max = std::stol(next());
    else throw validation_error("unknown flag: " + flag);
  }
  return args;
}

RunConfig load_config(const CliArgs& args) {
  if (args.config_path.empty()) {
    throw validation_error("missing --config PATH");
  }
  RunConfig cfg = RunConfig::parse_file(args.config_path);
  for (const auto& spec : args.sets) cfg.set_from_spec(spec);
  return cfg;
}

std::string resolve_out_dir(const CliArgs& args, const RunConfig& cfg) {
  if (!args.out_dir.empty()) return args.out_dir;
  return cfg.get_or("output", "dir", std::string("out"));
}

void echo_config(RunConfig& cfg, const std::string& out_dir) {
  cfg.set("output", "dir", out_dir);
  const std::string text = cfg.echo();
  std::cout << text;
  std::filesystem::create_directories(out_dir);
  std::ofstream file(out_dir + "/config", std::ios::binary);
  file << text;
}

std::vector<double> run_sample_times(double t_end, long samples) {
  if (t_end <= 0) return {0.0};
  return linspace(0.0, t_end, std::max<long>(samples, 2));
}

int cmd_bd_run(CliArgs& args) {
  RunConfig cfg = load_config(args);
  const RateFamily fam = rate_family_from(cfg);
  const InitialData init = initial_data_from(cfg);
  const IntegratorConfig icfg = integrator_config_from(cfg);

  const double eps = cfg.get_double("bd", "eps");
  const double x_max = cfg.get_double("bd", "x_max");
  long i_max = cfg.get_or("bd", "i_max", 0L);
  if (i_max <= 0) i_max = default_i_max(x_max, eps);
  const long samples = cfg.get_or("bd", "samples", 21L);
  std::vector<long> watch = {2, 3, 4};
  if (cfg.has("bd", "watch")) watch = cfg.get_long_list("bd", "watch");
  std::vector<double> snapshot_times;
  if (cfg.has("bd", "snapshot_times")) {
    snapshot_times = cfg.get_double_list("bd", "snapshot_times");
  }

  std::vector<double> sample_times = run_sample_times(icfg.t_end, samples);
  sample_times.insert(sample_times.end(), snapshot_times.begin(),
                      snapshot_times.end());
  std::sort(sample_times.begin(), sample_times.end());
  sample_times.erase(std::unique(sample_times.begin(), sample_times.end()),
                     sample_times.end());

  const std::string out_dir = resolve_out_dir(args, cfg);
  cfg.set_default("bd", "i_max", std::to_string(i_max));
  cfg.set_default("bd", "samples", std::to_string(samples));
  cfg.set_default("bd", "rtol", format_double(icfg.rtol));
  cfg.set_default("bd", "atol", format_double(icfg.atol));
  cfg.set_default("bd", "dt_init", format_double(icfg.dt_init));
  cfg.set_default("bd", "dt_min", format_double(icfg.dt_min));
  echo_config(cfg, out_dir);

  const BDState state0 = sample_bd(init, eps, i_max);
  const BDTrajectory traj = integrate(fam, state0, icfg, sample_times, watch);

  write_bd_trajectory_csv(out_dir + "/trajectory.csv", traj);
  write_bd_monitor_csv(out_dir + "/monitors.csv", traj,
                       {0.05, 0.1, 0.2, 0.4}, default_entropy_delta(fam.r_a));
  for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "/snapshot_%03zu.csv", k);
    write_bd_snapshot_csv(out_dir + name, traj.at_time(snapshot_times[k]));
  }
  std::cout << "bd-run: wrote " << traj.times.size() << " samples to "
            << out_dir << "\n";
  return 0;
}

int cmd_ls_run(CliArgs& args) {
  RunConfig cfg = load_config(args);
  const RateFamily fam = rate_family_from(cfg);
  const NucleationRegime regime = classify_regime(fam);
  const InitialData init = initial_data_from(cfg);
  LSConfig lcfg = ls_config_from(cfg);
  const long samples = cfg.get_or("ls", "samples", 21L);
  const std::vector<double> sample_times = run_sample_times(lcfg.t_end, samples);

  const std::string out_dir = resolve_out_dir(args, cfg);
  cfg.set_default("ls", "cfl", format_double(lcfg.cfl));
  cfg.set_default("ls", "samples", std::to_string(samples));
  echo_config(cfg, out_dir);

  const LSState state0 = sample_ls(init, lcfg.x_max, lcfg.cells);
  const LSTrajectory traj = ls_solve(fam, regime, state0, lcfg, sample_times);

  write_ls_trace_csv(out_dir + "/trace.csv", fam, regime, traj);
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "/ls_snapshot_%03zu.csv", k);
    write_ls_snapshot_csv(out_dir + name, traj.samples[k]);
  }
  if (traj.exit_time) {
    std::cout << "ls-run: regime exit at T = " << format_double(*traj.exit_time)
              << "\n";
    return 4;
  }
  std::cout << "ls-run: wrote " << traj.samples.size() << " samples to "
            << out_dir << "\n";
  return 0;
}

int cmd_sweep(CliArgs& args) {
  RunConfig cfg = load_config(args);
  SweepPlan plan;
  plan.fam = rate_family_from(cfg);
  plan.init = initial_data_from(cfg);
  plan.bd_cfg = integrator_config_from(cfg);
  plan.eps_list = cfg.get_double_list("sweep", "eps_list");
  plan.t_samples = cfg.get_double_list("sweep", "t_samples");
  plan.x_max = cfg.get_double("bd", "x_max");
  plan.ls_cells = cfg.get_or("sweep", "ls_cells", 0L);
  plan.ls_cfl = cfg.get_or("ls", "cfl", 0.9);
  plan.u_trace_points = cfg.get_or("sweep", "u_trace_points", 101L);
  plan.window_skip = cfg.get_or("sweep", "window_skip", 0.1);
  plan.workers = cfg.get_or("sweep", "workers", 0L);
  if (cfg.has("sweep", "z_list")) plan.z_list = cfg.get_double_list("sweep", "z_list");
  if (cfg.has("bd", "watch")) plan.watch = cfg.get_long_list("bd", "watch");

  const std::string out_dir = resolve_out_dir(args, cfg);
  cfg.set_default("sweep", "ls_cells", std::to_string(plan.ls_cells));
  cfg.set_default("sweep", "window_skip", format_double(plan.window_skip));
  cfg.set_default("sweep", "u_trace_points", std::to_string(plan.u_trace_points));
  cfg.set_default("sweep", "workers", std::to_string(plan.workers));
  echo_config(cfg, out_dir);

  const ConvergenceReport report = run_sweep(plan);
  write_report(report, plan, out_dir, cfg.echo());
  std::size_t failures = 0;
  for (const auto& run : report.runs) {
    if (!run.ok) {
      ++failures;
      std::cout << "sweep: eps = " << format_double(run.eps) << " failed ("
                << run.failure << " at t = " << format_double(run.failure_t)
                << ")\n";
    }
  }
  std::cout << "sweep: " << report.runs.size() - failures << "/"
            << report.runs.size() << " runs succeeded; report in " << out_dir
            << "\n";
  return 0;
}

int cmd_qssa(CliArgs& args) {
  RunConfig cfg = load_config(args);
  const RateFamily fam = rate_family_from(cfg);
  const NucleationRegime regime = classify_regime(fam);
  const double u = cfg.get_double("initial", "u_in");
  const long table_max = args.i_max > 0 ? args.i_max : 200;

  const QssaProfile profile = small_cluster_profile(regime, fam, u, table_max);
  std::cout << "regime = " << regime_name(regime.kind) << "\n";
  std::cout << "rho = " << format_double(regime.rho) << "\n";
  std::cout << "N_of_u = " << format_double(nucleation_rate(regime, fam, u))
            << "\n";
  std::cout << "H = " << format_double(profile.H) << "\n";
  if (regime.kind == RegimeKind::Fast) {
    std::cout << "# size-2 value is the time-averaged measure density\n";
  }
  std::cout << "i,d_i,H_i\n";
  const bool equal = fam.r_a == fam.r_b;
  for (long i = 2; i < profile.top_size(); ++i) {
    double h_i;
    if (regime.kind == RegimeKind::Fast && i == 2) {
      h_i = 0.0;
    } else {
      const double a_term =
          fam.a_bar * std::pow(static_cast<double>(i), fam.r_a) * u *
          profile.d_of(i);
      const double b_term =
          equal ? fam.b_bar * std::pow(static_cast<double>(i + 1), fam.r_b) *
                      profile.d_of(i + 1)
                : 0.0;
      h_i = a_term - b_term;
    }
    std::cout << i << "," << format_double(profile.d_of(i)) << ","
              << format_double(h_i) << "\n";
  }
  return 0;
}

int cmd_check_lemma(CliArgs& args) {
  if (!args.has_r || !args.has_delta) {
    throw validation_error("check-lemma needs --r and --delta");
  }
  const long scan = args.i_max > 0 ? args.i_max : 100000;
  const long i0 = lemma65_check(args.r, args.delta, scan);
  std::cout << "I0 = " << i0 << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    CliArgs args = parse_args(argc, argv);
    if (args.subcommand == "bd-run") return cmd_bd_run(args);
    if (args.subcommand == "ls-run") return cmd_ls_run(args);
    if (args.subcommand == "sweep") return cmd_sweep(args);
    if (args.subcommand == "qssa") return cmd_qssa(args);
    if (args.subcommand == "check-lemma") return cmd_check_lemma(args);
    throw validation_error("unknown subcommand: " + args.subcommand);
  } catch (const stiffness_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const regime_exit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const out_of_regime& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
