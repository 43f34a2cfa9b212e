#ifndef BDLS_HARNESS_HPP
#define BDLS_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "bdls/bd_system.hpp"
#include "bdls/initial_data.hpp"
#include "bdls/ls_solver.hpp"
#include "bdls/scaling.hpp"

namespace bdls {

// One grid-refinement experiment: a decreasing list of eps values, shared
// rates and initial data, compared against a single fine transport solution.
struct SweepPlan {
  RateFamily fam;
  InitialData init;
  std::vector<double> eps_list;   // strictly decreasing, all positive
  std::vector<double> t_samples;  // comparison times for the weak-* metric
  double x_max = 0;
  IntegratorConfig bd_cfg;
  long ls_cells = 0;  // 0: four cells per finest-eps grid cell
  double ls_cfl = 0.9;
  long u_trace_points = 101;
  std::vector<double> z_list = {0.05, 0.1, 0.2, 0.4};
  std::vector<long> watch = {2, 3, 4};
  double window_skip = 0.1;  // transient fraction skipped by identification
  long workers = 0;          // 0: hardware concurrency
};

struct SweepRun {
  double eps = 0;
  bool ok = false;
  std::string failure;    // "stiffness" / "regime-exit" when !ok
  double failure_t = 0;   // time of the recorded failure
  std::vector<double> distances;      // weak-* distance per t_sample
  double initial_distance = 0;        // distance of the sampled initial data
  double sup_u_err = 0;               // sup_t |u_eps - u_ref|
  std::vector<double> laplace_sup;    // per z: sup over samples
  std::vector<double> laplace_initial;
  BDTrajectory trajectory;
};

struct ConvergenceReport {
  NucleationRegime regime;
  std::vector<SweepRun> runs;  // in eps_list order
  LSTrajectory reference;
  std::vector<double> u_trace_times;
};

ConvergenceReport run_sweep(const SweepPlan& plan);

// Comparison of the small-cluster boundary trace against the closed form.
// Slow/compensated: pointwise eps^{r_a} c_2(t) against d2_limit(u(t)) after
// the transient skip, summarized by the median relative error. Fast: the
// window averages of eps^eta beta c_2 and alpha u^2 (the identification only
// holds in the averaged sense there).
struct BoundaryIdentification {
  RegimeKind kind;
  double discrepancy = 0;
  double window_t0 = 0;  // after the skip
  double window_t1 = 0;
  std::vector<double> times;      // samples used
  std::vector<double> observed;   // trace values
  std::vector<double> predicted;  // closed-form values
};

BoundaryIdentification boundary_identification(const BDTrajectory& traj,
                                               const RateFamily& fam,
                                               const NucleationRegime& regime,
                                               double window_t0, double window_t1,
                                               double skip_fraction = 0.1);

// Smallest I_0 <= i_scan_max such that
//   i^r ((i+1/2+x)^{r d} - (i-1/2+x)^{r d}) - d (i^r - (i-1)^r)(i-1/2+x)^{r d}
// is <= 0 for every i in [I_0, i_scan_max] and every x on a 101-point grid
// of [0,1]. Throws if no such index exists in range.
long lemma65_check(double r, double delta, long i_scan_max);

struct EntropySeries {
  std::vector<double> times;
  std::vector<double> values;
  // max over t of the series divided by (value at t=0 + 1).
  double growth_constant = 0;
};

// Time series of the weighted entropy functional along a trajectory;
// requires r_a == r_b rates (the regime the boundedness statement covers).
EntropySeries entropy_monitor(const BDTrajectory& traj, double delta, double r_a);

// delta in the admissible range, centered: 0.5*(1/r_a - 1), capped at 0.5.
double default_entropy_delta(double r_a);

// ---- CSV emission -------------------------------------------------------

void write_bd_trajectory_csv(const std::string& path, const BDTrajectory& traj);
void write_bd_snapshot_csv(const std::string& path, const BDState& state);
void write_bd_monitor_csv(const std::string& path, const BDTrajectory& traj,
                          const std::vector<double>& z_list, double delta);
void write_ls_trace_csv(const std::string& path, const RateFamily& fam,
                        const NucleationRegime& regime, const LSTrajectory& traj);
void write_ls_snapshot_csv(const std::string& path, const LSState& state);

// report.csv, boundary.csv, laplace.csv, entropy.csv, lemma65.csv and a meta
// echo file under out_dir.
void write_report(const ConvergenceReport& report, const SweepPlan& plan,
                  const std::string& out_dir, const std::string& config_echo);

}  // namespace bdls

#endif
