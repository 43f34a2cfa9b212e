#ifndef BDLS_LS_SOLVER_HPP
#define BDLS_LS_SOLVER_HPP

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "bdls/rates.hpp"
#include "bdls/scaling.hpp"

namespace bdls {

// Finite-volume state of the transport limit on [0, x_max]: cell averages
// f[j] on [j dx, (j+1) dx), the monomer level u, and the conserved total m.
// u is re-projected algebraically after every step, u = m - sum x_j f_j dx,
// so the constraint form of the mass balance holds by construction.
struct LSState {
  double t = 0;
  double dx = 0;
  double x_max = 0;
  double u = 0;
  double m = 0;
  Eigen::ArrayXd f;

  long cells() const { return static_cast<long>(f.size()); }
  double cell_center(long j) const { return (static_cast<double>(j) + 0.5) * dx; }
  CellGrid grid() const;
  double cluster_mass() const;  // sum x_j f_j dx (compensated)
};

void validate(const LSState& state);

struct LSConfig {
  double x_max = 0;
  long cells = 0;
  double cfl = 0.9;
  double t_end = 0;
  double dt_cap = 0;  // 0: defaults to cfl*dx (used when every speed is 0)
  // Test hooks: freeze the monomer level (no projection, no exit check) and
  // suppress the boundary inflow.
  bool freeze_u = false;
  bool zero_inflow = false;
  // Keep every accepted step (needed by weak_form_residual).
  bool record_dense = false;
};

void validate(const LSConfig& cfg);

// Upwind numerical flux through interface j (position j*dx), j = 0..J.
// Interface 0 carries the nucleation inflow N(u) while the characteristic
// points inward (u > rho); interface J is free outflow.
double ls_rhs_flux(const RateFamily& fam, const NucleationRegime& regime,
                   const LSState& state, long j, bool zero_inflow = false);

// One forward-Euler update with dt = cfl*dx/max_j |v|, capped by dt_cap and
// dt_max. Projects u and raises regime_exit when the projected u falls to
// rho or below (unless freeze_u).
LSState ls_step(const RateFamily& fam, const NucleationRegime& regime,
                const LSState& state, const LSConfig& cfg,
                double dt_max = std::numeric_limits<double>::infinity());

struct LSTrajectory {
  std::vector<double> times;
  std::vector<LSState> samples;
  std::optional<double> exit_time;  // set when the run ended at u <= rho

  // Dense per-step record (record_dense): states after every accepted step,
  // starting with the initial state.
  std::vector<LSState> dense;

  const LSState& at_time(double t) const;
};

// Integrates to cfg.t_end sampling at the given times; on regime exit the
// trajectory is truncated and the exit time reported instead of an error.
LSTrajectory ls_solve(const RateFamily& fam, const NucleationRegime& regime,
                      const LSState& init, const LSConfig& cfg,
                      std::span<const double> sample_times);

// Space-time test function with analytic derivatives, compactly supported in
// [0, T) x [0, x_max).
struct SpaceTimeTestFunction {
  std::function<double(double, double)> phi;    // (t, x)
  std::function<double(double, double)> dt;     // d/dt
  std::function<double(double, double)> dx;     // d/dx
};

// Quadrature of the weak form of the transport limit over a densely recorded
// trajectory:
//   int int [phi_t + (a u - b) phi_x] f dx dt + int phi(0,x) f_in dx
//   + int phi(s,0) N(u(s)) ds
// Vanishes at O(dx + dt) under refinement for an exact solution. zero_inflow
// must match the flag the trajectory was produced with.
double weak_form_residual(const RateFamily& fam, const NucleationRegime& regime,
                          const LSTrajectory& traj,
                          const SpaceTimeTestFunction& phi,
                          bool zero_inflow = false);

}  // namespace bdls

#endif
