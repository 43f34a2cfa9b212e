#include "bdls/ls_solver.hpp"

#include <algorithm>
#include <cmath>

#include "bdls/errors.hpp"
#include "bdls/numerics.hpp"
#include "bdls/qssa.hpp"

namespace bdls {

CellGrid LSState::grid() const {
  CellGrid g;
  g.x0 = 0.0;
  g.dx = dx;
  g.heights = f;
  return g;
}

double LSState::cluster_mass() const {
  KahanAccumulator acc;
  for (long j = 0; j < cells(); ++j) acc.add(cell_center(j) * f[j] * dx);
  return acc.value();
}

void validate(const LSState& state) {
  if (!(state.dx > 0)) throw validation_error("ls: dx must be positive");
  if (!(state.x_max > 0)) throw validation_error("ls: x_max must be positive");
  if (state.cells() < 2) throw validation_error("ls: need at least two cells");
  if (state.u < 0) throw validation_error("ls: u must be nonnegative");
  if ((state.f < 0).any()) throw validation_error("ls: f must be nonnegative");
}

void validate(const LSConfig& cfg) {
  if (!(cfg.x_max > 0)) throw validation_error("ls: x_max must be positive");
  if (cfg.cells < 2) throw validation_error("ls: cells must be >= 2");
  if (!(cfg.cfl > 0 && cfg.cfl <= 1)) throw validation_error("ls: cfl must lie in (0,1]");
  if (!(cfg.t_end >= 0)) throw validation_error("ls: t_end must be nonnegative");
  if (cfg.dt_cap < 0) throw validation_error("ls: dt_cap must be nonnegative");
}

double ls_rhs_flux(const RateFamily& fam, const NucleationRegime& regime,
                   const LSState& state, long j, bool zero_inflow) {
  const long n = state.cells();
  if (j < 0 || j > n) throw std::domain_error("ls: interface index out of range");
  const double x = static_cast<double>(j) * state.dx;
  if (j == 0) {
    if (state.u > regime.rho) {
      return zero_inflow ? 0.0 : nucleation_rate(regime, fam, state.u);
    }
    const double v = continuum_velocity(fam, 0.0, state.u);
    return v < 0 ? v * state.f[0] : 0.0;
  }
  const double v = continuum_velocity(fam, x, state.u);
  if (j == n) return v > 0 ? v * state.f[n - 1] : 0.0;
  return v >= 0 ? v * state.f[j - 1] : v * state.f[j];
}

namespace {

double max_interface_speed(const RateFamily& fam, const LSState& state) {
  double vmax = 0;
  for (long j = 0; j <= state.cells(); ++j) {
    const double x = static_cast<double>(j) * state.dx;
    vmax = std::max(vmax, std::abs(continuum_velocity(fam, x, state.u)));
  }
  return vmax;
}

}  // namespace

LSState ls_step(const RateFamily& fam, const NucleationRegime& regime,
                const LSState& state, const LSConfig& cfg, double dt_max) {
  const long n = state.cells();
  const double vmax = max_interface_speed(fam, state);
  const double dt_cap = cfg.dt_cap > 0 ? cfg.dt_cap : cfg.cfl * state.dx;
  double dt = vmax > 0 ? cfg.cfl * state.dx / vmax : dt_cap;
  dt = std::min(dt, dt_max);
  if (!(dt > 0)) throw validation_error("ls: nonpositive step size");

  LSState next = state;
  next.t = state.t + dt;
  const double scale = dt / state.dx;
  double flux_left = ls_rhs_flux(fam, regime, state, 0, cfg.zero_inflow);
  for (long j = 0; j < n; ++j) {
    const double flux_right = ls_rhs_flux(fam, regime, state, j + 1, cfg.zero_inflow);
    next.f[j] = state.f[j] - scale * (flux_right - flux_left);
    flux_left = flux_right;
  }
  if (!cfg.freeze_u) {
    next.u = next.m - next.cluster_mass();
    if (next.u <= regime.rho) {
      throw regime_exit("ls: u reached rho at t = " + std::to_string(next.t) +
                            "; the incoming-boundary problem ends here",
                        next.t);
    }
  }
  return next;
}

const LSState& LSTrajectory::at_time(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
      return samples[k];
    }
  }
  throw validation_error("ls: no sample recorded at the requested time");
}

LSTrajectory ls_solve(const RateFamily& fam, const NucleationRegime& regime,
                      const LSState& init, const LSConfig& cfg,
                      std::span<const double> sample_times) {
  validate(init);
  validate(cfg);
  if (!cfg.freeze_u && !(init.u > regime.rho)) {
    throw validation_error("ls: u_in must exceed rho (incoming characteristic)");
  }
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    if (sample_times[k] < init.t || sample_times[k] > cfg.t_end + 1e-14) {
      throw validation_error("ls: sample times must lie in [t0, t_end]");
    }
    if (k > 0 && sample_times[k] < sample_times[k - 1]) {
      throw validation_error("ls: sample times must be ascending");
    }
  }

  LSTrajectory traj;
  LSState state = init;
  if (cfg.record_dense) traj.dense.push_back(state);

  std::size_t next_sample = 0;
  auto emit_due = [&]() {
    while (next_sample < sample_times.size() &&
           sample_times[next_sample] <= state.t + 1e-14) {
      LSState snap = state;
      snap.t = sample_times[next_sample];
      traj.times.push_back(snap.t);
      traj.samples.push_back(snap);
      ++next_sample;
    }
  };

  emit_due();
  while (state.t < cfg.t_end) {
    double target = cfg.t_end;
    if (next_sample < sample_times.size()) {
      target = std::min(target, sample_times[next_sample]);
    }
    const double room = target - state.t;
    if (room <= 0) {
      emit_due();
      continue;
    }
    try {
      state = ls_step(fam, regime, state, cfg, room);
    } catch (const regime_exit& e) {
      traj.exit_time = e.t;
      return traj;
    }
    if (cfg.record_dense) traj.dense.push_back(state);
    emit_due();
  }
  emit_due();
  return traj;
}

double weak_form_residual(const RateFamily& fam, const NucleationRegime& regime,
                          const LSTrajectory& traj,
                          const SpaceTimeTestFunction& phi, bool zero_inflow) {
  if (traj.dense.size() < 2) {
    throw validation_error(
        "ls: weak_form_residual needs a densely recorded trajectory");
  }
  auto space_integrand = [&](const LSState& s) {
    KahanAccumulator acc;
    for (long j = 0; j < s.cells(); ++j) {
      if (s.f[j] == 0.0) continue;
      const double x = s.cell_center(j);
      acc.add((phi.dt(s.t, x) + continuum_velocity(fam, x, s.u) * phi.dx(s.t, x)) *
              s.f[j] * s.dx);
    }
    return acc.value();
  };
  auto boundary_integrand = [&](const LSState& s) {
    if (zero_inflow || s.u <= regime.rho) return 0.0;
    return phi.phi(s.t, 0.0) * nucleation_rate(regime, fam, s.u);
  };

  KahanAccumulator interior;
  KahanAccumulator boundary;
  double prev_space = space_integrand(traj.dense.front());
  double prev_bound = boundary_integrand(traj.dense.front());
  for (std::size_t k = 1; k < traj.dense.size(); ++k) {
    const double dt = traj.dense[k].t - traj.dense[k - 1].t;
    const double cur_space = space_integrand(traj.dense[k]);
    const double cur_bound = boundary_integrand(traj.dense[k]);
    interior.add(0.5 * dt * (prev_space + cur_space));
    boundary.add(0.5 * dt * (prev_bound + cur_bound));
    prev_space = cur_space;
    prev_bound = cur_bound;
  }

  const LSState& init = traj.dense.front();
  KahanAccumulator initial;
  for (long j = 0; j < init.cells(); ++j) {
    if (init.f[j] == 0.0) continue;
    initial.add(phi.phi(init.t, init.cell_center(j)) * init.f[j] * init.dx);
  }
  return interior.value() + initial.value() + boundary.value();
}

}  // namespace bdls
