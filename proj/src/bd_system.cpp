#include "bdls/bd_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdls/errors.hpp"
#include "bdls/numerics.hpp"

namespace bdls {

void validate(const BDState& state) {
  if (!(state.eps > 0)) throw validation_error("bd: eps must be positive");
  if (state.i_max() < 3) throw validation_error("bd: I_max must be >= 3");
  if (state.u < 0) throw validation_error("bd: u must be nonnegative");
  if ((state.c < 0).any()) throw validation_error("bd: c must be nonnegative");
  if (!(state.t >= 0)) throw validation_error("bd: t must be nonnegative");
}

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.rtol > 0 && cfg.rtol < 1)) throw validation_error("bd: rtol must lie in (0,1)");
  if (!(cfg.atol > 0 && cfg.atol < 1)) throw validation_error("bd: atol must lie in (0,1)");
  if (!(cfg.dt_init > 0)) throw validation_error("bd: dt_init must be positive");
  if (!(cfg.dt_min > 0)) throw validation_error("bd: dt_min must be positive");
  if (cfg.dt_min > cfg.dt_init) throw validation_error("bd: dt_min must be <= dt_init");
  if (!(cfg.t_end >= 0)) throw validation_error("bd: t_end must be nonnegative");
}

namespace {

// Discrete rates evaluated once per run; rhs touches every size each stage.
struct RateTable {
  double alpha = 0;
  double beta_eps_eta = 0;          // eps^eta * beta
  Eigen::ArrayXd a;                 // a[i] for i = 0..I_max (i < 2 unused)
  Eigen::ArrayXd b;                 // b[i] for i = 0..I_max (i < 3 unused)
};

RateTable build_table(const RateFamily& fam, double eps, long i_max) {
  RateTable table;
  table.alpha = fam.alpha;
  table.beta_eps_eta = std::pow(eps, fam.eta) * fam.beta;
  table.a = Eigen::ArrayXd::Zero(i_max + 1);
  table.b = Eigen::ArrayXd::Zero(i_max + 1);
  for (long i = 2; i <= i_max; ++i) {
    const auto [ai, bi] = discrete_rates(fam, eps, i);
    table.a[i] = ai;
    table.b[i] = bi;
  }
  return table;
}

// y[0] = u, y[k] = c_{k+1} for k = 1..I_max-1.
void packed_rhs(const RateTable& table, double eps, bool frozen_u,
                const Eigen::ArrayXd& y, Eigen::ArrayXd& dy,
                Eigen::ArrayXd& j_buf) {
  const long n = y.size();       // I_max
  const long i_top = n - 1;      // fluxes J_1..J_{I_max-1}; J_{I_max} = 0
  const double u = y[0];

  j_buf[1] = table.alpha * u * u - table.beta_eps_eta * y[1];
  for (long i = 2; i <= i_top; ++i) {
    j_buf[i] = table.a[i] * u * y[i - 1] - table.b[i + 1] * y[i];
  }

  if (frozen_u) {
    dy[0] = 0.0;
  } else {
    KahanAccumulator sum;
    for (long i = 1; i <= i_top; ++i) sum.add(j_buf[i]);
    dy[0] = -eps * j_buf[1] - eps * sum.value();
  }
  const double inv_eps = 1.0 / eps;
  for (long k = 1; k < n - 1; ++k) {
    dy[k] = (j_buf[k] - j_buf[k + 1]) * inv_eps;
  }
  dy[n - 1] = j_buf[n - 1] * inv_eps;  // J_{I_max} = 0
}

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA2[1] = {1.0 / 5};
constexpr double kA3[2] = {3.0 / 40, 9.0 / 40};
constexpr double kA4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr double kA5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                           -212.0 / 729};
constexpr double kA6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                           49.0 / 176, -5103.0 / 18656};
constexpr double kB5[6] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84};
// b5 - b4, applied to k1..k7 (k7 evaluated at the candidate solution).
constexpr double kE[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

class Stepper {
public:
  Stepper(const RateFamily& fam, double eps, long i_max, bool frozen_u)
      : eps_(eps), frozen_u_(frozen_u), table_(build_table(fam, eps, i_max)) {
    const long n = i_max;
    for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_}) k->resize(n);
    ytmp_.resize(n);
    j_buf_ = Eigen::ArrayXd::Zero(n);
  }

  // Attempts steps from state at the working size *dt (capped by dt_cap)
  // until one is accepted; updates *dt for the next call.
  void accepted_step(Eigen::ArrayXd& y, double& t, double& dt, double dt_cap,
                     const IntegratorConfig& cfg) {
    bool rejected_before = false;
    for (;;) {
      const double h = std::min(dt, dt_cap);
      attempt(y, h);

      long neg_idx = -1;
      double neg_val = 0;
      for (long k = 0; k < y5_.size(); ++k) {
        if (y5_[k] < neg_val) {
          neg_val = y5_[k];
          neg_idx = k;
        }
      }
      if (neg_idx >= 0 && neg_val < -cfg.atol) {
        dt = shrunk(h, 0.5, t, neg_idx, cfg);
        rejected_before = true;
        continue;
      }
      if (neg_idx >= 0) y5_ = y5_.max(0.0);  // roundoff-level undershoot

      double err = 0;
      long worst = 0;
      for (long k = 0; k < y.size(); ++k) {
        const double sc =
            cfg.atol + cfg.rtol * std::max(std::abs(y[k]), std::abs(y5_[k]));
        const double e = std::abs(err_[k]) / sc;
        if (e > err) {
          err = e;
          worst = k;
        }
      }
      if (err <= 1.0) {
        y = y5_;
        t += h;
        double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        if (rejected_before) factor = std::min(factor, 1.0);
        double next = h * factor;
        // A step capped by a sample boundary says nothing about stability;
        // keep the larger working size in that case.
        if (h < dt && factor >= 1.0) next = std::max(next, dt);
        dt = std::max(next, cfg.dt_min);
        return;
      }
      const double factor = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      dt = shrunk(h, factor, t, worst, cfg);
      rejected_before = true;
    }
  }

private:
  double shrunk(double h, double factor, double t, long component,
                const IntegratorConfig& cfg) const {
    const double next = h * factor;
    if (next < cfg.dt_min) {
      throw stiffness_error(
          "bd: step size fell below dt_min at t = " + format(t) +
              " (component " + std::to_string(component) +
              "); the configuration is too stiff for the explicit integrator",
          t, next, component);
    }
    return next;
  }

  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
  }

  void attempt(const Eigen::ArrayXd& y, double h) {
    packed_rhs(table_, eps_, frozen_u_, y, k1_, j_buf_);
    ytmp_ = y + h * kA2[0] * k1_;
    packed_rhs(table_, eps_, frozen_u_, ytmp_, k2_, j_buf_);
    ytmp_ = y + h * (kA3[0] * k1_ + kA3[1] * k2_);
    packed_rhs(table_, eps_, frozen_u_, ytmp_, k3_, j_buf_);
    ytmp_ = y + h * (kA4[0] * k1_ + kA4[1] * k2_ + kA4[2] * k3_);
    packed_rhs(table_, eps_, frozen_u_, ytmp_, k4_, j_buf_);
    ytmp_ = y + h * (kA5[0] * k1_ + kA5[1] * k2_ + kA5[2] * k3_ + kA5[3] * k4_);
    packed_rhs(table_, eps_, frozen_u_, ytmp_, k5_, j_buf_);
    ytmp_ = y + h * (kA6[0] * k1_ + kA6[1] * k2_ + kA6[2] * k3_ +
                     kA6[3] * k4_ + kA6[4] * k5_);
    packed_rhs(table_, eps_, frozen_u_, ytmp_, k6_, j_buf_);
    y5_ = y + h * (kB5[0] * k1_ + kB5[2] * k3_ + kB5[3] * k4_ + kB5[4] * k5_ +
                   kB5[5] * k6_);
    packed_rhs(table_, eps_, frozen_u_, y5_, k7_, j_buf_);
    err_ = h * (kE[0] * k1_ + kE[2] * k3_ + kE[3] * k4_ + kE[4] * k5_ +
                kE[5] * k6_ + kE[6] * k7_);
  }

  double eps_;
  bool frozen_u_;
  RateTable table_;
  Eigen::ArrayXd k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, y5_, err_, j_buf_;
};

Eigen::ArrayXd pack(const BDState& state) {
  Eigen::ArrayXd y(state.i_max());
  y[0] = state.u;
  y.tail(state.c.size()) = state.c;
  return y;
}

void unpack(const Eigen::ArrayXd& y, BDState& state) {
  state.u = y[0];
  state.c = y.tail(y.size() - 1);
}

BDTrajectory run_integration(const RateFamily& fam, const BDState& state0,
                             const IntegratorConfig& cfg,
                             std::span<const double> sample_times,
                             std::span<const long> watch,
                             const std::vector<SampleObserver>& observers,
                             bool frozen_u, double u_fixed) {
  validate(state0);
  validate(cfg);
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    if (sample_times[k] < state0.t || sample_times[k] > cfg.t_end + 1e-14) {
      throw validation_error("bd: sample times must lie in [t0, t_end]");
    }
    if (k > 0 && sample_times[k] < sample_times[k - 1]) {
      throw validation_error("bd: sample times must be ascending");
    }
  }
  for (long i : watch) {
    if (i < 2 || i > state0.i_max()) {
      throw validation_error("bd: watched sizes must lie in [2, I_max]");
    }
  }

  BDState state = state0;
  if (frozen_u) state.u = u_fixed;

  BDTrajectory traj;
  traj.fam = fam;
  traj.watch.assign(watch.begin(), watch.end());
  traj.watch_series.resize(traj.watch.size());

  const double eps_eta = std::pow(state.eps, fam.eta);
  const double eps_ra = std::pow(state.eps, fam.r_a);
  auto record = [&](const BDState& s) {
    traj.times.push_back(s.t);
    traj.states.push_back(s);
    traj.mass_series.push_back(mass(s));
    traj.tail_series.push_back(tail_mass(s));
    traj.eps_eta_c2.push_back(eps_eta * s.ci(2));
    for (std::size_t w = 0; w < traj.watch.size(); ++w) {
      traj.watch_series[w].push_back(eps_ra * s.ci(traj.watch[w]));
    }
    for (const auto& obs : observers) obs(s);
  };

  Stepper stepper(fam, state.eps, state.i_max(), frozen_u);
  Eigen::ArrayXd y = pack(state);
  double t = state.t;
  double dt = cfg.dt_init;

  std::size_t next_sample = 0;
  auto emit_due_samples = [&](double now) {
    while (next_sample < sample_times.size() &&
           sample_times[next_sample] <= now + 1e-14) {
      state.t = sample_times[next_sample];
      unpack(y, state);
      record(state);
      ++next_sample;
    }
  };

  emit_due_samples(t);
  while (t < cfg.t_end) {
    double target = cfg.t_end;
    if (next_sample < sample_times.size()) {
      target = std::min(target, sample_times[next_sample]);
    }
    const double cap = target - t;
    if (cap <= 0) {
      emit_due_samples(t);
      continue;
    }
    stepper.accepted_step(y, t, dt, cap, cfg);
    emit_due_samples(t);
  }
  emit_due_samples(cfg.t_end);
  return traj;
}

}  // namespace

double flux(const RateFamily& fam, const BDState& state, long i) {
  if (i < 1 || i > state.i_max() - 1) {
    throw std::domain_error("bd: flux index must lie in [1, I_max - 1]");
  }
  if (i == 1) {
    return fam.alpha * state.u * state.u -
           std::pow(state.eps, fam.eta) * fam.beta * state.ci(2);
  }
  const double a_i = discrete_rates(fam, state.eps, i).first;
  const double b_next = discrete_rates(fam, state.eps, i + 1).second;
  return a_i * state.u * state.ci(i) - b_next * state.ci(i + 1);
}

void rhs(const RateFamily& fam, const BDState& state, double& du,
         Eigen::ArrayXd& dc) {
  const long n = state.i_max();
  Eigen::ArrayXd y = pack(state);
  Eigen::ArrayXd dy(n);
  Eigen::ArrayXd j_buf = Eigen::ArrayXd::Zero(n);
  const RateTable table = build_table(fam, state.eps, n);
  packed_rhs(table, state.eps, false, y, dy, j_buf);
  du = dy[0];
  dc = dy.tail(n - 1);
}

double mass(const BDState& state) {
  const double eps2 = state.eps * state.eps;
  KahanAccumulator acc;
  acc.add(state.u);
  for (long i = 2; i <= state.i_max(); ++i) {
    acc.add(eps2 * static_cast<double>(i) * state.ci(i));
  }
  return acc.value();
}

double tail_mass(const BDState& state) {
  const double eps2 = state.eps * state.eps;
  const long start = static_cast<long>(0.9 * static_cast<double>(state.i_max())) + 1;
  KahanAccumulator acc;
  for (long i = std::max<long>(start, 2); i <= state.i_max(); ++i) {
    acc.add(eps2 * static_cast<double>(i) * state.ci(i));
  }
  return acc.value();
}

BDState step(const RateFamily& fam, const BDState& state,
             const IntegratorConfig& cfg, double& dt) {
  validate(state);
  validate(cfg);
  if (!(dt > 0)) dt = cfg.dt_init;
  Stepper stepper(fam, state.eps, state.i_max(), false);
  Eigen::ArrayXd y = pack(state);
  double t = state.t;
  stepper.accepted_step(y, t, dt, std::numeric_limits<double>::infinity(), cfg);
  BDState out = state;
  out.t = t;
  unpack(y, out);
  return out;
}

const BDState& BDTrajectory::at_time(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
      return states[k];
    }
  }
  throw validation_error("bd: no sample recorded at the requested time");
}

BDTrajectory integrate(const RateFamily& fam, const BDState& state0,
                       const IntegratorConfig& cfg,
                       std::span<const double> sample_times,
                       std::span<const long> watch,
                       const std::vector<SampleObserver>& observers) {
  return run_integration(fam, state0, cfg, sample_times, watch, observers,
                         false, 0.0);
}

BDTrajectory integrate_constant_monomer(const RateFamily& fam,
                                        const BDState& state0, double u_fixed,
                                        const IntegratorConfig& cfg,
                                        std::span<const double> sample_times,
                                        std::span<const long> watch,
                                        const std::vector<SampleObserver>& observers) {
  if (!(u_fixed > 0)) throw validation_error("bd: u_fixed must be positive");
  return run_integration(fam, state0, cfg, sample_times, watch, observers,
                         true, u_fixed);
}

long default_i_max(double x_max, double eps) {
  if (!(x_max > 0) || !(eps > 0)) {
    throw validation_error("bd: x_max and eps must be positive");
  }
  return static_cast<long>(std::ceil(x_max / eps)) +
         static_cast<long>(std::ceil(0.5 * x_max / eps));
}

}  // namespace bdls
