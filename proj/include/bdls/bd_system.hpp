#ifndef BDLS_BD_SYSTEM_HPP
#define BDLS_BD_SYSTEM_HPP

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bdls/rates.hpp"

namespace bdls {

// Truncated cluster-size distribution at grid parameter eps. Cluster sizes
// run over i = 2..I_max; the flux through the truncation boundary is forced
// to zero (reflecting wall), which keeps the truncated system exactly
// conservative. Leakage shows up as mass pressed against the wall and is
// monitored, not hidden.
struct BDState {
  double t = 0;
  double eps = 0;
  double u = 0;            // monomer concentration
  Eigen::ArrayXd c;        // c[k] is the concentration of size k + 2

  long i_max() const { return static_cast<long>(c.size()) + 1; }
  double ci(long i) const { return c[i - 2]; }
  double& ci(long i) { return c[i - 2]; }
};

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double t_end = 1.0;
};

void validate(const BDState& state);
void validate(const IntegratorConfig& cfg);

// Net flux J_i from size i to size i+1, 1 <= i <= I_max - 1.
//   J_1 = alpha u^2 - eps^eta beta c_2
//   J_i = a_i u c_i - b_{i+1} c_{i+1}
double flux(const RateFamily& fam, const BDState& state, long i);

// du = -eps J_1 - eps sum_{i>=1} J_i   (J_1 enters twice: two monomers),
// dc_i = (J_{i-1} - J_i)/eps with J_{I_max} := 0.
void rhs(const RateFamily& fam, const BDState& state, double& du,
         Eigen::ArrayXd& dc);

// Conserved total: u + sum_i eps^2 i c_i (compensated summation).
double mass(const BDState& state);

// Mass sitting in the top decile of the size range, sum_{i > 0.9 I_max}
// eps^2 i c_i; grows when the reflecting wall starts to distort the run.
double tail_mass(const BDState& state);

// One accepted step of an embedded 5(4) pair with componentwise error
// control and positivity-guarded rejection. dt carries the working step size
// across calls and is updated by the controller. Throws stiffness_error when
// the controller would push dt below cfg.dt_min.
BDState step(const RateFamily& fam, const BDState& state,
             const IntegratorConfig& cfg, double& dt);

struct BDTrajectory {
  std::optional<RateFamily> fam;  // the family the run used
  std::vector<double> times;
  std::vector<BDState> states;
  // Per-sample monitors.
  std::vector<double> mass_series;
  std::vector<double> tail_series;
  std::vector<double> eps_eta_c2;                 // eps^eta c_2
  std::vector<long> watch;                        // watched sizes
  std::vector<std::vector<double>> watch_series;  // eps^{r_a} c_i per watch

  const BDState& at_time(double t) const;
};

using SampleObserver = std::function<void(const BDState&)>;

// Integrates to cfg.t_end, sampling at the given times (ascending, within
// [0, t_end]). Observers run at every sample.
BDTrajectory integrate(const RateFamily& fam, const BDState& state0,
                       const IntegratorConfig& cfg,
                       std::span<const double> sample_times,
                       std::span<const long> watch = {},
                       const std::vector<SampleObserver>& observers = {});

// Same dynamics with the monomer pinned at u_fixed and only the cluster
// equations evolving; the long-time state is the constant-monomer
// quasi-stationary profile used as the closed-form oracle.
BDTrajectory integrate_constant_monomer(const RateFamily& fam,
                                        const BDState& state0, double u_fixed,
                                        const IntegratorConfig& cfg,
                                        std::span<const double> sample_times,
                                        std::span<const long> watch = {},
                                        const std::vector<SampleObserver>& observers = {});

// Default truncation index for a window [0, x_max]: ceil(x_max/eps) plus a
// half-window buffer that absorbs transport past the window.
long default_i_max(double x_max, double eps);

}  // namespace bdls

#endif
