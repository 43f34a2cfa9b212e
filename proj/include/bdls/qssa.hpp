#ifndef BDLS_QSSA_HPP
#define BDLS_QSSA_HPP

#include <Eigen/Core>

#include "bdls/rates.hpp"

namespace bdls {

// Quasi-stationary small-cluster profile at monomer level u: the unique
// bounded solution of the constant-flux chain H_i == H. H equals the
// nucleation rate N(u) that the transport limit receives at x = 0.
struct QssaProfile {
  double u = 0;
  double H = 0;
  NucleationRegime regime;
  Eigen::ArrayXd d;  // d[k] is the rescaled concentration for size k + 2

  long top_size() const { return static_cast<long>(d.size()) + 1; }
  double d_of(long i) const { return d[i - 2]; }
};

// Detailed-balance coefficients Q_1 = 1,
// Q_i = (alpha/beta) prod_{k=2}^{i-1} a_bar k^{r_a} / (b_bar (k+1)^{r_a}).
struct QChain {
  Eigen::ArrayXd q;  // q[k] is Q_{k+1}

  long top_size() const { return static_cast<long>(q.size()); }
  double q_of(long i) const { return q[i - 1]; }
};

// Boundary inflow of the transport limit:
//   slow        N(u) = alpha u^2
//   compensated N(u) = alpha u^2 u/(u + beta/(a_bar 2^eta))          r_a < r_b
//               N(u) = alpha u^2 (a_bar u - b_bar)/(a_bar u - b_bar + beta/2^eta)
//                                                                    r_a = r_b
//   fast        N(u) = 0
// With no fragmentation at all (beta = b_bar = 0) the rate is alpha u^2 in
// every regime.
double nucleation_rate(const NucleationRegime& regime, const RateFamily& fam,
                       double u);

// Limit of the rescaled size-2 concentration. In the fast regime the
// pointwise limit does not exist; the value returned is the density
// (alpha/beta) u^2 of the limiting time-averaged measure.
double d2_limit(const NucleationRegime& regime, const RateFamily& fam,
                double u);

// Closed-form profile for sizes 2..i_max_profile, u > rho strictly.
QssaProfile small_cluster_profile(const NucleationRegime& regime,
                                  const RateFamily& fam, double u,
                                  long i_max_profile);

// Requires beta > 0 and b_bar > 0.
QChain q_chain(const RateFamily& fam, long i_max_profile);

// Zero-flux family d_i = Q_i u^i for i = 1..i_max_profile.
Eigen::ArrayXd detailed_balance_profile(const RateFamily& fam, double u,
                                        long i_max_profile);

// max_i |H_i - H| over the profile's limit fluxes; identically zero in exact
// arithmetic, used as a consistency check.
double profile_flux_residual(const QssaProfile& profile, const RateFamily& fam);

}  // namespace bdls

#endif
