#include "bdls/qssa.hpp"

#include <cmath>

#include "bdls/errors.hpp"

namespace bdls {

namespace {

void require_above_rho(const NucleationRegime& regime, double u) {
  if (!(u > regime.rho)) {
    throw out_of_regime(
        "qssa: the closed forms hold for u > rho only; the horizon of the "
        "limit problem ends where u crosses rho");
  }
}

bool equal_exponents(const RateFamily& fam) { return fam.r_a == fam.r_b; }

}  // namespace

double nucleation_rate(const NucleationRegime& regime, const RateFamily& fam,
                       double u) {
  if (u < 0) throw std::domain_error("qssa: u must be nonnegative");
  const double au2 = fam.alpha * u * u;
  if (fam.pure_aggregation()) return au2;
  switch (regime.kind) {
    case RegimeKind::Slow:
      return au2;
    case RegimeKind::Compensated: {
      const double two_eta = std::pow(2.0, fam.eta);
      if (!equal_exponents(fam)) {
        return au2 * u / (u + fam.beta / (fam.a_bar * two_eta));
      }
      require_above_rho(regime, u);
      const double gap = fam.a_bar * u - fam.b_bar;
      return au2 * gap / (gap + fam.beta / two_eta);
    }
    case RegimeKind::Fast:
      return 0.0;
  }
  return 0.0;
}

double d2_limit(const NucleationRegime& regime, const RateFamily& fam,
                double u) {
  if (u < 0) throw std::domain_error("qssa: u must be nonnegative");
  const double au2 = fam.alpha * u * u;
  const RegimeKind kind =
      fam.pure_aggregation() ? RegimeKind::Slow : regime.kind;
  switch (kind) {
    case RegimeKind::Slow: {
      // beta 2^{-eta} drops out of the first flux in the limit.
      const double two_ra = std::pow(2.0, fam.r_a);
      if (!equal_exponents(fam)) return au2 / (fam.a_bar * two_ra * u);
      require_above_rho(regime, u);
      return au2 / (two_ra * (fam.a_bar * u - fam.b_bar));
    }
    case RegimeKind::Compensated: {
      const double two_eta = std::pow(2.0, fam.eta);
      if (!equal_exponents(fam)) {
        return au2 / (fam.a_bar * two_eta * u + fam.beta);
      }
      require_above_rho(regime, u);
      return au2 / (two_eta * (fam.a_bar * u - fam.b_bar) + fam.beta);
    }
    case RegimeKind::Fast:
      // Density of the limiting measure in time; no pointwise limit exists.
      return fam.alpha / fam.beta * u * u;
  }
  return 0.0;
}

QssaProfile small_cluster_profile(const NucleationRegime& regime,
                                  const RateFamily& fam, double u,
                                  long i_max_profile) {
  if (i_max_profile < 2) {
    throw validation_error("qssa: i_max_profile must be >= 2");
  }
  require_above_rho(regime, u);

  QssaProfile profile;
  profile.u = u;
  profile.regime = regime;
  profile.d = Eigen::ArrayXd::Zero(i_max_profile - 1);

  const RegimeKind kind =
      fam.pure_aggregation() ? RegimeKind::Slow : regime.kind;
  if (kind == RegimeKind::Fast) {
    // H = 0 is the only flux compatible with boundedness; every d_i with
    // i >= 3 vanishes. The size-2 entry records the time-averaged density.
    profile.H = 0.0;
    profile.d[0] = d2_limit(regime, fam, u);
    return profile;
  }

  profile.H = nucleation_rate(regime, fam, u);
  if (equal_exponents(fam)) {
    // Bounded solution of a_bar i^r u d_i - b_bar (i+1)^r d_{i+1} = H.
    const double gap = fam.a_bar * u - fam.b_bar;
    for (long i = 2; i <= i_max_profile; ++i) {
      profile.d[i - 2] = profile.H / (gap * std::pow(static_cast<double>(i), fam.r_a));
    }
  } else {
    // The fragmentation chain drops out; a_bar i^{r_a} u d_i = H directly.
    for (long i = 2; i <= i_max_profile; ++i) {
      profile.d[i - 2] =
          profile.H / (fam.a_bar * std::pow(static_cast<double>(i), fam.r_a) * u);
    }
  }
  return profile;
}

QChain q_chain(const RateFamily& fam, long i_max_profile) {
  if (i_max_profile < 1) throw validation_error("qssa: chain length must be >= 1");
  if (!(fam.beta > 0) || !(fam.b_bar > 0)) {
    throw std::domain_error(
        "qssa: the detailed-balance chain needs beta > 0 and b_bar > 0");
  }
  QChain chain;
  chain.q = Eigen::ArrayXd::Zero(i_max_profile);
  chain.q[0] = 1.0;
  if (i_max_profile >= 2) {
    double value = fam.alpha / fam.beta;
    chain.q[1] = value;
    for (long i = 3; i <= i_max_profile; ++i) {
      const double k = static_cast<double>(i - 1);
      value *= fam.a_bar * std::pow(k, fam.r_a) /
               (fam.b_bar * std::pow(k + 1.0, fam.r_a));
      chain.q[i - 1] = value;
    }
  }
  return chain;
}

Eigen::ArrayXd detailed_balance_profile(const RateFamily& fam, double u,
                                        long i_max_profile) {
  if (!(u > 0)) throw std::domain_error("qssa: u must be positive");
  const QChain chain = q_chain(fam, i_max_profile);
  Eigen::ArrayXd d(i_max_profile);
  double u_pow = u;
  for (long i = 1; i <= i_max_profile; ++i) {
    d[i - 1] = chain.q[i - 1] * u_pow;
    u_pow *= u;
  }
  return d;
}

double profile_flux_residual(const QssaProfile& profile, const RateFamily& fam) {
  const double u = profile.u;
  const bool equal = fam.r_a == fam.r_b;
  const RegimeKind kind =
      fam.pure_aggregation() ? RegimeKind::Slow : profile.regime.kind;
  double residual = 0.0;
  auto track = [&](double h_i) {
    residual = std::max(residual, std::abs(h_i - profile.H));
  };

  if (kind != RegimeKind::Fast) {
    const double h1 = kind == RegimeKind::Slow
                          ? fam.alpha * u * u
                          : fam.alpha * u * u - fam.beta * profile.d_of(2);
    track(h1);
  }
  const long first = kind == RegimeKind::Fast ? 3 : 2;
  for (long i = first; i < profile.top_size(); ++i) {
    const double a_term =
        fam.a_bar * std::pow(static_cast<double>(i), fam.r_a) * u * profile.d_of(i);
    const double b_term =
        equal ? fam.b_bar * std::pow(static_cast<double>(i + 1), fam.r_b) *
                    profile.d_of(i + 1)
              : 0.0;
    track(a_term - b_term);
  }
  return residual;
}

}  // namespace bdls
