#include "bdls/rates.hpp"

#include <cmath>

#include "bdls/errors.hpp"

namespace bdls {

const char* regime_name(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::Slow: return "slow";
    case RegimeKind::Compensated: return "compensated";
    case RegimeKind::Fast: return "fast";
  }
  return "?";
}

void RateFamily::check() const {
  if (!(alpha > 0)) throw validation_error("rates: alpha must be positive");
  if (beta < 0) throw validation_error("rates: beta must be nonnegative");
  if (!(a_bar > 0)) throw validation_error("rates: a_bar must be positive");
  if (b_bar < 0) throw validation_error("rates: b_bar must be nonnegative");
  if (beta == 0.0 && b_bar != 0.0) {
    throw validation_error(
        "rates: beta = 0 is only meaningful with b_bar = 0 (pure aggregation)");
  }
  if (!(r_a >= 0) || !(r_a < 1)) {
    throw validation_error(
        "rates: r_a must lie in [0,1); r_a >= 1 gives an outgoing "
        "characteristic at x = 0, outside the scope of this library");
  }
  if (!(r_b >= r_a)) {
    throw validation_error(
        "rates: r_b must be >= r_a; r_b < r_a gives an outgoing "
        "characteristic at x = 0, outside the scope of this library");
  }
  if (!(eta >= 0)) throw validation_error("rates: eta must be nonnegative");
}

RateFamily RateFamily::power_law(double alpha, double beta, double a_bar,
                                 double b_bar, double r_a, double r_b,
                                 double eta) {
  RateFamily fam;
  fam.alpha = alpha;
  fam.beta = beta;
  fam.a_bar = a_bar;
  fam.b_bar = b_bar;
  fam.r_a = r_a;
  fam.r_b = r_b;
  fam.eta = eta;
  fam.mode = RateMode::ExactPowerLaw;
  fam.check();
  return fam;
}

RateFamily RateFamily::tabulated(double alpha, double beta, double a_bar,
                                 double b_bar, double r_a, double r_b,
                                 double eta,
                                 std::function<double(double)> a_fn,
                                 std::function<double(double)> b_fn) {
  RateFamily fam;
  fam.alpha = alpha;
  fam.beta = beta;
  fam.a_bar = a_bar;
  fam.b_bar = b_bar;
  fam.r_a = r_a;
  fam.r_b = r_b;
  fam.eta = eta;
  fam.mode = RateMode::Tabulated;
  fam.a_fn_ = std::move(a_fn);
  fam.b_fn_ = std::move(b_fn);
  fam.check();
  if (!fam.a_fn_) throw validation_error("rates: tabulated mode needs a(x)");
  if (!fam.b_fn_ && fam.b_bar > 0) {
    throw validation_error("rates: tabulated mode needs b(x) when b_bar > 0");
  }
  // The declared near-zero behaviour cannot be inferred from a callback;
  // spot-check it instead.
  for (double x : {1e-6, 1e-8}) {
    const double a_ref = fam.a_bar * std::pow(x, fam.r_a);
    if (std::abs(fam.a_fn_(x) / a_ref - 1.0) > 0.05) {
      throw validation_error(
          "rates: tabulated a(x) disagrees with the declared a_bar*x^r_a "
          "asymptotics by more than 5% near zero");
    }
    if (fam.b_bar > 0) {
      const double b_ref = fam.b_bar * std::pow(x, fam.r_b);
      if (std::abs(fam.b_fn_(x) / b_ref - 1.0) > 0.05) {
        throw validation_error(
            "rates: tabulated b(x) disagrees with the declared b_bar*x^r_b "
            "asymptotics by more than 5% near zero");
      }
    }
  }
  return fam;
}

double RateFamily::a_of(double x) const {
  if (x < 0) throw validation_error("rates: a(x) evaluated at negative size");
  if (mode == RateMode::Tabulated) return a_fn_(x);
  return a_bar * std::pow(x, r_a);
}

double RateFamily::b_of(double x) const {
  if (x < 0) throw validation_error("rates: b(x) evaluated at negative size");
  if (b_bar == 0.0) return 0.0;
  if (mode == RateMode::Tabulated) return b_fn_(x);
  return b_bar * std::pow(x, r_b);
}

std::pair<double, double> discrete_rates(const RateFamily& fam, double eps,
                                         long i) {
  if (!(eps > 0)) throw validation_error("discrete_rates: eps must be positive");
  if (i < 2) throw std::domain_error("discrete_rates: i must be >= 2");
  const double x = eps * static_cast<double>(i);
  const double a = fam.a_of(x);
  const double b = (i >= 3) ? fam.b_of(x) : 0.0;
  return {a, b};
}

NucleationRegime classify_regime(const RateFamily& fam) {
  NucleationRegime regime{};
  if (fam.eta > fam.r_a) {
    regime.kind = RegimeKind::Slow;
  } else if (fam.eta == fam.r_a) {
    regime.kind = RegimeKind::Compensated;
  } else {
    regime.kind = RegimeKind::Fast;
  }
  regime.rho = (fam.r_a == fam.r_b) ? fam.b_bar / fam.a_bar : 0.0;
  return regime;
}

double continuum_velocity(const RateFamily& fam, double x, double u) {
  return fam.a_of(x) * u - fam.b_of(x);
}

namespace {

void require_relation(double lhs, double rhs, const char* relation) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (std::abs(lhs - rhs) > 1e-12 * scale) {
    throw validation_error(std::string("nondimensionalize: violated relation ") +
                           relation);
  }
}

}  // namespace

Nondimensional nondimensionalize(const PhysicalScales& s) {
  for (double v : {s.time_scale, s.monomer_scale, s.cluster_scale, s.agg_scale,
                   s.frag_scale, s.first_agg_scale, s.first_frag_scale,
                   s.mass_scale}) {
    if (!(v > 0)) {
      throw validation_error(
          "nondimensionalize: all characteristic values must be positive");
    }
  }
  const double eps = std::sqrt(s.cluster_scale / s.monomer_scale);
  if (!(eps > 0) || !(eps < 1)) {
    throw validation_error(
        "nondimensionalize: cluster_scale/monomer_scale must lie in (0,1)");
  }
  require_relation(s.agg_scale * s.monomer_scale * s.time_scale, 1.0 / eps,
                   "agg_scale*monomer_scale*time_scale = 1/eps");
  require_relation(s.frag_scale * s.time_scale, 1.0 / eps,
                   "frag_scale*time_scale = 1/eps");
  require_relation(s.mass_scale, s.monomer_scale, "mass_scale = monomer_scale");
  require_relation(s.first_agg_scale, eps * eps * s.agg_scale,
                   "first_agg_scale = eps^2*agg_scale");
  if (s.first_frag_scale > s.frag_scale * (1.0 + 1e-12)) {
    throw validation_error(
        "nondimensionalize: violated relation first_frag_scale = "
        "eps^eta*frag_scale with eta >= 0");
  }
  const double eta =
      std::max(0.0, std::log(s.first_frag_scale / s.frag_scale) / std::log(eps));

  const double alpha = s.a1 / s.first_agg_scale;
  const double beta = s.b2 / s.first_frag_scale;
  const double a_bar = s.a_coeff / (s.agg_scale * std::pow(eps, s.r_a));
  const double b_bar = s.b_coeff / (s.frag_scale * std::pow(eps, s.r_b));
  const double m = s.mass / s.mass_scale;
  if (!(m > 0)) throw validation_error("nondimensionalize: mass must be positive");

  return {RateFamily::power_law(alpha, beta, a_bar, b_bar, s.r_a, s.r_b, eta),
          eps, m};
}

PhysicalScales redimensionalize(const RateFamily& fam, double eps, double m,
                                double time_scale, double monomer_scale) {
  if (!(eps > 0) || !(eps < 1)) {
    throw validation_error("redimensionalize: eps must lie in (0,1)");
  }
  if (!(time_scale > 0) || !(monomer_scale > 0)) {
    throw validation_error("redimensionalize: scales must be positive");
  }
  PhysicalScales s;
  s.time_scale = time_scale;
  s.monomer_scale = monomer_scale;
  s.cluster_scale = eps * eps * monomer_scale;
  s.agg_scale = 1.0 / (eps * monomer_scale * time_scale);
  s.frag_scale = 1.0 / (eps * time_scale);
  s.first_agg_scale = eps * eps * s.agg_scale;
  s.first_frag_scale = std::pow(eps, fam.eta) * s.frag_scale;
  s.mass_scale = monomer_scale;
  s.a1 = fam.alpha * s.first_agg_scale;
  s.b2 = fam.beta * s.first_frag_scale;
  s.a_coeff = fam.a_bar * s.agg_scale * std::pow(eps, fam.r_a);
  s.b_coeff = fam.b_bar * s.frag_scale * std::pow(eps, fam.r_b);
  s.r_a = fam.r_a;
  s.r_b = fam.r_b;
  s.mass = m * s.mass_scale;
  return s;
}

}  // namespace bdls
