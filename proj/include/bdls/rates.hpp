#ifndef BDLS_RATES_HPP
#define BDLS_RATES_HPP

#include <functional>
#include <string>
#include <utility>

namespace bdls {

// De-nucleation strength relative to the small-size aggregation rate. The
// classification decides which boundary inflow N(u) the transport limit gets.
enum class RegimeKind { Slow, Compensated, Fast };

struct NucleationRegime {
  RegimeKind kind;
  // rho = lim_{x->0+} b(x)/a(x): b_bar/a_bar when r_a == r_b, else 0. The
  // characteristic at x = 0 points inward exactly when u > rho.
  double rho;
};

const char* regime_name(RegimeKind kind);

enum class RateMode { ExactPowerLaw, Tabulated };

// Kinetic coefficients of the aggregation/fragmentation chain.
//
//   first step:   alpha (aggregation of two monomers), beta (break-up of the
//                 size-2 cluster, carried with the extra eps^eta factor)
//   size x >= 2*eps:  a(x) ~ a_bar x^{r_a},  b(x) ~ b_bar x^{r_b} near 0
//
// ExactPowerLaw evaluates a and b as exact power laws everywhere. Tabulated
// carries user callbacks whose declared near-zero asymptotics are
// spot-checked at construction (a callback cannot be inspected, so the
// exponents and prefactors are part of the declaration).
class RateFamily {
public:
  static RateFamily power_law(double alpha, double beta, double a_bar,
                              double b_bar, double r_a, double r_b,
                              double eta);
  static RateFamily tabulated(double alpha, double beta, double a_bar,
                              double b_bar, double r_a, double r_b, double eta,
                              std::function<double(double)> a_fn,
                              std::function<double(double)> b_fn);

  double alpha = 0;
  double beta = 0;
  double a_bar = 0;
  double b_bar = 0;
  double r_a = 0;
  double r_b = 0;
  double eta = 0;
  RateMode mode = RateMode::ExactPowerLaw;

  // Continuum rate functions a(x), b(x), x >= 0.
  double a_of(double x) const;
  double b_of(double x) const;

  // beta == 0 and b_bar == 0: no fragmentation channel at all. The boundary
  // inflow is alpha*u^2 in every regime in that case.
  bool pure_aggregation() const { return beta == 0.0 && b_bar == 0.0; }
  // b_bar == 0 with beta > 0 is accepted but unusual enough to flag in run
  // metadata (de-nucleation without any tail fragmentation).
  bool mixed_no_tail_fragmentation() const { return b_bar == 0.0 && beta > 0.0; }

  // Factories validate on construction; a default-constructed family is a
  // placeholder and fails check().
  RateFamily() = default;
  void check() const;

private:
  std::function<double(double)> a_fn_;
  std::function<double(double)> b_fn_;
};

// Discrete rates (a_i, b_i) at grid parameter eps for size i >= 2. The b
// component is 0 at i == 2: the first fragmentation is the separate
// beta*eps^eta channel, never part of the tail.
std::pair<double, double> discrete_rates(const RateFamily& fam, double eps,
                                         long i);

NucleationRegime classify_regime(const RateFamily& fam);

// Transport speed a(x)*u - b(x) of the continuum limit.
double continuum_velocity(const RateFamily& fam, double x, double u);

// Characteristic values of the dimensional model plus the physical kinetic
// parameters measured in those units. The tail rates are power laws in the
// discrete size, a_i = a_coeff * i^{r_a} and b_i = b_coeff * i^{r_b}.
struct PhysicalScales {
  double time_scale = 0;        // characteristic time
  double monomer_scale = 0;     // characteristic monomer concentration
  double cluster_scale = 0;     // characteristic cluster concentration
  double agg_scale = 0;         // characteristic tail aggregation coefficient
  double frag_scale = 0;        // characteristic tail fragmentation coefficient
  double first_agg_scale = 0;   // characteristic first aggregation coefficient
  double first_frag_scale = 0;  // characteristic first fragmentation coefficient
  double mass_scale = 0;        // characteristic total mass

  double a1 = 0;       // physical first aggregation coefficient
  double b2 = 0;       // physical first fragmentation coefficient
  double a_coeff = 0;  // physical tail aggregation prefactor
  double b_coeff = 0;  // physical tail fragmentation prefactor
  double r_a = 0;
  double r_b = 0;
  double mass = 0;  // physical total mass
};

struct Nondimensional {
  RateFamily fam;
  double eps;
  double m;
};

// Checks the scale relations (cluster/monomer = eps^2, agg*monomer*time =
// frag*time = 1/eps, mass_scale = monomer_scale, first_agg = eps^2 * agg),
// infers eps and eta, and maps the physical parameters to the dimensionless
// family. A relation violated beyond 1e-12 relative raises validation_error
// naming it.
Nondimensional nondimensionalize(const PhysicalScales& scales);

// Inverse map for a chosen time and monomer scale; round-trips through
// nondimensionalize to within 1e-12 relative.
PhysicalScales redimensionalize(const RateFamily& fam, double eps, double m,
                                double time_scale, double monomer_scale);

}  // namespace bdls

#endif
