#include <cmath>
#include <random>

#include "bdls/errors.hpp"
#include "bdls/rates.hpp"
#include "doctest.h"

using namespace bdls;

TEST_CASE("discrete rates follow the exact power law") {
  const auto fam = RateFamily::power_law(1.0, 1.0, 1.0, 2.0, 0.5, 1.0, 1.0);
  // a = (0.01*4)^0.5 = 0.2
  CHECK(discrete_rates(fam, 0.01, 4).first == doctest::Approx(0.2).epsilon(1e-15));
  // b = 2*(0.1*5)^1 = 1.0
  CHECK(discrete_rates(fam, 0.1, 5).second == doctest::Approx(1.0).epsilon(1e-15));
  // b is zero at i = 2: the first fragmentation is a separate channel
  CHECK(discrete_rates(fam, 0.1, 2).second == 0.0);

  const auto flat = RateFamily::power_law(1.0, 1.0, 1.0, 0.5, 0.0, 0.0, 0.0);
  CHECK(flat.a_of(0.37) == 1.0);
  CHECK(discrete_rates(flat, 1e-3, 100).first == 1.0);

  CHECK_THROWS_AS(discrete_rates(fam, 0.1, 1), std::domain_error);
  CHECK_THROWS_AS(discrete_rates(fam, 0.0, 4), validation_error);
}

TEST_CASE("power-law identity a_i/(eps i)^{r_a} = a_bar holds exactly") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ubar(0.1, 3.0);
  std::uniform_real_distribution<double> ura(0.0, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    const double a_bar = ubar(rng);
    const double r_a = ura(rng);
    const auto fam = RateFamily::power_law(1.0, 1.0, a_bar, 0.5, r_a,
                                           r_a + 0.3, 0.0);
    std::uniform_real_distribution<double> ueps(1e-4, 0.5);
    std::uniform_int_distribution<long> ui(2, 2000);
    const double eps = ueps(rng);
    const long i = ui(rng);
    const double x = eps * static_cast<double>(i);
    const double a_i = discrete_rates(fam, eps, i).first;
    CHECK(a_i / std::pow(x, r_a) == doctest::Approx(a_bar).epsilon(1e-13));
  }
}

TEST_CASE("regime classification partitions eta against r_a") {
  auto slow = RateFamily::power_law(1, 1, 1, 1, 0.5, 0.5, 1.0);
  CHECK(classify_regime(slow).kind == RegimeKind::Slow);

  auto comp = RateFamily::power_law(1, 1, 2.0, 1.0, 0.5, 0.5, 0.5);
  const auto comp_regime = classify_regime(comp);
  CHECK(comp_regime.kind == RegimeKind::Compensated);
  CHECK(comp_regime.rho == doctest::Approx(0.5).epsilon(1e-15));

  auto fast = RateFamily::power_law(1, 1, 1, 1, 0.5, 0.7, 0.0);
  const auto fast_regime = classify_regime(fast);
  CHECK(fast_regime.kind == RegimeKind::Fast);
  CHECK(fast_regime.rho == 0.0);  // r_b > r_a: b/a vanishes at 0

  // The three branches cover every admissible (eta, r_a) pair.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ura(0.0, 0.99);
  std::uniform_real_distribution<double> ueta(0.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double r_a = ura(rng);
    const double eta = ueta(rng);
    const auto fam = RateFamily::power_law(1, 1, 1, 1, r_a, r_a + 0.1, eta);
    const auto regime = classify_regime(fam);
    if (eta > r_a) CHECK(regime.kind == RegimeKind::Slow);
    else if (eta == r_a) CHECK(regime.kind == RegimeKind::Compensated);
    else CHECK(regime.kind == RegimeKind::Fast);
  }
}

TEST_CASE("continuum velocity") {
  const auto fam = RateFamily::power_law(1, 1, 1.0, 1.0, 0.5, 1.0, 1.0);
  CHECK(continuum_velocity(fam, 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(continuum_velocity(fam, 0.0, 5.0) == 0.0);

  const auto pure = RateFamily::power_law(1, 0, 1.0, 0.0, 0.0, 0.0, 0.0);
  CHECK(continuum_velocity(pure, 3.0, 0.7) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("velocity is positive near zero whenever u > rho") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ur(0.0, 0.9);
  std::uniform_real_distribution<double> ubar(0.2, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double r_a = ur(rng);
    const bool equal = trial % 2 == 0;
    const double r_b = equal ? r_a : r_a + 0.5;
    const double a_bar = ubar(rng);
    const double b_bar = ubar(rng);
    const auto fam = RateFamily::power_law(1, 1, a_bar, b_bar, r_a, r_b, r_a);
    const auto regime = classify_regime(fam);
    const double u = regime.rho + 0.25;
    // v > 0 on (0, x*) for some x* > 0: for power laws x* is where
    // b_bar x^{r_b - r_a} catches up with a_bar u (infinite when r_a = r_b).
    const double x_star =
        equal ? 1.0 : std::pow(a_bar * u / b_bar, 1.0 / (r_b - r_a));
    // Sample a log grid from 1e-12 up to just below x*.
    for (double x = 1e-12; x < 0.9 * x_star; x *= 10.0) {
      CHECK(continuum_velocity(fam, x, u) > 0.0);
    }
  }
}

TEST_CASE("family validation rejects out-of-scope exponents") {
  CHECK_THROWS_AS(RateFamily::power_law(1, 1, 1, 1, 1.0, 1.5, 0.0),
                  validation_error);
  CHECK_THROWS_AS(RateFamily::power_law(1, 1, 1, 1, 0.5, 0.3, 0.0),
                  validation_error);
  CHECK_THROWS_AS(RateFamily::power_law(0.0, 1, 1, 1, 0.5, 0.5, 0.0),
                  validation_error);
  CHECK_THROWS_AS(RateFamily::power_law(1, 1, 0.0, 1, 0.5, 0.5, 0.0),
                  validation_error);
  // beta = 0 demands b_bar = 0 too
  CHECK_THROWS_AS(RateFamily::power_law(1, 0.0, 1, 1, 0.5, 0.5, 0.0),
                  validation_error);
  CHECK(RateFamily::power_law(1, 0.0, 1, 0.0, 0.5, 0.5, 0.0).pure_aggregation());
  CHECK(RateFamily::power_law(1, 1.0, 1, 0.0, 0.5, 0.5, 0.0)
            .mixed_no_tail_fragmentation());
}

TEST_CASE("tabulated rates validate their declared asymptotics") {
  auto good_a = [](double x) { return std::sqrt(x) * (1.0 + x); };
  auto good_b = [](double x) { return 0.5 * x * (1.0 + 2.0 * x); };
  const auto fam = RateFamily::tabulated(1, 1, 1.0, 0.5, 0.5, 1.0, 0.5,
                                         good_a, good_b);
  CHECK(fam.a_of(0.25) == doctest::Approx(0.5 * 1.25).epsilon(1e-15));
  CHECK(discrete_rates(fam, 0.05, 5).first ==
        doctest::Approx(std::sqrt(0.25) * 1.25).epsilon(1e-15));

  auto wrong_a = [](double x) { return 2.0 * std::sqrt(x); };  // prefactor off
  CHECK_THROWS_AS(
      RateFamily::tabulated(1, 1, 1.0, 0.5, 0.5, 1.0, 0.5, wrong_a, good_b),
      validation_error);
}

TEST_CASE("nondimensionalization infers eps and eta from the scales") {
  PhysicalScales s;
  s.time_scale = 2.0;
  s.monomer_scale = 1e4;
  s.cluster_scale = 1.0;  // ratio 1e-4 -> eps = 1e-2
  s.agg_scale = 1.0 / (1e-2 * 1e4 * 2.0);
  s.frag_scale = 1.0 / (1e-2 * 2.0);
  s.first_agg_scale = 1e-4 * s.agg_scale;
  s.first_frag_scale = std::pow(1e-2, 0.5) * s.frag_scale;  // eta = 0.5
  s.mass_scale = s.monomer_scale;
  s.a1 = 2.0 * s.first_agg_scale;   // alpha = 2
  s.b2 = 3.0 * s.first_frag_scale;  // beta = 3
  s.r_a = 0.5;
  s.r_b = 1.0;
  s.a_coeff = 1.5 * s.agg_scale * std::pow(1e-2, 0.5);  // a_bar = 1.5
  s.b_coeff = 0.25 * s.frag_scale * 1e-2;               // b_bar = 0.25
  s.mass = 0.7 * s.mass_scale;

  const auto nd = nondimensionalize(s);
  CHECK(nd.eps == doctest::Approx(1e-2).epsilon(1e-14));
  CHECK(nd.fam.eta == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(nd.fam.alpha == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(nd.fam.beta == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(nd.fam.a_bar == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(nd.fam.b_bar == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(nd.m == doctest::Approx(0.7).epsilon(1e-13));

  // Violating one relation names it.
  PhysicalScales bad = s;
  bad.first_agg_scale *= 1.0 + 1e-6;
  CHECK_THROWS_WITH_AS(nondimensionalize(bad),
                       doctest::Contains("first_agg_scale"), validation_error);
}

TEST_CASE("nondimensionalize inverts redimensionalize") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> upos(0.2, 3.0);
  std::uniform_real_distribution<double> ur(0.0, 0.9);
  std::uniform_real_distribution<double> ueps(1e-3, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    const double r_a = ur(rng);
    const auto fam = RateFamily::power_law(upos(rng), upos(rng), upos(rng),
                                           upos(rng), r_a, r_a + ur(rng),
                                           ur(rng));
    const double eps = ueps(rng);
    const double m = upos(rng);
    const auto scales = redimensionalize(fam, eps, m, upos(rng), 100 * upos(rng));
    const auto back = nondimensionalize(scales);
    CHECK(back.eps == doctest::Approx(eps).epsilon(1e-12));
    CHECK(back.m == doctest::Approx(m).epsilon(1e-12));
    CHECK(back.fam.alpha == doctest::Approx(fam.alpha).epsilon(1e-12));
    CHECK(back.fam.beta == doctest::Approx(fam.beta).epsilon(1e-12));
    CHECK(back.fam.a_bar == doctest::Approx(fam.a_bar).epsilon(1e-12));
    CHECK(back.fam.b_bar == doctest::Approx(fam.b_bar).epsilon(1e-12));
    CHECK(back.fam.eta == doctest::Approx(fam.eta).epsilon(1e-9));
    CHECK(back.fam.r_a == fam.r_a);
    CHECK(back.fam.r_b == fam.r_b);
  }
}
