#include "bdls/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "bdls/csv.hpp"
#include "bdls/errors.hpp"
#include "bdls/numerics.hpp"

namespace bdls {

CellGrid SteppedDensity::grid() const {
  CellGrid g;
  g.x0 = 1.5 * eps;
  g.dx = eps;
  g.heights = values;
  return g;
}

double SteppedDensity::integral() const {
  KahanAccumulator acc;
  for (long k = 0; k < values.size(); ++k) acc.add(values[k]);
  return eps * acc.value();
}

SteppedDensity density_of(const BDState& state) {
  validate(state);
  return SteppedDensity{state.eps, state.c};
}

double laplace(const BDState& state, double z, double r) {
  if (!(z > 0)) throw std::domain_error("laplace: z must be positive");
  const double eps_r = std::pow(state.eps, r);
  KahanAccumulator acc;
  for (long i = 2; i <= state.i_max(); ++i) {
    acc.add(state.ci(i) * std::exp(-static_cast<double>(i) * z));
  }
  return eps_r * acc.value();
}

double rescaled_small_cluster(const BDState& state, long i, double r) {
  if (i < 2 || i > state.i_max()) {
    throw std::domain_error("rescaled_small_cluster: i must lie in [2, I_max]");
  }
  return std::pow(state.eps, r) * state.ci(i);
}

MomentFunction MomentFunction::default_phi() { return power(1.5); }

MomentFunction MomentFunction::power(double p) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw validation_error("moment: power exponent must lie in (1,2]");
  }
  return MomentFunction{[p](double x) { return std::pow(x, p); },
                        "x^" + format_double(p)};
}

MomentFunction MomentFunction::custom(std::function<double(double)> phi,
                                      std::string name) {
  if (!phi) throw validation_error("moment: custom Phi must be callable");
  return MomentFunction{std::move(phi), std::move(name)};
}

double moment(const SteppedDensity& dens, const MomentFunction& phi) {
  const CellGrid g = dens.grid();
  KahanAccumulator acc;
  for (long k = 0; k < g.heights.size(); ++k) {
    if (g.heights[k] == 0.0) continue;
    const double cell =
        adaptive_simpson(phi.phi, g.cell_lo(k), g.cell_hi(k), 1e-12);
    acc.add(g.heights[k] * cell);
  }
  return acc.value();
}

TestFunctionFamily TestFunctionFamily::default_family(double x_max) {
  if (!(x_max > 0)) throw validation_error("metric: x_max must be positive");
  TestFunctionFamily fam;
  fam.width = x_max / 8.0;
  for (int k = 1; k <= 16; ++k) {
    fam.centers.push_back(static_cast<double>(k) * x_max / 16.0);
  }
  return fam;
}

double TestFunctionFamily::evaluate(std::size_t k, double x) const {
  const double s = std::abs(x - centers.at(k)) / width;
  return s >= 1.0 ? 0.0 : 1.0 - s;
}

namespace {

// Integral of a linear segment value0 + slope*(x - seg_lo) over
// [lo, hi] clipped to [seg_lo, seg_hi].
double linear_piece(double seg_lo, double seg_hi, double value_lo, double slope,
                    double lo, double hi) {
  const double a = std::max(lo, seg_lo);
  const double b = std::min(hi, seg_hi);
  if (b <= a) return 0.0;
  const double mid = 0.5 * (a + b);
  return (value_lo + slope * (mid - seg_lo)) * (b - a);
}

}  // namespace

double TestFunctionFamily::integrate(std::size_t k, const CellGrid& grid) const {
  const double c = centers.at(k);
  const double w = width;
  KahanAccumulator acc;
  for (long j = 0; j < grid.heights.size(); ++j) {
    if (grid.heights[j] == 0.0) continue;
    const double lo = grid.cell_lo(j);
    const double hi = grid.cell_hi(j);
    if (hi <= c - w || lo >= c + w) continue;
    // Rising edge on [c-w, c], falling edge on [c, c+w]; exact on each piece.
    const double rising = linear_piece(c - w, c, 0.0, 1.0 / w, lo, hi);
    const double falling = linear_piece(c, c + w, 1.0, -1.0 / w, lo, hi);
    acc.add(grid.heights[j] * (rising + falling));
  }
  return acc.value();
}

double TestFunctionFamily::weight(std::size_t k) const {
  return std::pow(2.0, -static_cast<double>(k + 1)) / (1.0 + 1.0 / width);
}

double weak_star_distance(const CellGrid& d1, const CellGrid& d2,
                          const TestFunctionFamily& family) {
  KahanAccumulator acc;
  for (std::size_t k = 0; k < family.centers.size(); ++k) {
    acc.add(family.weight(k) *
            std::abs(family.integrate(k, d1) - family.integrate(k, d2)));
  }
  return acc.value();
}

namespace {

// int_{lo}^{hi} min(1, x^p) dx in closed form (p >= 0, 0 <= lo <= hi).
double weight_integral(double lo, double hi, double p) {
  if (p == 0.0) return hi - lo;
  auto power_part = [p](double a, double b) {
    return (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
  };
  if (hi <= 1.0) return power_part(lo, hi);
  if (lo >= 1.0) return hi - lo;
  return power_part(lo, 1.0) + (hi - 1.0);
}

}  // namespace

double entropy_functional(const SteppedDensity& dens, double delta, double r_a) {
  if (!(delta > 0)) throw std::domain_error("entropy: delta must be positive");
  if (r_a > 0 && !(delta < 1.0 / r_a - 1.0)) {
    throw std::domain_error("entropy: delta must lie in (0, 1/r_a - 1)");
  }
  const double p = r_a * delta;
  const CellGrid g = dens.grid();
  KahanAccumulator acc;
  for (long k = 0; k < g.heights.size(); ++k) {
    if (g.heights[k] == 0.0) continue;
    acc.add(std::pow(g.heights[k], 1.0 + delta) *
            weight_integral(g.cell_lo(k), g.cell_hi(k), p));
  }
  return acc.value();
}

}  // namespace bdls
