#ifndef BDLS_INITIAL_DATA_HPP
#define BDLS_INITIAL_DATA_HPP

#include <string>
#include <vector>

#include "bdls/bd_system.hpp"

namespace bdls {

struct LSState;

// Initial size distribution f_in plus the starting monomer level. The same
// profile seeds both sides of a comparison: cluster concentrations are f_in
// sampled at the cell centers i*eps, finite-volume cells at their centers.
struct InitialData {
  enum class Kind { PowerLaw, Bump, Tabulated };

  Kind kind = Kind::Bump;
  double u_in = 0;

  // PowerLaw: x^{-r} on (0, 1), zero elsewhere; r in [0, 1).
  double r = 0;

  // Bump: amplitude * (exp(-(x-center)^2/(2 sigma^2)) - exp(-8)) / (1 - exp(-8))
  // on |x - center| < 4 sigma, zero elsewhere (continuous, compact support).
  double amplitude = 0;
  double center = 0;
  double sigma = 0;

  // Tabulated: piecewise-linear through (x, f) pairs, zero outside the table.
  std::vector<double> xs;
  std::vector<double> fs;

  static InitialData power_law(double r, double u_in);
  static InitialData bump(double amplitude, double center, double sigma,
                          double u_in);
  static InitialData tabulated(std::vector<double> xs, std::vector<double> fs,
                               double u_in);

  double eval(double x) const;
};

BDState sample_bd(const InitialData& init, double eps, long i_max);
LSState sample_ls(const InitialData& init, double x_max, long cells);

}  // namespace bdls

#endif
