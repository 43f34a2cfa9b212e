#include "bdls/initial_data.hpp"

#include <algorithm>
#include <cmath>

#include "bdls/errors.hpp"
#include "bdls/ls_solver.hpp"
#include "bdls/numerics.hpp"

namespace bdls {

InitialData InitialData::power_law(double r, double u_in) {
  if (!(r >= 0 && r < 1)) {
    throw validation_error("initial: power-law exponent r must lie in [0,1)");
  }
  if (!(u_in > 0)) throw validation_error("initial: u_in must be positive");
  InitialData init;
  init.kind = Kind::PowerLaw;
  init.r = r;
  init.u_in = u_in;
  return init;
}

InitialData InitialData::bump(double amplitude, double center, double sigma,
                              double u_in) {
  if (amplitude < 0) throw validation_error("initial: amplitude must be nonnegative");
  if (!(sigma > 0)) throw validation_error("initial: sigma must be positive");
  if (!(center >= 0)) throw validation_error("initial: center must be nonnegative");
  if (!(u_in > 0)) throw validation_error("initial: u_in must be positive");
  InitialData init;
  init.kind = Kind::Bump;
  init.amplitude = amplitude;
  init.center = center;
  init.sigma = sigma;
  init.u_in = u_in;
  return init;
}

InitialData InitialData::tabulated(std::vector<double> xs,
                                   std::vector<double> fs, double u_in) {
  if (xs.size() != fs.size() || xs.size() < 2) {
    throw validation_error("initial: table needs matching x,f columns (>= 2 rows)");
  }
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (!(xs[k] > xs[k - 1])) {
      throw validation_error("initial: table abscissae must be increasing");
    }
  }
  for (double v : fs) {
    if (v < 0) throw validation_error("initial: table values must be nonnegative");
  }
  if (!(u_in > 0)) throw validation_error("initial: u_in must be positive");
  InitialData init;
  init.kind = Kind::Tabulated;
  init.xs = std::move(xs);
  init.fs = std::move(fs);
  init.u_in = u_in;
  return init;
}

double InitialData::eval(double x) const {
  switch (kind) {
    case Kind::PowerLaw:
      if (x <= 0.0 || x >= 1.0) return 0.0;
      return std::pow(x, -r);
    case Kind::Bump: {
      const double s = (x - center) / sigma;
      if (std::abs(s) >= 4.0) return 0.0;
      const double floor = std::exp(-8.0);
      return amplitude * (std::exp(-0.5 * s * s) - floor) / (1.0 - floor);
    }
    case Kind::Tabulated: {
      if (x <= xs.front() || x >= xs.back()) {
        return x == xs.front() ? fs.front() : (x == xs.back() ? fs.back() : 0.0);
      }
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
      const std::size_t lo = hi - 1;
      const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
      return fs[lo] + w * (fs[hi] - fs[lo]);
    }
  }
  return 0.0;
}

BDState sample_bd(const InitialData& init, double eps, long i_max) {
  if (!(eps > 0)) throw validation_error("initial: eps must be positive");
  if (i_max < 3) throw validation_error("initial: I_max must be >= 3");
  BDState state;
  state.t = 0;
  state.eps = eps;
  state.u = init.u_in;
  state.c = Eigen::ArrayXd::Zero(i_max - 1);
  for (long i = 2; i <= i_max; ++i) {
    state.ci(i) = init.eval(eps * static_cast<double>(i));
  }
  return state;
}

LSState sample_ls(const InitialData& init, double x_max, long cells) {
  if (!(x_max > 0)) throw validation_error("initial: x_max must be positive");
  if (cells < 2) throw validation_error("initial: cell count must be >= 2");
  LSState state;
  state.t = 0;
  state.x_max = x_max;
  state.dx = x_max / static_cast<double>(cells);
  state.u = init.u_in;
  state.f = Eigen::ArrayXd::Zero(cells);
  for (long j = 0; j < cells; ++j) {
    state.f[j] = init.eval(state.cell_center(j));
  }
  state.m = state.u + state.cluster_mass();
  return state;
}

}  // namespace bdls
