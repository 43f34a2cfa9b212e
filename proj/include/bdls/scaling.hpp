#ifndef BDLS_SCALING_HPP
#define BDLS_SCALING_HPP

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "bdls/bd_system.hpp"

namespace bdls {

// Uniform-width piecewise-constant density: height[k] on
// [x0 + k*dx, x0 + (k+1)*dx). Both the cluster distribution and the
// finite-volume solution reduce to this view, so every functional below is
// written once against it.
struct CellGrid {
  double x0 = 0;
  double dx = 0;
  Eigen::ArrayXd heights;

  double cell_lo(long k) const { return x0 + dx * static_cast<double>(k); }
  double cell_hi(long k) const { return x0 + dx * static_cast<double>(k + 1); }
  double cell_center(long k) const { return x0 + dx * (static_cast<double>(k) + 0.5); }
};

// The cluster vector read as a density on the size line: height c_i on the
// cell [(i - 1/2) eps, (i + 1/2) eps).
struct SteppedDensity {
  double eps = 0;
  Eigen::ArrayXd values;  // values[k] is the height for size k + 2

  CellGrid grid() const;
  double integral() const;  // eps * sum of heights
};

SteppedDensity density_of(const BDState& state);

// Discrete Laplace transform sum_{j>=2} eps^r c_j exp(-j z), z in (0,1).
double laplace(const BDState& state, double z, double r);

// eps^r c_i.
double rescaled_small_cluster(const BDState& state, long i, double r);

// A weight function Phi for moment functionals: convex, Phi(0) = 0, concave
// derivative, superlinear growth. The default is x^{3/2}.
struct MomentFunction {
  std::function<double(double)> phi;
  std::string name;

  static MomentFunction default_phi();
  // x^p; requires 1 < p <= 2 so all the class conditions hold.
  static MomentFunction power(double p);
  // User-supplied Phi; the class conditions are declared, not checkable.
  static MomentFunction custom(std::function<double(double)> phi, std::string name);
};

// Exact piecewise-constant integral sum_i c_i * int_{cell_i} Phi, each cell
// integral by adaptive quadrature to 1e-12 relative.
double moment(const SteppedDensity& dens, const MomentFunction& phi);

// Fixed family of hat functions metrizing weak-* convergence on the window:
// phi_k(x) = max(0, 1 - |x - x_k|/w), sup-norm 1, Lipschitz constant 1/w.
struct TestFunctionFamily {
  std::vector<double> centers;
  double width = 0;

  // 16 hats with centers k*x_max/16 (k = 1..16) and width x_max/8; the first
  // hat's support touches x = 0.
  static TestFunctionFamily default_family(double x_max);

  double evaluate(std::size_t k, double x) const;
  // Exact integral of hat k against a piecewise-constant density.
  double integrate(std::size_t k, const CellGrid& grid) const;
  // 2^{-(k+1)} / (||phi_k||_inf + ||phi_k'||_inf), k 0-based.
  double weight(std::size_t k) const;
};

// d(mu, nu) = sum_k weight_k |int phi_k dmu - int phi_k dnu|, truncated at
// the family size.
double weak_star_distance(const CellGrid& d1, const CellGrid& d2,
                          const TestFunctionFamily& family);

// sum_i psi(c_i) int_{cell_i} min(1, x^{r_a*delta}) dx with psi(y) = y^{1+delta};
// requires 0 < delta < 1/r_a - 1 (any positive delta when r_a = 0).
double entropy_functional(const SteppedDensity& dens, double delta, double r_a);

}  // namespace bdls

#endif
