#ifndef BDLS_ERRORS_HPP
#define BDLS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bdls {

// Bad configuration or parameter values. The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Adaptive step control collapsed below dt_min. CLI exit code 3.
class stiffness_error : public std::runtime_error {
public:
  stiffness_error(const std::string& what, double t, double dt, long component)
      : std::runtime_error(what), t(t), dt(dt), component(component) {}
  double t;
  double dt;
  // Offending index in the packed state vector: 0 is the monomer, k >= 1 is
  // the cluster of size k + 1.
  long component;
};

// The monomer concentration reached the threshold rho; the transport problem
// with an incoming boundary is only posed while u > rho. CLI exit code 4.
class regime_exit : public std::runtime_error {
public:
  regime_exit(const std::string& what, double t)
      : std::runtime_error(what), t(t) {}
  double t;
};

// A closed form was requested outside the u > rho region where it holds.
class out_of_regime : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace bdls

#endif
