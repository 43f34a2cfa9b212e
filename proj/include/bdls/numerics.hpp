#ifndef BDLS_NUMERICS_HPP
#define BDLS_NUMERICS_HPP

#include <functional>
#include <span>
#include <vector>

namespace bdls {

// Compensated (Kahan) accumulator with a fixed, serial reduction order so
// results are reproducible run to run.
class KahanAccumulator {
public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double kahan_sum(std::span<const double> values);

// Adaptive Simpson quadrature of f on [a, b] to the given relative tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol);

// Median of a sample (copies, does not reorder the input).
double median(std::span<const double> values);

// Least-squares slope of y against t.
double linear_fit_slope(std::span<const double> t, std::span<const double> y);

// Evenly spaced points including both endpoints; n >= 2 (n == 1 gives {a}).
std::vector<double> linspace(double a, double b, long n);

}  // namespace bdls

#endif
