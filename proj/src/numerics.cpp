#include "bdls/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdls {

double kahan_sum(std::span<const double> values) {
  KahanAccumulator acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double fa, double b, double fb, double fm, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson(a, fa, b, fb, fm);
  // Absolute budget anchored to a crude magnitude estimate of the integral.
  const double scale = std::max(std::abs(whole), (b - a) * 1e-300);
  return simpson_recurse(f, a, fa, b, fb, fm, whole, rel_tol * scale, 48);
}

double median(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double linear_fit_slope(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size() || t.size() < 2) {
    throw std::invalid_argument("linear_fit_slope needs two equal-length samples");
  }
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    st += t[k];
    sy += y[k];
  }
  const double tm = st / n;
  const double ym = sy / n;
  double num = 0, den = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    num += (t[k] - tm) * (y[k] - ym);
    den += (t[k] - tm) * (t[k] - tm);
  }
  if (den == 0) throw std::invalid_argument("linear_fit_slope: degenerate abscissae");
  return num / den;
}

std::vector<double> linspace(double a, double b, long n) {
  if (n <= 0) throw std::invalid_argument("linspace: n must be positive");
  if (n == 1) return {a};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] =
        a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  out.back() = b;
  return out;
}

}  // namespace bdls
