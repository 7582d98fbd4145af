#ifndef TLPOT_TESTS_ORACLES_HPP
#define TLPOT_TESTS_ORACLES_HPP

// Test-only reference computations, written independently of the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/log1p.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;

/// Kolmogorov-Smirnov distance between a sample and a CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic 1% critical value of the one-sample KS test.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

/// Root of a nondecreasing function on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Integral over [a, b] (b may be +inf).
inline double integrate(const std::function<double(double)>& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b);
}

/// Posterior mean of a 1-D unnormalized log density on [lo, hi], by
/// trapezoid on a fine uniform grid with max-subtraction.
inline double normalized_mean(const std::function<double(double)>& log_kernel, double lo,
                              double hi, std::size_t points = 200001) {
  std::vector<double> xs(points), lk(points);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    lk[i] = log_kernel(xs[i]);
    peak = std::max(peak, lk[i]);
  }
  double mass = 0.0, first = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double w = std::exp(lk[i] - peak) * ((i == 0 || i + 1 == points) ? 0.5 : 1.0);
    mass += w;
    first += w * xs[i];
  }
  return first / mass;
}

}  // namespace oracle

#endif  // TLPOT_TESTS_ORACLES_HPP
