#ifndef TLPOT_POSTERIOR_HPP
#define TLPOT_POSTERIOR_HPP

// Posterior quantities for relative excesses under Jeffreys priors.
//
// Strict Pareto:   gamma | y         ~ Gamma(n, S),               S = sum log y_i
// TLPa, exact:     alpha | gamma, y  ~ Gamma(n, -T(gamma)),       T = sum log(1 - y_i^{-2 gamma})
// TLPa, approx:    gamma | alpha, y  ~ Gamma(n alpha, 2 S)
//
// Each log(1 - y_i^{-2 gamma}) is evaluated with log1mexp; a factor
// 1 - y_i^{-2 gamma} below 1e-300 is reported as a degenerate excess.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tlpot/error.hpp"

namespace tlpot {

/// Relative excesses y_i = x_i / u > 1 above a threshold u, with the
/// logarithms and their sum cached. Immutable once built.
class ExceedanceSample {
 public:
  /// Builds from ready-made relative excesses; every value must be > 1.
  static ExceedanceSample from_excesses(std::vector<double> y,
                                        double threshold = 1.0) {
    if (y.empty()) fail(ErrorKind::data, "insufficient tail: no exceedances");
    for (double v : y) {
      if (!(v > 1.0) || !std::isfinite(v))
        fail(ErrorKind::invalid_argument,
             "relative excess " + std::to_string(v) + " is not a finite value > 1");
    }
    return ExceedanceSample(std::move(y), threshold);
  }

  std::size_t size() const noexcept { return y_.size(); }
  std::span<const double> values() const noexcept { return y_; }
  std::span<const double> log_values() const noexcept { return log_y_; }
  /// S = sum log y_i.
  double log_sum() const noexcept { return log_sum_; }
  double threshold() const noexcept { return threshold_; }

 private:
  ExceedanceSample(std::vector<double> y, double threshold)
      : y_(std::move(y)), threshold_(threshold) {
    log_y_.reserve(y_.size());
    for (double v : y_) log_y_.push_back(std::log(v));
    log_sum_ = std::accumulate(log_y_.begin(), log_y_.end(), 0.0);
  }

  std::vector<double> y_;
  std::vector<double> log_y_;
  double log_sum_ = 0.0;
  double threshold_ = 1.0;
};

/// Excesses above the rank-th smallest observation (1-based). Observations
/// tied with the threshold are not exceedances.
inline ExceedanceSample make_excesses(std::span<const double> sorted_data,
                                      std::size_t rank) {
  const std::size_t len = sorted_data.size();
  if (len < 3 || rank < 1 || rank > len - 2)
    fail(ErrorKind::invalid_argument,
         "make_excesses: rank " + std::to_string(rank) + " outside [1, " +
             std::to_string(len < 2 ? 0 : len - 2) + "]");
  if (!std::is_sorted(sorted_data.begin(), sorted_data.end()))
    fail(ErrorKind::invalid_argument, "make_excesses: data must be sorted ascending");
  const double u = sorted_data[rank - 1];
  if (!(u > 0.0))
    fail(ErrorKind::data, "make_excesses: threshold " + std::to_string(u) +
                              " is not positive");
  auto first = std::upper_bound(sorted_data.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                                sorted_data.end(), u);
  const auto count = static_cast<std::size_t>(sorted_data.end() - first);
  if (count < 2)
    fail(ErrorKind::data, "insufficient tail: " + std::to_string(count) +
                              " strict exceedances above rank " + std::to_string(rank));
  std::vector<double> y;
  y.reserve(count);
  for (auto it = first; it != sorted_data.end(); ++it) y.push_back(*it / u);
  return ExceedanceSample::from_excesses(std::move(y), u);
}

struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;

  double mean() const { return shape / rate; }
  double variance() const { return shape / (rate * rate); }
  double log_pdf(double x) const {
    return shape * std::log(rate) - std::lgamma(shape) +
           (shape - 1.0) * std::log(x) - rate * x;
  }
};

/// Law of 1/G where G ~ Gamma(shape, rate_sum).
struct InvGammaParams {
  double shape = 1.0;
  double rate_sum = 1.0;

  double mean() const {
    if (!(shape > 1.0))
      fail(ErrorKind::invalid_argument,
           "mean undefined: inverse gamma shape " + std::to_string(shape) + " <= 1");
    return rate_sum / (shape - 1.0);
  }
};

struct SPFit {
  GammaParams posterior;
  double gamma_hat = 0.0;
  double evi = 0.0;
};

inline SPFit sp_posterior(const ExceedanceSample& s) {
  const GammaParams post{static_cast<double>(s.size()), s.log_sum()};
  return SPFit{post, post.mean(), 1.0 / post.mean()};
}

inline InvGammaParams sp_evi_posterior(const SPFit& fit) {
  return InvGammaParams{fit.posterior.shape, fit.posterior.rate};
}

/// log(1 - exp(-x)) for x > 0, accurate at both ends.
inline double log1mexp(double x) {
  return x < std::numbers::ln2 ? std::log(-std::expm1(-x)) : std::log1p(-std::exp(-x));
}

/// T(gamma) = sum log(1 - y_i^{-2 gamma}); strictly negative when finite.
inline double tail_log_sum(double gamma, const ExceedanceSample& s) {
  require(gamma > 0.0, "tail_log_sum: gamma must be > 0");
  double total = 0.0;
  for (double ly : s.log_values()) {
    const double x = 2.0 * gamma * ly;
    if (x < std::numbers::ln2 && !(-std::expm1(-x) >= 1e-300))
      fail(ErrorKind::degenerate,
           "degenerate excess: 1 - y^{-2 gamma} underflows at gamma = " +
               std::to_string(gamma));
    total += log1mexp(x);
  }
  if (!(total < 0.0))
    fail(ErrorKind::degenerate,
         "degenerate excess: sum log(1 - y^{-2 gamma}) vanished at gamma = " +
             std::to_string(gamma));
  return total;
}

/// Log of the unnormalized joint posterior of (gamma, alpha).
inline double tlpa_log_joint(double gamma, double alpha, const ExceedanceSample& s) {
  require(gamma > 0.0 && alpha > 0.0, "tlpa_log_joint: gamma and alpha must be > 0");
  const double n = static_cast<double>(s.size());
  return (n - 1.0) * std::log(alpha) + (n - 1.0) * std::log(gamma) -
         (2.0 * gamma + 1.0) * s.log_sum() + (alpha - 1.0) * tail_log_sum(gamma, s);
}

inline GammaParams alpha_conditional(double gamma, const ExceedanceSample& s) {
  return GammaParams{static_cast<double>(s.size()), -tail_log_sum(gamma, s)};
}

/// Gamma approximation of gamma | alpha, valid as the excesses approach 1.
inline GammaParams gamma_conditional_approx(double alpha, const ExceedanceSample& s) {
  require(alpha > 0.0, "gamma_conditional_approx: alpha must be > 0");
  return GammaParams{static_cast<double>(s.size()) * alpha, 2.0 * s.log_sum()};
}

/// Law of the TLPa EVI 1/(2 gamma) given alpha under the approximation.
inline InvGammaParams tlpa_evi_conditional(double alpha, const ExceedanceSample& s) {
  const GammaParams g = gamma_conditional_approx(alpha, s);
  return InvGammaParams{g.shape, s.log_sum()};
}

/// E(alpha | gamma, y) = n / (-T(gamma)).
inline double expected_alpha(double gamma, const ExceedanceSample& s) {
  return alpha_conditional(gamma, s).mean();
}

}  // namespace tlpot

#endif  // TLPOT_POSTERIOR_HPP
