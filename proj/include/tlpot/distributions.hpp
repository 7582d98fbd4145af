#ifndef TLPOT_DISTRIBUTIONS_HPP
#define TLPOT_DISTRIBUTIONS_HPP

// Densities, CDFs, quantiles and seeded inverse-transform samplers for the
// families used by the threshold experiments: Strict Pareto, Topp-Leone
// Pareto (TLPa), Frechet, Burr XII and Normal.
//
// SP and TLPa live on relative excesses y > 1. Evaluating them below the
// support is reported as an error, never as 0, since it always means an
// excess was computed against the wrong threshold.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "tlpot/error.hpp"
#include "tlpot/random.hpp"

namespace tlpot {

/// Survival y^{-gamma} on y > 1.
struct StrictPareto {
  double gamma;
};

/// CDF (1 - y^{-2 gamma})^alpha on y > 1; alpha = 1 is StrictPareto{2 gamma}.
struct TLPa {
  double alpha;
  double gamma;
};

/// CDF exp(-x^{-gamma}) on x > 0.
struct Frechet {
  double gamma;
};

/// CDF 1 - (eta / (eta + x^tau))^lambda on x > 0.
struct BurrXII {
  double lambda;
  double tau;
  double eta;
};

struct Normal {
  double mu;
  double sigma2;
};

using DistSpec = std::variant<StrictPareto, TLPa, Frechet, BurrXII, Normal>;

struct Sample {
  std::vector<double> values;
  std::uint64_t seed = 0;
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

inline void check_unit_support(double y, const char* family) {
  if (!(y >= 1.0))
    fail(ErrorKind::invalid_argument,
         std::string(family) + ": argument " + std::to_string(y) +
             " is below the support y >= 1");
}

inline void check_positive_support(double x, const char* family) {
  if (!(x >= 0.0))
    fail(ErrorKind::invalid_argument,
         std::string(family) + ": argument " + std::to_string(x) +
             " is below the support x >= 0");
}

}  // namespace detail

inline void validate(const DistSpec& spec) {
  using detail::positive_finite;
  std::visit(
      detail::overloaded{
          [](const StrictPareto& d) {
            require(positive_finite(d.gamma), "StrictPareto: gamma must be > 0");
          },
          [](const TLPa& d) {
            require(positive_finite(d.alpha) && positive_finite(d.gamma),
                    "TLPa: alpha and gamma must be > 0");
          },
          [](const Frechet& d) {
            require(positive_finite(d.gamma), "Frechet: gamma must be > 0");
          },
          [](const BurrXII& d) {
            require(positive_finite(d.lambda) && positive_finite(d.tau) &&
                        positive_finite(d.eta),
                    "BurrXII: lambda, tau and eta must be > 0");
          },
          [](const Normal& d) {
            require(std::isfinite(d.mu) && positive_finite(d.sigma2),
                    "Normal: mu must be finite and sigma2 > 0");
          },
      },
      spec);
}

/// Lower end of the support (-inf for Normal).
inline double support_lower(const DistSpec& spec) {
  return std::visit(
      detail::overloaded{
          [](const StrictPareto&) { return 1.0; },
          [](const TLPa&) { return 1.0; },
          [](const Frechet&) { return 0.0; },
          [](const BurrXII&) { return 0.0; },
          [](const Normal&) { return -std::numeric_limits<double>::infinity(); },
      },
      spec);
}

inline double pdf(const DistSpec& spec, double y) {
  validate(spec);
  return std::visit(
      detail::overloaded{
          [y](const StrictPareto& d) {
            detail::check_unit_support(y, "StrictPareto");
            return d.gamma * std::exp((-d.gamma - 1.0) * std::log(y));
          },
          [y](const TLPa& d) {
            detail::check_unit_support(y, "TLPa");
            const double ly = std::log(y);
            const double tail = -std::expm1(-2.0 * d.gamma * ly);  // 1 - y^{-2g}
            return 2.0 * d.alpha * d.gamma *
                   std::exp((-2.0 * d.gamma - 1.0) * ly) *
                   std::pow(tail, d.alpha - 1.0);
          },
          [y](const Frechet& d) {
            detail::check_positive_support(y, "Frechet");
            if (y == 0.0) return 0.0;
            const double t = std::pow(y, -d.gamma);
            return d.gamma * t / y * std::exp(-t);
          },
          [y](const BurrXII& d) {
            detail::check_positive_support(y, "BurrXII");
            const double xt = std::pow(y, d.tau);
            return d.lambda * d.tau * std::pow(y, d.tau - 1.0) *
                   std::pow(d.eta, d.lambda) /
                   std::pow(d.eta + xt, d.lambda + 1.0);
          },
          [y](const Normal& d) {
            const double z = (y - d.mu) / std::sqrt(d.sigma2);
            return std::exp(-0.5 * z * z) /
                   std::sqrt(2.0 * std::numbers::pi * d.sigma2);
          },
      },
      spec);
}

inline double cdf(const DistSpec& spec, double y) {
  validate(spec);
  return std::visit(
      detail::overloaded{
          [y](const StrictPareto& d) {
            detail::check_unit_support(y, "StrictPareto");
            return -std::expm1(-d.gamma * std::log(y));
          },
          [y](const TLPa& d) {
            detail::check_unit_support(y, "TLPa");
            const double base = -std::expm1(-2.0 * d.gamma * std::log(y));
            return std::pow(base, d.alpha);
          },
          [y](const Frechet& d) {
            detail::check_positive_support(y, "Frechet");
            if (y == 0.0) return 0.0;
            return std::exp(-std::pow(y, -d.gamma));
          },
          [y](const BurrXII& d) {
            detail::check_positive_support(y, "BurrXII");
            // 1 - (eta/(eta+x^tau))^lambda = -expm1(-lambda*log1p(x^tau/eta))
            return -std::expm1(-d.lambda * std::log1p(std::pow(y, d.tau) / d.eta));
          },
          [y](const Normal& d) {
            const double z = (y - d.mu) / std::sqrt(2.0 * d.sigma2);
            return 0.5 * std::erfc(-z);
          },
      },
      spec);
}

/// Survival 1 - F, evaluated without cancellation where the form allows.
inline double survival(const DistSpec& spec, double y) {
  validate(spec);
  return std::visit(
      detail::overloaded{
          [y](const StrictPareto& d) {
            detail::check_unit_support(y, "StrictPareto");
            return std::exp(-d.gamma * std::log(y));
          },
          [y](const TLPa& d) {
            detail::check_unit_support(y, "TLPa");
            const double base = -std::expm1(-2.0 * d.gamma * std::log(y));
            return -std::expm1(d.alpha * std::log(base));
          },
          [y](const Frechet& d) {
            detail::check_positive_support(y, "Frechet");
            if (y == 0.0) return 1.0;
            return -std::expm1(-std::pow(y, -d.gamma));
          },
          [y](const BurrXII& d) {
            detail::check_positive_support(y, "BurrXII");
            return std::exp(-d.lambda * std::log1p(std::pow(y, d.tau) / d.eta));
          },
          [y](const Normal& d) {
            const double z = (y - d.mu) / std::sqrt(2.0 * d.sigma2);
            return 0.5 * std::erfc(z);
          },
      },
      spec);
}

/// Closed-form inverse CDF. Heavy-tailed families are inverted in log space
/// so p close to 1 does not overflow an intermediate power.
inline double quantile(const DistSpec& spec, double p) {
  validate(spec);
  if (!(p > 0.0 && p < 1.0))
    fail(ErrorKind::invalid_argument,
         "quantile: probability " + std::to_string(p) + " outside (0, 1)");
  const double log_surv = std::log1p(-p);  // log(1 - p)
  return std::visit(
      detail::overloaded{
          [=](const StrictPareto& d) { return std::exp(-log_surv / d.gamma); },
          [=](const TLPa& d) {
            // log Q = -(1/(2g)) log(1 - p^{1/alpha})
            const double one_minus = -std::expm1(std::log(p) / d.alpha);
            return std::exp(-std::log(one_minus) / (2.0 * d.gamma));
          },
          [=](const Frechet& d) {
            return std::exp(-std::log(-std::log(p)) / d.gamma);
          },
          [=](const BurrXII& d) {
            // x = (eta * ((1-p)^{-1/lambda} - 1))^{1/tau}
            const double inner = std::expm1(-log_surv / d.lambda);
            return std::exp((std::log(d.eta) + std::log(inner)) / d.tau);
          },
          [=](const Normal& d) {
            return d.mu - std::sqrt(2.0 * d.sigma2) *
                              boost::math::erfc_inv(2.0 * p);
          },
      },
      spec);
}

/// n i.i.d. draws. Every family except Normal is drawn by inverse transform
/// of an open-interval uniform; Normal uses the standard library's exact
/// generator. Identical (spec, n, seed) gives identical output.
inline Sample sample(const DistSpec& spec, std::size_t n, std::uint64_t seed) {
  validate(spec);
  require(n >= 1, "sample: n must be >= 1");
  Sample out;
  out.seed = seed;
  out.values.reserve(n);
  Engine eng = make_engine(seed);
  if (const auto* nd = std::get_if<Normal>(&spec)) {
    std::normal_distribution<double> dist(nd->mu, std::sqrt(nd->sigma2));
    for (std::size_t i = 0; i < n; ++i) out.values.push_back(dist(eng));
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out.values.push_back(quantile(spec, uniform_open(eng)));
  return out;
}

/// Two-term binomial expansion of the TLPa survival,
/// y^{-2g} [alpha - alpha (alpha - 1)/2 * y^{-2g}].
inline double tlpa_survival_first_order(double y, double alpha, double gamma) {
  require(y > 1.0, "tlpa_survival_first_order: y must be > 1");
  require(alpha > 0.0 && gamma > 0.0,
          "tlpa_survival_first_order: alpha and gamma must be > 0");
  const double t = std::exp(-2.0 * gamma * std::log(y));
  return t * (alpha - 0.5 * alpha * (alpha - 1.0) * t);
}

/// Extreme value index implied by a heavy-tailed family.
inline double extreme_value_index(const DistSpec& spec) {
  return std::visit(
      detail::overloaded{
          [](const StrictPareto& d) { return 1.0 / d.gamma; },
          [](const TLPa& d) { return 1.0 / (2.0 * d.gamma); },
          [](const Frechet& d) { return 1.0 / d.gamma; },
          [](const BurrXII& d) { return 1.0 / (d.lambda * d.tau); },
          [](const Normal&) { return 0.0; },
      },
      spec);
}

inline std::string describe(const DistSpec& spec) {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  return std::visit(
      detail::overloaded{
          [&](const StrictPareto& d) { return "sp:" + num(d.gamma); },
          [&](const TLPa& d) { return "tlpa:" + num(d.alpha) + "," + num(d.gamma); },
          [&](const Frechet& d) { return "frechet:" + num(d.gamma); },
          [&](const BurrXII& d) {
            return "burr:" + num(d.lambda) + "," + num(d.tau) + "," + num(d.eta);
          },
          [&](const Normal& d) { return "normal:" + num(d.mu) + "," + num(d.sigma2); },
      },
      spec);
}

}  // namespace tlpot

#endif  // TLPOT_DISTRIBUTIONS_HPP
