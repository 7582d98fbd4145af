#ifndef TLPOT_GIBBS_HPP
#define TLPOT_GIBBS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "tlpot/error.hpp"
#include "tlpot/posterior.hpp"
#include "tlpot/random.hpp"

namespace tlpot {

struct GibbsConfig {
  std::size_t n_pairs = 2000;
  /// Starting gamma; the Strict Pareto posterior mean n/S when unset.
  std::optional<double> gamma_init;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;

  void validate() const {
    require(n_pairs >= 1, "GibbsConfig: n_pairs must be >= 1");
    require(burn_in < n_pairs, "GibbsConfig: burn_in must be < n_pairs");
    require(!gamma_init || (std::isfinite(*gamma_init) && *gamma_init > 0.0),
            "GibbsConfig: gamma_init must be > 0");
  }
};

struct Draw {
  double alpha;
  double gamma;

  friend bool operator==(const Draw&, const Draw&) = default;
};

struct Chain {
  std::vector<Draw> pairs;
  GibbsConfig config;
};

struct TLPaFit {
  double alpha_hat = 0.0;
  double gamma_hat = 0.0;
  double evi = 0.0;  // 1 / (2 gamma_hat)
};

/// Alternates alpha* ~ Gamma(n, -T(gamma)) and gamma* ~ Gamma(n alpha*, 2S),
/// recording every pair.
inline Chain run_chain(const ExceedanceSample& s, const GibbsConfig& cfg) {
  cfg.validate();
  require(s.size() >= 2, "run_chain: need at least 2 excesses");
  Engine eng = make_engine(cfg.seed);
  const double n = static_cast<double>(s.size());
  const double gamma_rate = 2.0 * s.log_sum();

  Chain chain;
  chain.config = cfg;
  chain.pairs.reserve(cfg.n_pairs);
  double gamma = cfg.gamma_init.value_or(n / s.log_sum());
  for (std::size_t i = 0; i < cfg.n_pairs; ++i) {
    const double alpha = gamma_variate(eng, n, -tail_log_sum(gamma, s));
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      fail(ErrorKind::degenerate, "run_chain: alpha draw " + std::to_string(alpha) +
                                      " at step " + std::to_string(i));
    gamma = gamma_variate(eng, n * alpha, gamma_rate);
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      fail(ErrorKind::degenerate, "run_chain: gamma draw " + std::to_string(gamma) +
                                      " at step " + std::to_string(i));
    chain.pairs.push_back({alpha, gamma});
  }
  return chain;
}

/// Means of the pairs after `burn_in`.
inline TLPaFit summarize(const Chain& chain, std::size_t burn_in) {
  require(burn_in < chain.pairs.size(), "summarize: burn_in must be < chain length");
  double sum_alpha = 0.0;
  double sum_gamma = 0.0;
  for (std::size_t i = burn_in; i < chain.pairs.size(); ++i) {
    sum_alpha += chain.pairs[i].alpha;
    sum_gamma += chain.pairs[i].gamma;
  }
  const double kept = static_cast<double>(chain.pairs.size() - burn_in);
  TLPaFit fit;
  fit.alpha_hat = sum_alpha / kept;
  fit.gamma_hat = sum_gamma / kept;
  fit.evi = 1.0 / (2.0 * fit.gamma_hat);
  return fit;
}

inline TLPaFit estimate_tlpa(const ExceedanceSample& s, const GibbsConfig& cfg) {
  return summarize(run_chain(s, cfg), cfg.burn_in);
}

}  // namespace tlpot

#endif  // TLPOT_GIBBS_HPP
