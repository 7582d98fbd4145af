#ifndef TLPOT_THRESHOLD_HPP
#define TLPOT_THRESHOLD_HPP

// Threshold diagnostics and automatic threshold choice.
//
// scan() fits the Strict Pareto and TLPa models at every threshold rank.
// select() minimizes the loss (E(alpha | gamma, y) - 1)^2 jointly over a
// gamma grid and a rank grid; select_profile() fixes gamma at the alpha = 1
// posterior mean n/(2S) for each rank and minimizes over ranks only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "tlpot/error.hpp"
#include "tlpot/gibbs.hpp"
#include "tlpot/posterior.hpp"

namespace tlpot {

struct CurveRow {
  std::size_t rank = 0;
  double u = 0.0;
  std::size_t n_exceed = 0;
  double evi_sp = 0.0;
  double evi_tlpa = 0.0;
  double alpha_hat = 0.0;
};

struct SkippedRank {
  std::size_t rank = 0;
  std::string reason;
};

struct ThresholdCurve {
  std::vector<CurveRow> rows;
  /// Ranks whose excesses could not be built or fitted.
  std::vector<SkippedRank> skipped;
};

/// Inclusive range of 1-based threshold ranks.
struct RankRange {
  std::size_t first = 1;
  std::size_t last = 1;
};

/// Widest valid range for n observations: rank 1 up to n - 2.
inline RankRange full_rank_range(std::size_t n) {
  require(n >= 4, "full_rank_range: need at least 4 observations");
  return RankRange{1, n - 2};
}

/// Per-rank Gibbs seed, independent of the order ranks are evaluated in.
constexpr std::uint64_t rank_seed(std::uint64_t master, std::size_t rank) noexcept {
  return master ^ (static_cast<std::uint64_t>(rank) * 0x9E3779B97F4A7C15ULL);
}

inline std::vector<double> sorted_copy(std::span<const double> data) {
  std::vector<double> out(data.begin(), data.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// Fits both models at every rank in `ranks`. The Gibbs seed of each row is
/// rank_seed(cfg.seed, rank).
inline ThresholdCurve scan(std::span<const double> data, RankRange ranks,
                           const GibbsConfig& cfg) {
  require(data.size() >= 4, "scan: need at least 4 observations");
  require(ranks.first >= 1 && ranks.first <= ranks.last && ranks.last <= data.size() - 2,
          "scan: rank range [" + std::to_string(ranks.first) + ", " +
              std::to_string(ranks.last) + "] outside [1, " +
              std::to_string(data.size() - 2) + "]");
  cfg.validate();
  const std::vector<double> sorted = sorted_copy(data);

  ThresholdCurve curve;
  curve.rows.reserve(ranks.last - ranks.first + 1);
  for (std::size_t rank = ranks.first; rank <= ranks.last; ++rank) {
    try {
      const ExceedanceSample s = make_excesses(sorted, rank);
      GibbsConfig row_cfg = cfg;
      row_cfg.seed = rank_seed(cfg.seed, rank);
      const SPFit sp = sp_posterior(s);
      const TLPaFit tl = estimate_tlpa(s, row_cfg);
      curve.rows.push_back({rank, s.threshold(), s.size(), sp.evi, tl.evi, tl.alpha_hat});
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::invalid_argument) throw;
      curve.skipped.push_back({rank, e.what()});
    }
  }
  return curve;
}

struct SelectionGrid {
  std::vector<double> gamma_grid;
  std::vector<std::size_t> rank_grid;
  std::size_t min_exceedances = 10;
};

struct Selection {
  double gamma_sharp = 0.0;
  std::size_t rank_sharp = 0;
  double u_sharp = 0.0;
  std::size_t n_exceed = 0;
  double evi = 0.0;  // 1 / (2 gamma_sharp)
  double loss = 0.0;
};

enum class SelectionStrategy {
  grid,     // joint (gamma, rank) grid, the literal rule
  profile,  // gamma fixed at n/(2S) per rank
};

/// Default for the CLI and the mixture studies.
inline constexpr SelectionStrategy default_strategy = SelectionStrategy::grid;

inline std::vector<double> log_spaced(double lo, double hi, std::size_t points) {
  require(lo > 0.0 && hi > lo && points >= 2, "log_spaced: need 0 < lo < hi and >= 2 points");
  std::vector<double> out(points);
  const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// Ranks from the median rank ceil(n/2) to n - min_exceedances, and 200
/// log-spaced gamma values on [0.05, 10].
inline SelectionGrid default_selection_grid(std::size_t n, std::size_t min_exceedances = 10,
                                            double gamma_lo = 0.05, double gamma_hi = 10.0,
                                            std::size_t gamma_points = 200) {
  require(min_exceedances >= 2, "default_selection_grid: min_exceedances must be >= 2");
  const std::size_t first = (n + 1) / 2;
  require(n > min_exceedances && first >= 1 && first <= n - min_exceedances,
          "default_selection_grid: " + std::to_string(n) +
              " observations leave no rank with " + std::to_string(min_exceedances) +
              " exceedances above the median");
  SelectionGrid grid;
  grid.min_exceedances = min_exceedances;
  grid.gamma_grid = log_spaced(gamma_lo, gamma_hi, gamma_points);
  for (std::size_t r = first; r <= n - min_exceedances; ++r) grid.rank_grid.push_back(r);
  return grid;
}

inline void validate(const SelectionGrid& grid, std::size_t n) {
  require(!grid.rank_grid.empty(), "SelectionGrid: rank grid is empty");
  require(grid.min_exceedances >= 2, "SelectionGrid: min_exceedances must be >= 2");
  for (std::size_t i = 0; i < grid.gamma_grid.size(); ++i) {
    require(std::isfinite(grid.gamma_grid[i]) && grid.gamma_grid[i] > 0.0,
            "SelectionGrid: gamma values must be positive");
    require(i == 0 || grid.gamma_grid[i] > grid.gamma_grid[i - 1],
            "SelectionGrid: gamma grid must be strictly increasing");
  }
  for (std::size_t i = 0; i < grid.rank_grid.size(); ++i) {
    const std::size_t r = grid.rank_grid[i];
    require(r >= 1 && n >= grid.min_exceedances && r <= n - grid.min_exceedances,
            "SelectionGrid: rank " + std::to_string(r) + " leaves fewer than " +
                std::to_string(grid.min_exceedances) + " exceedances");
    require(i == 0 || r > grid.rank_grid[i - 1],
            "SelectionGrid: rank grid must be strictly increasing");
  }
}

namespace detail {

struct Candidate {
  double loss;
  std::size_t rank;
  double gamma;
  double u;
  std::size_t n_exceed;
};

/// Smallest loss, then lowest rank, then smallest gamma.
inline bool better(const Candidate& a, const Candidate& b) {
  return std::tie(a.loss, a.rank, a.gamma) < std::tie(b.loss, b.rank, b.gamma);
}

inline Selection pick(const std::vector<Candidate>& cands) {
  if (cands.empty())
    fail(ErrorKind::degenerate, "no feasible grid point");
  const Candidate best = *std::min_element(cands.begin(), cands.end(), better);
  return Selection{best.gamma, best.rank, best.u, best.n_exceed,
                   1.0 / (2.0 * best.gamma), best.loss};
}

inline double alpha_loss(double gamma, const ExceedanceSample& s) {
  const double d = expected_alpha(gamma, s) - 1.0;
  return d * d;
}

/// Excesses at `rank`, or nothing when the rank is infeasible for the data.
inline std::optional<ExceedanceSample> feasible_excesses(std::span<const double> sorted,
                                                         std::size_t rank,
                                                         std::size_t min_exceedances) {
  try {
    ExceedanceSample s = make_excesses(sorted, rank);
    if (s.size() < min_exceedances) return std::nullopt;
    return s;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invalid_argument) throw;
    return std::nullopt;
  }
}

}  // namespace detail

/// Joint grid minimization of (E(alpha | gamma, y) - 1)^2. Grid points whose
/// excesses degenerate are skipped.
inline Selection select(std::span<const double> data, const SelectionGrid& grid) {
  validate(grid, data.size());
  require(!grid.gamma_grid.empty(), "select: gamma grid is empty");
  const std::vector<double> sorted = sorted_copy(data);
  std::vector<detail::Candidate> cands;
  for (std::size_t rank : grid.rank_grid) {
    const auto s = detail::feasible_excesses(sorted, rank, grid.min_exceedances);
    if (!s) continue;
    for (double gamma : grid.gamma_grid) {
      try {
        cands.push_back({detail::alpha_loss(gamma, *s), rank, gamma, s->threshold(), s->size()});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::degenerate) throw;
      }
    }
  }
  return detail::pick(cands);
}

/// Per-rank profile: gamma = n/(2S), the alpha = 1 posterior mean.
inline Selection select_profile(std::span<const double> data, const SelectionGrid& grid) {
  validate(grid, data.size());
  const std::vector<double> sorted = sorted_copy(data);
  std::vector<detail::Candidate> cands;
  for (std::size_t rank : grid.rank_grid) {
    const auto s = detail::feasible_excesses(sorted, rank, grid.min_exceedances);
    if (!s) continue;
    const double gamma = gamma_conditional_approx(1.0, *s).mean();
    try {
      cands.push_back({detail::alpha_loss(gamma, *s), rank, gamma, s->threshold(), s->size()});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate) throw;
    }
  }
  return detail::pick(cands);
}

inline Selection select(std::span<const double> data, const SelectionGrid& grid,
                        SelectionStrategy strategy) {
  return strategy == SelectionStrategy::grid ? select(data, grid)
                                             : select_profile(data, grid);
}

inline std::string to_string(SelectionStrategy s) {
  return s == SelectionStrategy::grid ? "grid" : "profile";
}

inline SelectionStrategy parse_strategy(const std::string& name) {
  if (name == "grid") return SelectionStrategy::grid;
  if (name == "profile") return SelectionStrategy::profile;
  fail(ErrorKind::invalid_argument, "unknown selection strategy '" + name + "'");
}

}  // namespace tlpot

#endif  // TLPOT_THRESHOLD_HPP
