#ifndef TLPOT_EXPERIMENTS_HPP
#define TLPOT_EXPERIMENTS_HPP

// Monte Carlo harness: repeated sampling, per-repetition threshold scans or
// selections, and deterministic aggregation.
//
// Repetition k draws its data with derive_seed(master_seed, k), so results
// do not depend on how repetitions are scheduled across threads.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "tlpot/distributions.hpp"
#include "tlpot/error.hpp"
#include "tlpot/gibbs.hpp"
#include "tlpot/random.hpp"
#include "tlpot/threshold.hpp"

namespace tlpot {

/// Body sample joined with a Strict-Pareto-like tail block; the tail draws
/// are multiplied by the body maximum so the tail starts at max(body).
struct Mixture {
  DistSpec body;
  std::size_t n_body = 0;
  DistSpec tail;
  std::size_t n_tail = 0;
};

using Generator = std::variant<DistSpec, Mixture>;

struct ExperimentSpec {
  Generator generator;
  std::size_t n_obs = 0;
  std::size_t repetitions = 1000;
  GibbsConfig gibbs;
  /// Scanned ranks for run_case; every valid rank when unset.
  std::optional<RankRange> ranks;
  /// Selection grid for run_mixture_study; default_selection_grid when unset.
  std::optional<SelectionGrid> grid;
  SelectionStrategy strategy = default_strategy;
  std::uint64_t master_seed = 0;
  /// Worker threads; 0 means hardware concurrency.
  unsigned threads = 1;
};

struct FailedRepetition {
  std::size_t repetition = 0;
  std::string message;
};

struct AveragedRow {
  std::size_t rank = 0;
  double u = 0.0;
  double n_exceed = 0.0;
  double evi_sp = 0.0;
  double evi_tlpa = 0.0;
  double alpha_hat = 0.0;
  std::size_t count = 0;  // repetitions contributing to this rank
};

struct SelectionSummary {
  double mean_rank = 0.0;
  double mean_evi = 0.0;
  double mean_u = 0.0;
  std::size_t count = 0;
};

struct ExperimentResult {
  std::string spec_echo;
  std::vector<AveragedRow> curve;                          // run_case
  std::vector<std::optional<ThresholdCurve>> curves;       // run_case, per repetition
  std::optional<SelectionSummary> selection;               // run_mixture_study
  std::vector<std::optional<Selection>> selections;        // run_mixture_study, per repetition
  std::vector<FailedRepetition> failures;
  double wall_seconds = 0.0;
};

inline std::string describe(const Generator& g) {
  if (const auto* d = std::get_if<DistSpec>(&g)) return describe(*d);
  const auto& m = std::get<Mixture>(g);
  return describe(m.body) + "x" + std::to_string(m.n_body) + "+" + describe(m.tail) + "x" +
         std::to_string(m.n_tail);
}

inline std::size_t generator_size(const Generator& g, std::size_t n_obs) {
  if (const auto* m = std::get_if<Mixture>(&g)) return m->n_body + m->n_tail;
  return n_obs;
}

/// One dataset from the generator. Mixture blocks use independent streams.
inline std::vector<double> generate(const Generator& g, std::size_t n_obs, std::uint64_t seed) {
  if (const auto* d = std::get_if<DistSpec>(&g)) return sample(*d, n_obs, seed).values;
  const auto& m = std::get<Mixture>(g);
  require(m.n_body >= 1 && m.n_tail >= 1, "Mixture: both blocks need at least one draw");
  std::vector<double> out = sample(m.body, m.n_body, derive_seed(seed, 0)).values;
  const double splice = *std::max_element(out.begin(), out.end());
  if (!(splice > 0.0))
    fail(ErrorKind::data, "Mixture: body maximum " + std::to_string(splice) +
                              " is not positive; cannot splice a relative-excess tail");
  const std::vector<double> tail = sample(m.tail, m.n_tail, derive_seed(seed, 1)).values;
  for (double y : tail) out.push_back(splice * y);
  return out;
}

/// Data seed of repetition k.
constexpr std::uint64_t data_seed(std::uint64_t master, std::size_t k) noexcept {
  return derive_seed(master, k);
}

/// Master Gibbs seed of repetition k; rows then split it per rank.
constexpr std::uint64_t chain_seed(std::uint64_t master, std::size_t k) noexcept {
  return derive_seed(master ^ 0x5CA11ED5CA11ED5ULL, k);
}

namespace detail {

/// Runs body(k) for k in [0, count) on `threads` workers.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) body(k);
    });
  }
}

inline void validate_common(const ExperimentSpec& spec, std::size_t n) {
  require(n >= 20, "ExperimentSpec: n_obs must be >= 20");
  require(spec.repetitions >= 1, "ExperimentSpec: repetitions must be >= 1");
  spec.gibbs.validate();
}

/// Failures beyond 1% of repetitions abort the run.
inline void check_failures(const ExperimentResult& r, std::size_t repetitions) {
  if (r.failures.size() * 100 > repetitions) {
    fail(ErrorKind::degenerate,
         std::to_string(r.failures.size()) + " of " + std::to_string(repetitions) +
             " repetitions failed; first: " + r.failures.front().message);
  }
}

template <class Record, class Work>
void run_repetitions(const ExperimentSpec& spec, std::size_t n,
                     std::vector<std::optional<Record>>& records,
                     std::vector<FailedRepetition>& failures, Work work) {
  records.assign(spec.repetitions, std::nullopt);
  std::vector<std::string> errors(spec.repetitions);
  parallel_for(spec.repetitions, spec.threads, [&](std::size_t k) {
    try {
      const std::vector<double> data = generate(spec.generator, n, data_seed(spec.master_seed, k));
      records[k] = work(data, k);
    } catch (const std::exception& e) {
      errors[k] = e.what();
      if (errors[k].empty()) errors[k] = "unknown error";
    }
  });
  for (std::size_t k = 0; k < spec.repetitions; ++k)
    if (!records[k]) failures.push_back({k, errors[k]});
}

}  // namespace detail

/// Per-rank means over the successful repetitions.
inline std::vector<AveragedRow> average_curves(
    const std::vector<std::optional<ThresholdCurve>>& curves) {
  std::map<std::size_t, AveragedRow> acc;
  for (const auto& c : curves) {
    if (!c) continue;
    for (const CurveRow& row : c->rows) {
      AveragedRow& a = acc[row.rank];
      a.rank = row.rank;
      a.u += row.u;
      a.n_exceed += static_cast<double>(row.n_exceed);
      a.evi_sp += row.evi_sp;
      a.evi_tlpa += row.evi_tlpa;
      a.alpha_hat += row.alpha_hat;
      ++a.count;
    }
  }
  std::vector<AveragedRow> out;
  out.reserve(acc.size());
  for (auto& [rank, a] : acc) {
    const double c = static_cast<double>(a.count);
    a.u /= c;
    a.n_exceed /= c;
    a.evi_sp /= c;
    a.evi_tlpa /= c;
    a.alpha_hat /= c;
    out.push_back(a);
  }
  return out;
}

inline SelectionSummary average_selections(const std::vector<std::optional<Selection>>& sels) {
  SelectionSummary s;
  for (const auto& sel : sels) {
    if (!sel) continue;
    s.mean_rank += static_cast<double>(sel->rank_sharp);
    s.mean_evi += sel->evi;
    s.mean_u += sel->u_sharp;
    ++s.count;
  }
  if (s.count > 0) {
    const double c = static_cast<double>(s.count);
    s.mean_rank /= c;
    s.mean_evi /= c;
    s.mean_u /= c;
  }
  return s;
}

/// Repeated scans of a single-family sample; emits the repetition-averaged
/// threshold curve.
inline ExperimentResult run_case(const ExperimentSpec& spec) {
  require(std::holds_alternative<DistSpec>(spec.generator),
          "run_case: generator must be a single distribution");
  const std::size_t n = spec.n_obs;
  detail::validate_common(spec, n);
  validate(std::get<DistSpec>(spec.generator));
  const RankRange ranks = spec.ranks.value_or(full_rank_range(n));
  require(ranks.first >= 1 && ranks.first <= ranks.last && ranks.last <= n - 2,
          "run_case: rank range outside [1, n - 2]");

  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.spec_echo = describe(spec.generator);
  detail::run_repetitions(spec, n, result.curves, result.failures,
                          [&](const std::vector<double>& data, std::size_t k) {
                            GibbsConfig cfg = spec.gibbs;
                            cfg.seed = chain_seed(spec.master_seed, k);
                            return scan(data, ranks, cfg);
                          });
  detail::check_failures(result, spec.repetitions);
  result.curve = average_curves(result.curves);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

/// Repeated automatic threshold selection on freshly generated datasets.
/// Accepts any generator; run_mixture_study restricts it to mixtures.
inline ExperimentResult run_selection_study(const ExperimentSpec& spec) {
  const std::size_t n = generator_size(spec.generator, spec.n_obs);
  detail::validate_common(spec, n);
  const SelectionGrid grid = spec.grid.value_or(default_selection_grid(n));
  validate(grid, n);

  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.spec_echo = describe(spec.generator);
  detail::run_repetitions(spec, n, result.selections, result.failures,
                          [&](const std::vector<double>& data, std::size_t) {
                            return select(data, grid, spec.strategy);
                          });
  detail::check_failures(result, spec.repetitions);
  result.selection = average_selections(result.selections);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

inline ExperimentResult run_mixture_study(const ExperimentSpec& spec) {
  require(std::holds_alternative<Mixture>(spec.generator),
          "run_mixture_study: generator must be a mixture");
  return run_selection_study(spec);
}

/// Named setups: the three simulation cases and the four selection datasets.
inline ExperimentSpec preset(const std::string& name) {
  ExperimentSpec spec;
  if (name == "case1") {
    spec.generator = DistSpec{Frechet{2.0}};
    spec.n_obs = 300;
  } else if (name == "case2") {
    spec.generator = DistSpec{Frechet{1.33}};
    spec.n_obs = 300;
  } else if (name == "case3") {
    spec.generator = DistSpec{BurrXII{1.0, 1.0, 1.0}};
    spec.n_obs = 300;
  } else if (name == "dataset-i") {
    spec.generator = DistSpec{Frechet{2.0}};
    spec.n_obs = 300;
  } else if (name == "dataset-ii") {
    spec.generator = DistSpec{BurrXII{1.0, 1.0, 1.0}};
    spec.n_obs = 300;
  } else if (name == "dataset-iii") {
    spec.generator = Mixture{Normal{5.0, 1.0}, 500, StrictPareto{5.0}, 100};
    spec.n_obs = 600;
  } else if (name == "dataset-iv") {
    spec.generator = Mixture{Normal{10.0, 16.0}, 500, StrictPareto{2.0}, 100};
    spec.n_obs = 600;
  } else {
    fail(ErrorKind::invalid_argument, "unknown preset '" + name + "'");
  }
  return spec;
}

/// Whether a preset is a threshold scan (case*) or a selection study.
inline bool preset_is_scan(const std::string& name) { return name.rfind("case", 0) == 0; }

}  // namespace tlpot

#endif  // TLPOT_EXPERIMENTS_HPP
