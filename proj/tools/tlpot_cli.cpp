// tlpot: threshold selection for heavy-tailed data with the Topp-Leone
// Pareto model.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric/degenerate error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tlpot/tlpot.hpp"

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

struct InputArgs {
  std::string input;
  std::string column = "0";
};

struct GibbsArgs {
  std::size_t pairs = 2000;
  std::size_t burn_in = 0;

  tlpot::GibbsConfig config(std::uint64_t seed) const {
    tlpot::GibbsConfig cfg;
    cfg.n_pairs = pairs;
    cfg.burn_in = burn_in;
    cfg.seed = seed;
    return cfg;
  }
};

void add_input(CLI::App* cmd, InputArgs& in) {
  cmd->add_option("-i,--input", in.input, "CSV file with the observations")->required();
  cmd->add_option("-c,--column", in.column, "Column name or 0-based index")
      ->capture_default_str();
}

void add_gibbs(CLI::App* cmd, GibbsArgs& g) {
  cmd->add_option("--pairs", g.pairs, "Gibbs pairs per threshold")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--burn-in", g.burn_in, "Leading pairs dropped from the means")
      ->capture_default_str();
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary | std::ios::trunc);
  if (!f) tlpot::fail(tlpot::ErrorKind::data, "cannot write '" + g.out + "'");
  f << text;
}

std::vector<double> sorted_input(const InputArgs& in) {
  return tlpot::sorted_copy(tlpot::ingest_csv(in.input, in.column).values);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peaks-over-threshold threshold selection with the Topp-Leone Pareto model"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("-o,--out", g.out, "Output path (standard output when omitted)");
  app.add_option("--format", g.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv"}));

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a dataset");
  std::string dist, body, tail;
  std::size_t n = 300, n_body = 0, n_tail = 0;
  sim->add_option("--dist", dist, "sp:G | tlpa:A,G | frechet:G | burr:L,T,E | normal:MU,VAR");
  sim->add_option("-n,--n", n, "Sample size")->capture_default_str();
  sim->add_option("--body", body, "Mixture body distribution");
  sim->add_option("--n-body", n_body, "Mixture body size");
  sim->add_option("--tail", tail, "Mixture tail distribution (scaled by the body maximum)");
  sim->add_option("--n-tail", n_tail, "Mixture tail size");

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "EVI and alpha estimates at every threshold rank");
  InputArgs scan_in;
  GibbsArgs scan_gibbs;
  std::optional<std::size_t> first_rank, last_rank;
  add_input(scan_cmd, scan_in);
  add_gibbs(scan_cmd, scan_gibbs);
  scan_cmd->add_option("--first-rank", first_rank, "First threshold rank (1-based)");
  scan_cmd->add_option("--last-rank", last_rank, "Last threshold rank");

  // select
  auto* sel_cmd = app.add_subcommand("select", "Choose the threshold minimizing (E(alpha)-1)^2");
  InputArgs sel_in;
  std::string strategy = tlpot::to_string(tlpot::default_strategy);
  std::size_t min_exceed = 10, gamma_points = 200;
  double gamma_min = 0.05, gamma_max = 10.0;
  add_input(sel_cmd, sel_in);
  sel_cmd->add_option("--strategy", strategy, "grid or profile")
      ->capture_default_str()
      ->check(CLI::IsMember({"grid", "profile"}));
  sel_cmd->add_option("--min-exceedances", min_exceed)->capture_default_str();
  sel_cmd->add_option("--gamma-min", gamma_min)->capture_default_str();
  sel_cmd->add_option("--gamma-max", gamma_max)->capture_default_str();
  sel_cmd->add_option("--gamma-points", gamma_points)->capture_default_str();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "SP and TLPa estimates at one threshold");
  InputArgs fit_in;
  GibbsArgs fit_gibbs;
  std::size_t fit_rank = 0;
  add_input(fit_cmd, fit_in);
  add_gibbs(fit_cmd, fit_gibbs);
  fit_cmd->add_option("-r,--rank", fit_rank, "Threshold rank (1-based)")->required();

  // qq
  auto* qq_cmd = app.add_subcommand("qq", "Log quantile-quantile data above a threshold");
  InputArgs qq_in;
  GibbsArgs qq_gibbs;
  std::size_t qq_rank = 0;
  std::string plotting = "weibull";
  add_input(qq_cmd, qq_in);
  add_gibbs(qq_cmd, qq_gibbs);
  qq_cmd->add_option("-r,--rank", qq_rank, "Threshold rank (1-based)")->required();
  qq_cmd->add_option("--plotting", plotting, "weibull (i/(n+1)) or hazen ((i-0.5)/n)")
      ->capture_default_str()
      ->check(CLI::IsMember({"weibull", "hazen"}));

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo reproduction runs");
  std::string preset;
  std::size_t repetitions = 1000;
  unsigned threads = 1;
  std::string raw_path;
  GibbsArgs exp_gibbs;
  std::optional<std::size_t> exp_first, exp_last;
  std::string exp_strategy = tlpot::to_string(tlpot::default_strategy);
  exp_cmd->add_option("--preset", preset, "case1|case2|case3|dataset-i|dataset-ii|dataset-iii|dataset-iv")
      ->required()
      ->check(CLI::IsMember({"case1", "case2", "case3", "dataset-i", "dataset-ii", "dataset-iii",
                             "dataset-iv"}));
  exp_cmd->add_option("--repetitions", repetitions)->capture_default_str()->check(CLI::PositiveNumber);
  exp_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  exp_cmd->add_option("--raw", raw_path, "Also write per-repetition records to this path");
  exp_cmd->add_option("--first-rank", exp_first, "First scanned rank (case presets)");
  exp_cmd->add_option("--last-rank", exp_last, "Last scanned rank (case presets)");
  exp_cmd->add_option("--strategy", exp_strategy, "Selection strategy (dataset presets)")
      ->capture_default_str()
      ->check(CLI::IsMember({"grid", "profile"}));
  add_gibbs(exp_cmd, exp_gibbs);

  // hist
  auto* hist_cmd = app.add_subcommand("hist", "Histogram bin counts with the chosen threshold");
  InputArgs hist_in;
  std::optional<std::size_t> bins, hist_rank;
  add_input(hist_cmd, hist_in);
  hist_cmd->add_option("--bins", bins, "Bin count (Freedman-Diaconis when omitted)");
  hist_cmd->add_option("-r,--rank", hist_rank, "Threshold rank to mark (selected when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    std::ostringstream out;
    if (*sim) {
      if (!dist.empty()) {
        tlpot::write_values(out, tlpot::sample(tlpot::parse_dist(dist), n, g.seed).values);
      } else if (!body.empty() && !tail.empty()) {
        const tlpot::Mixture mix{tlpot::parse_dist(body), n_body, tlpot::parse_dist(tail), n_tail};
        tlpot::write_values(out, tlpot::generate(mix, n_body + n_tail, g.seed));
      } else {
        std::cerr << "simulate: give --dist, or --body/--n-body/--tail/--n-tail\n" << sim->help();
        return 1;
      }
    } else if (*scan_cmd) {
      const auto data = sorted_input(scan_in);
      tlpot::RankRange ranks = tlpot::full_rank_range(data.size());
      if (first_rank) ranks.first = *first_rank;
      if (last_rank) ranks.last = *last_rank;
      const auto curve = tlpot::scan(data, ranks, scan_gibbs.config(g.seed));
      for (const auto& s : curve.skipped)
        std::cerr << "scan: rank " << s.rank << " skipped: " << s.reason << '\n';
      tlpot::write_curve(out, curve);
    } else if (*sel_cmd) {
      const auto data = sorted_input(sel_in);
      const auto grid = tlpot::default_selection_grid(data.size(), min_exceed, gamma_min, gamma_max,
                                                      gamma_points);
      tlpot::write_selection(out, tlpot::select(data, grid, tlpot::parse_strategy(strategy)));
    } else if (*fit_cmd) {
      const auto data = sorted_input(fit_in);
      const auto s = tlpot::make_excesses(data, fit_rank);
      const auto sp = tlpot::sp_posterior(s);
      const auto tl = tlpot::estimate_tlpa(s, fit_gibbs.config(tlpot::rank_seed(g.seed, fit_rank)));
      tlpot::CsvWriter w(out);
      w.header("rank", "u", "n_exceed", "gamma_sp", "evi_sp", "alpha_hat", "gamma_tlpa", "evi_tlpa");
      w.row(fit_rank, s.threshold(), s.size(), sp.gamma_hat, sp.evi, tl.alpha_hat, tl.gamma_hat, tl.evi);
    } else if (*qq_cmd) {
      const auto data = sorted_input(qq_in);
      const auto s = tlpot::make_excesses(data, qq_rank);
      const auto sp = tlpot::sp_posterior(s);
      const auto tl = tlpot::estimate_tlpa(s, qq_gibbs.config(tlpot::rank_seed(g.seed, qq_rank)));
      const auto pp = plotting == "hazen" ? tlpot::PlottingPosition::hazen
                                          : tlpot::PlottingPosition::weibull;
      tlpot::write_qq(out, tlpot::qq_data(s, s.threshold(), sp, tl, pp));
    } else if (*exp_cmd) {
      tlpot::ExperimentSpec spec = tlpot::preset(preset);
      spec.repetitions = repetitions;
      spec.threads = threads;
      spec.master_seed = g.seed;
      spec.gibbs = exp_gibbs.config(0);
      spec.strategy = tlpot::parse_strategy(exp_strategy);
      std::ostringstream raw;
      tlpot::ExperimentResult result;
      if (tlpot::preset_is_scan(preset)) {
        if (exp_first || exp_last) {
          tlpot::RankRange r = tlpot::full_rank_range(spec.n_obs);
          if (exp_first) r.first = *exp_first;
          if (exp_last) r.last = *exp_last;
          spec.ranks = r;
        }
        result = tlpot::run_case(spec);
        tlpot::write_averaged_curve(out, result.curve);
        tlpot::write_curve_records(raw, result);
      } else {
        result = tlpot::run_selection_study(spec);
        tlpot::write_selection_summary(out, result);
        tlpot::write_selection_records(raw, result);
      }
      for (const auto& f : result.failures)
        std::cerr << "experiment: repetition " << f.repetition << " failed: " << f.message << '\n';
      std::cerr << "experiment: " << result.spec_echo << ", " << repetitions << " repetitions, "
                << result.wall_seconds << " s\n";
      if (!raw_path.empty()) emit(Globals{g.seed, raw_path, g.format}, raw.str());
    } else if (*hist_cmd) {
      const auto data = sorted_input(hist_in);
      double u = 0.0;
      if (hist_rank) {
        u = tlpot::make_excesses(data, *hist_rank).threshold();
      } else {
        u = tlpot::select(data, tlpot::default_selection_grid(data.size())).u_sharp;
      }
      tlpot::write_histogram(out, tlpot::histogram(data, bins), u);
    }
    emit(g, out.str());
  } catch (const tlpot::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case tlpot::ErrorKind::degenerate:
        return 3;
      case tlpot::ErrorKind::invalid_argument:
      case tlpot::ErrorKind::data:
        return 2;
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
