#include "tlpot/gibbs.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "tlpot/distributions.hpp"
#include "tlpot/threshold.hpp"

namespace tlpot {
namespace {

ExceedanceSample sp_excesses(double gamma, std::size_t n, std::uint64_t seed) {
  return ExceedanceSample::from_excesses(sample(StrictPareto{gamma}, n, seed).values);
}

TEST(RunChain, SameSeedSameChain) {
  const auto s = sp_excesses(4.0, 200, 1);
  GibbsConfig cfg;
  cfg.n_pairs = 500;
  cfg.seed = 11;
  EXPECT_EQ(run_chain(s, cfg).pairs, run_chain(s, cfg).pairs);
  GibbsConfig other = cfg;
  other.seed = 12;
  EXPECT_NE(run_chain(s, cfg).pairs, run_chain(s, other).pairs);
}

TEST(RunChain, SinglePairIsAllowed) {
  GibbsConfig cfg;
  cfg.n_pairs = 1;
  const Chain c = run_chain(sp_excesses(4.0, 50, 2), cfg);
  ASSERT_EQ(c.pairs.size(), 1u);
  EXPECT_GT(c.pairs[0].alpha, 0.0);
  EXPECT_GT(c.pairs[0].gamma, 0.0);
}

TEST(RunChain, DrawsArePositiveAndFinite) {
  const Chain c = run_chain(sp_excesses(2.0, 300, 3), GibbsConfig{});
  ASSERT_EQ(c.pairs.size(), 2000u);
  for (const Draw& d : c.pairs) {
    EXPECT_TRUE(d.alpha > 0.0 && std::isfinite(d.alpha));
    EXPECT_TRUE(d.gamma > 0.0 && std::isfinite(d.gamma));
  }
}

TEST(RunChain, ConfigErrors) {
  const auto s = sp_excesses(4.0, 50, 4);
  GibbsConfig zero;
  zero.n_pairs = 0;
  EXPECT_THROW(run_chain(s, zero), Error);
  GibbsConfig burn;
  burn.n_pairs = 10;
  burn.burn_in = 10;
  EXPECT_THROW(run_chain(s, burn), Error);
  GibbsConfig init;
  init.gamma_init = -1.0;
  EXPECT_THROW(run_chain(s, init), Error);
  EXPECT_THROW(run_chain(ExceedanceSample::from_excesses({2.0}), GibbsConfig{}), Error);
}

TEST(RunChain, GammaInitChangesTheChain) {
  const auto s = sp_excesses(4.0, 100, 5);
  GibbsConfig a, b;
  a.n_pairs = b.n_pairs = 5;
  b.gamma_init = 0.5;
  EXPECT_NE(run_chain(s, a).pairs, run_chain(s, b).pairs);
}

TEST(Summarize, ConstantChain) {
  Chain c;
  c.pairs.assign(10, Draw{1.5, 2.0});
  const TLPaFit f = summarize(c, 0);
  EXPECT_DOUBLE_EQ(f.alpha_hat, 1.5);
  EXPECT_DOUBLE_EQ(f.gamma_hat, 2.0);
  EXPECT_DOUBLE_EQ(f.evi, 0.25);
}

TEST(Summarize, BurnInDropsLeadingPairs) {
  Chain c;
  c.pairs = {{100.0, 100.0}, {1.0, 1.0}, {3.0, 3.0}};
  const TLPaFit f = summarize(c, 1);
  EXPECT_DOUBLE_EQ(f.alpha_hat, 2.0);
  EXPECT_DOUBLE_EQ(f.evi, 0.25);
  EXPECT_THROW(summarize(c, 3), Error);
}

TEST(EstimateTlpa, StrictParetoDataGivesAlphaNearOne) {
  GibbsConfig cfg;
  cfg.seed = 77;
  const TLPaFit f = estimate_tlpa(sp_excesses(4.0, 2000, 21), cfg);
  EXPECT_GE(f.alpha_hat, 0.85);
  EXPECT_LE(f.alpha_hat, 1.15);
  EXPECT_GE(f.gamma_hat, 1.8);
  EXPECT_LE(f.gamma_hat, 2.2);
  EXPECT_GE(f.evi, 0.22);
  EXPECT_LE(f.evi, 0.28);
}

TEST(EstimateTlpa, FrechetAtRank250) {
  // 50 excesses of a Frechet(2) sample; true EVI 0.5.
  double sum = 0.0;
  int ok = 0, diverged = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    const std::vector<double> sorted = sorted_copy(sample(Frechet{2.0}, 300, 1000 + rep).values);
    GibbsConfig cfg;
    cfg.seed = rep;
    try {
      sum += estimate_tlpa(make_excesses(sorted, 250), cfg).evi;
      ++ok;
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::degenerate) << e.what();
      ++diverged;
    }
  }
  ASSERT_GT(ok, 150);
  EXPECT_NEAR(sum / ok, 0.5, 0.1) << diverged << " chains diverged";
}

}  // namespace
}  // namespace tlpot
