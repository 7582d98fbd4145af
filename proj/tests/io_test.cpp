#include "tlpot/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "tlpot/distributions.hpp"

namespace tlpot {
namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::path(::testing::TempDir()) / name;
  std::ofstream(path) << body;
  return path.string();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::invalid_argument;
}

TEST(IngestCsv, HeaderByName) {
  const auto path = write_temp("wave.csv", "wave\n6.1\n7.2\n");
  const Dataset ds = ingest_csv(path, "wave");
  EXPECT_EQ(ds.values, (std::vector<double>{6.1, 7.2}));
  EXPECT_EQ(ds.name, "wave");
}

TEST(IngestCsv, IndexWithAndWithoutHeader) {
  const auto headed = write_temp("two.csv", "date,hs\n2001-01-01,3.5\n2001-01-02,4\n");
  EXPECT_EQ(ingest_csv(headed, "1").values, (std::vector<double>{3.5, 4.0}));
  EXPECT_EQ(ingest_csv(headed, "hs").values, (std::vector<double>{3.5, 4.0}));
  const auto bare = write_temp("bare.csv", "1.5\n2.5\r\n\n3.5\n");
  EXPECT_EQ(ingest_csv(bare, "0").values, (std::vector<double>{1.5, 2.5, 3.5}));
}

TEST(IngestCsv, NonNumericRowIsReportedByLine) {
  const auto path = write_temp("bad.csv", "wave\n1\n2\n3\nNA\n5\n");
  try {
    ingest_csv(path, "wave");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
    EXPECT_NE(std::string(e.what()).find("row 5"), std::string::npos) << e.what();
  }
}

TEST(IngestCsv, Errors) {
  EXPECT_EQ(kind_of([] { ingest_csv("/nonexistent/dir/x.csv", "0"); }), ErrorKind::data);
  const auto path = write_temp("col.csv", "a,b\n1,2\n");
  EXPECT_EQ(kind_of([&] { ingest_csv(path, "c"); }), ErrorKind::data);
  EXPECT_EQ(kind_of([&] { ingest_csv(path, "5"); }), ErrorKind::data);
  const auto empty = write_temp("empty.csv", "");
  EXPECT_EQ(kind_of([&] { ingest_csv(empty, "0"); }), ErrorKind::data);
  const auto header_only = write_temp("hdr.csv", "wave\n");
  EXPECT_EQ(kind_of([&] { ingest_csv(header_only, "wave"); }), ErrorKind::data);
}

TEST(FormatNumber, RoundTripsThroughIngest) {
  std::mt19937_64 eng(5);
  std::vector<double> values;
  std::exponential_distribution<double> ex(0.3);
  for (int i = 0; i < 500; ++i) values.push_back(ex(eng) * std::pow(10.0, i % 7 - 3));
  values.push_back(1e-300);
  values.push_back(0.1);
  std::ostringstream out;
  write_values(out, values);
  const auto path = write_temp("round.csv", out.str());
  EXPECT_EQ(ingest_csv(path, "value").values, values);
}

TEST(ParseDist, Families) {
  EXPECT_EQ(describe(parse_dist("sp:5")), "sp:5");
  EXPECT_EQ(describe(parse_dist("tlpa:2,1")), "tlpa:2,1");
  EXPECT_EQ(describe(parse_dist("frechet:1.33")), "frechet:1.33");
  EXPECT_EQ(describe(parse_dist("burr:1,1,1")), "burr:1,1,1");
  EXPECT_EQ(describe(parse_dist("normal:10,16")), "normal:10,16");
  EXPECT_THROW(parse_dist("frechet"), Error);
  EXPECT_THROW(parse_dist("frechet:1,2"), Error);
  EXPECT_THROW(parse_dist("gumbel:1"), Error);
  EXPECT_THROW(parse_dist("sp:x"), Error);
  EXPECT_THROW(parse_dist("sp:-1"), Error);
}

TEST(QQ, TwoPointsUseThirds) {
  const auto s = ExceedanceSample::from_excesses({3.0, 1.5}, 2.0);
  const SPFit sp = sp_posterior(s);
  const TLPaFit tl{2.0, 1.0, 0.5};
  const QQTable t = qq_data(s, 2.0, sp, tl);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_DOUBLE_EQ(t[0].log_sorted_obs, std::log(3.0));
  EXPECT_DOUBLE_EQ(t[1].log_sorted_obs, std::log(6.0));
  for (std::size_t i = 0; i < 2; ++i) {
    const double p = (i + 1) / 3.0;
    EXPECT_NEAR(t[i].log_q_sp, std::log(2.0) - std::log(1.0 - p) / sp.gamma_hat, 1e-14);
    // TLPa quantile: y = (1 - p^{1/alpha})^{-1/(2 gamma)}
    EXPECT_NEAR(t[i].log_q_tlpa, std::log(2.0) + std::log(quantile(TLPa{2.0, 1.0}, p)), 1e-14);
  }
}

TEST(QQ, AlphaOneMatchesStrictPareto) {
  const auto s = ExceedanceSample::from_excesses(sample(StrictPareto{3.0}, 50, 4).values, 1.7);
  const SPFit sp = sp_posterior(s);
  const TLPaFit tl{1.0, sp.gamma_hat / 2.0, 1.0 / sp.gamma_hat};
  for (auto pp : {PlottingPosition::weibull, PlottingPosition::hazen})
    for (const QQRow& r : qq_data(s, 1.7, sp, tl, pp)) EXPECT_NEAR(r.log_q_sp, r.log_q_tlpa, 1e-12);
}

TEST(QQ, StrictParetoSampleLiesOnTheLine) {
  const auto s = ExceedanceSample::from_excesses(sample(StrictPareto{3.0}, 500, 8).values);
  const QQTable t = qq_data(s, 1.0, sp_posterior(s), TLPaFit{1.0, 1.5, 1.0 / 3.0});
  double worst = 0.0;
  for (std::size_t i = 0; i + 5 < t.size(); ++i)
    worst = std::max(worst, std::abs(t[i].log_sorted_obs - t[i].log_q_sp));
  EXPECT_LT(worst, 0.15);
}

TEST(Histogram, CountsEveryValue) {
  const std::vector<double> data = sample(Normal{0.0, 1.0}, 1000, 2).values;
  const Histogram h = histogram(data);
  std::size_t total = 0;
  for (auto c : h.counts) total += c;
  EXPECT_EQ(total, 1000u);
  EXPECT_EQ(h.edges.size(), h.counts.size() + 1);
  EXPECT_EQ(h.edges.front(), *std::min_element(data.begin(), data.end()));
  EXPECT_EQ(h.edges.back(), *std::max_element(data.begin(), data.end()));
}

TEST(Histogram, FixedBinsAndMarker) {
  const std::vector<double> data = {0.0, 1.0, 2.0, 3.0, 4.0};
  const Histogram h = histogram(data, 4);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{1, 1, 1, 2}));
  std::ostringstream out;
  write_histogram(out, h, 2.5);
  EXPECT_EQ(out.str(),
            "bin_lower,bin_upper,count,threshold_marker\n0,1,1,0\n1,2,1,0\n2,3,1,1\n3,4,2,0\n");
  std::ostringstream edge;
  write_histogram(edge, h, 4.0);
  EXPECT_NE(edge.str().find("3,4,2,1"), std::string::npos);
}

TEST(Histogram, DegenerateInputs) {
  const std::vector<double> same(10, 3.0);
  EXPECT_EQ(freedman_diaconis_bins(same), 1u);
  EXPECT_EQ(histogram(same).counts, std::vector<std::size_t>{10});
  EXPECT_THROW(histogram(std::vector<double>{}), Error);
  EXPECT_THROW(histogram(same, 0), Error);
}

TEST(Writers, CurveSchema) {
  ThresholdCurve c;
  c.rows.push_back({5, 1.25, 10, 0.5, 0.4, 1.1});
  std::ostringstream out;
  write_curve(out, c);
  EXPECT_EQ(out.str(), "rank,u,n_exceed,evi_sp,evi_tlpa,alpha_hat\n5,1.25,10,0.5,0.4,1.1\n");
}

TEST(Writers, SelectionSchema) {
  std::ostringstream out;
  write_selection(out, Selection{2.0, 450, 7.5, 150, 0.25, 1e-6});
  EXPECT_EQ(out.str(), "gamma_sharp,rank,u,evi,loss\n2,450,7.5,0.25,1e-06\n");
}

}  // namespace
}  // namespace tlpot
