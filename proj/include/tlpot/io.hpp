#ifndef TLPOT_IO_HPP
#define TLPOT_IO_HPP

// Dataset ingestion and plot-ready CSV emission.
//
// Output is UTF-8 with LF line endings, a header row and comma delimiters.
// Numbers use the shortest representation that round-trips exactly.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tlpot/distributions.hpp"
#include "tlpot/error.hpp"
#include "tlpot/experiments.hpp"
#include "tlpot/gibbs.hpp"
#include "tlpot/posterior.hpp"
#include "tlpot/threshold.hpp"

namespace tlpot {

struct Dataset {
  std::string name;
  std::vector<double> values;
  std::string source;
};

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\"";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos
                                              ? std::string_view::npos
                                              : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Reads one numeric column. `column` is a header name or a 0-based index.
/// A first row whose target cell is not numeric is taken as the header.
/// Row numbers in errors are 1-based file lines.
inline Dataset ingest_csv(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::data, "cannot open '" + path + "'");

  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  for (std::size_t row = 1; std::getline(in, line); ++row) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    lines.emplace_back(row, line);
  }
  if (lines.empty()) fail(ErrorKind::data, "'" + path + "' is empty");

  const auto first = detail::split_fields(lines.front().second);
  const auto index = detail::parse_index(column);
  std::optional<std::size_t> col;
  bool header = false;
  // A name match wins over an index interpretation.
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i] == column) {
      col = i;
      header = true;
      break;
    }
  }
  if (!col && index) {
    col = *index;
    header = *col < first.size() && !detail::parse_double(first[*col]);
  }
  if (!col) fail(ErrorKind::data, "column '" + column + "' not found in '" + path + "'");

  Dataset ds;
  ds.name = header ? std::string(first[*col]) : "column " + std::to_string(*col);
  ds.source = path;
  for (std::size_t i = header ? 1 : 0; i < lines.size(); ++i) {
    const auto& [row, text] = lines[i];
    const auto fields = detail::split_fields(text);
    if (*col >= fields.size())
      fail(ErrorKind::data, path + ": row " + std::to_string(row) + " has no column " +
                                std::to_string(*col));
    const auto v = detail::parse_double(fields[*col]);
    if (!v || !std::isfinite(*v))
      fail(ErrorKind::data, path + ": row " + std::to_string(row) + ": non-numeric value '" +
                                std::string(fields[*col]) + "'");
    ds.values.push_back(*v);
  }
  if (ds.values.empty()) fail(ErrorKind::data, "'" + path + "' has no data rows");
  return ds;
}

/// "frechet:2", "sp:5", "tlpa:2,1", "burr:1,1,1", "normal:5,1" (mean, variance).
inline DistSpec parse_dist(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    fail(ErrorKind::invalid_argument, "distribution '" + text + "' lacks ':' parameters");
  const std::string family = text.substr(0, colon);
  std::vector<double> p;
  for (auto f : detail::split_fields(std::string_view(text).substr(colon + 1))) {
    const auto v = detail::parse_double(f);
    if (!v) fail(ErrorKind::invalid_argument, "bad parameter '" + std::string(f) + "' in '" + text + "'");
    p.push_back(*v);
  }
  auto want = [&](std::size_t k) {
    if (p.size() != k)
      fail(ErrorKind::invalid_argument, family + " takes " + std::to_string(k) + " parameter(s)");
  };
  DistSpec spec;
  if (family == "sp") {
    want(1);
    spec = StrictPareto{p[0]};
  } else if (family == "tlpa") {
    want(2);
    spec = TLPa{p[0], p[1]};
  } else if (family == "frechet") {
    want(1);
    spec = Frechet{p[0]};
  } else if (family == "burr") {
    want(3);
    spec = BurrXII{p[0], p[1], p[2]};
  } else if (family == "normal") {
    want(2);
    spec = Normal{p[0], p[1]};
  } else {
    fail(ErrorKind::invalid_argument, "unknown distribution family '" + family + "'");
  }
  validate(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// QQ data

struct QQRow {
  double log_sorted_obs;
  double log_q_sp;
  double log_q_tlpa;
};

using QQTable = std::vector<QQRow>;

/// Plotting position of the i-th (1-based) of n sorted values.
enum class PlottingPosition {
  weibull,  // i / (n + 1)
  hazen,    // (i - 0.5) / n
};

inline double plotting_position(std::size_t i, std::size_t n, PlottingPosition pp) {
  const double di = static_cast<double>(i);
  const double dn = static_cast<double>(n);
  return pp == PlottingPosition::weibull ? di / (dn + 1.0) : (di - 0.5) / dn;
}

/// Log model quantiles against log sorted observations above u. Both model
/// quantile columns include the + log u shift.
inline QQTable qq_data(const ExceedanceSample& s, double u, const SPFit& sp, const TLPaFit& tlpa,
                       PlottingPosition pp = PlottingPosition::weibull) {
  require(u > 0.0, "qq_data: threshold must be positive");
  require(sp.gamma_hat > 0.0 && tlpa.gamma_hat > 0.0 && tlpa.alpha_hat > 0.0,
          "qq_data: fitted parameters must be positive");
  std::vector<double> y(s.values().begin(), s.values().end());
  std::sort(y.begin(), y.end());
  const double log_u = std::log(u);
  QQTable out;
  out.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = plotting_position(i + 1, y.size(), pp);
    const double q_sp = -std::log1p(-p) / sp.gamma_hat;
    const double q_tl = -std::log(-std::expm1(std::log(p) / tlpa.alpha_hat)) / (2.0 * tlpa.gamma_hat);
    out.push_back({std::log(u * y[i]), q_sp + log_u, q_tl + log_u});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Histogram

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::size_t> counts;
};

inline double sample_quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Freedman-Diaconis bin count: width 2 IQR n^{-1/3}. Falls back to
/// Sturges when the IQR is zero.
inline std::size_t freedman_diaconis_bins(std::span<const double> data) {
  require(!data.empty(), "freedman_diaconis_bins: empty data");
  std::vector<double> s(data.begin(), data.end());
  std::sort(s.begin(), s.end());
  const double range = s.back() - s.front();
  if (range <= 0.0) return 1;
  const double iqr = sample_quantile(s, 0.75) - sample_quantile(s, 0.25);
  const double n = static_cast<double>(s.size());
  if (iqr <= 0.0) return static_cast<std::size_t>(std::ceil(std::log2(n))) + 1;
  const double width = 2.0 * iqr / std::cbrt(n);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / width)));
}

/// Equal-width bins over [min, max]; the last bin is closed on the right.
inline Histogram histogram(std::span<const double> data, std::optional<std::size_t> bins = {}) {
  require(!data.empty(), "histogram: empty data");
  const std::size_t k = bins.value_or(freedman_diaconis_bins(data));
  require(k >= 1, "histogram: bin count must be >= 1");
  const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
  const double lo = *mn;
  const double hi = *mx > *mn ? *mx : *mn + 1.0;
  Histogram h;
  h.edges.resize(k + 1);
  for (std::size_t i = 0; i <= k; ++i)
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k);
  h.edges.back() = hi;
  h.counts.assign(k, 0);
  for (double v : data) {
    auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(k));
    ++h.counts[std::min(b, k - 1)];
  }
  return h;
}

// ---------------------------------------------------------------------------
// CSV writers

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  template <class... Cols>
  void header(const Cols&... cols) {
    row_strings({std::string(cols)...});
  }

  void row_strings(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  template <class... Vals>
  void row(const Vals&... vals) {
    row_strings({cell(vals)...});
  }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ostream& out_;
};

inline void write_values(std::ostream& out, std::span<const double> values) {
  CsvWriter w(out);
  w.header("value");
  for (double v : values) w.row(v);
}

inline void write_curve(std::ostream& out, const ThresholdCurve& curve) {
  CsvWriter w(out);
  w.header("rank", "u", "n_exceed", "evi_sp", "evi_tlpa", "alpha_hat");
  for (const CurveRow& r : curve.rows) w.row(r.rank, r.u, r.n_exceed, r.evi_sp, r.evi_tlpa, r.alpha_hat);
}

inline void write_averaged_curve(std::ostream& out, const std::vector<AveragedRow>& curve) {
  CsvWriter w(out);
  w.header("rank", "u", "n_exceed", "evi_sp", "evi_tlpa", "alpha_hat", "repetitions");
  for (const AveragedRow& r : curve)
    w.row(r.rank, r.u, r.n_exceed, r.evi_sp, r.evi_tlpa, r.alpha_hat, r.count);
}

inline void write_selection(std::ostream& out, const Selection& s) {
  CsvWriter w(out);
  w.header("gamma_sharp", "rank", "u", "evi", "loss");
  w.row(s.gamma_sharp, s.rank_sharp, s.u_sharp, s.evi, s.loss);
}

inline void write_selection_summary(std::ostream& out, const ExperimentResult& r) {
  require(r.selection.has_value(), "write_selection_summary: result holds no selections");
  CsvWriter w(out);
  w.header("repetitions", "failures", "mean_rank", "mean_evi", "mean_u");
  w.row(r.selection->count, r.failures.size(), r.selection->mean_rank, r.selection->mean_evi,
        r.selection->mean_u);
}

inline void write_selection_records(std::ostream& out, const ExperimentResult& r) {
  CsvWriter w(out);
  w.header("repetition", "gamma_sharp", "rank", "u", "evi", "loss");
  for (std::size_t k = 0; k < r.selections.size(); ++k) {
    if (!r.selections[k]) continue;
    const Selection& s = *r.selections[k];
    w.row(k, s.gamma_sharp, s.rank_sharp, s.u_sharp, s.evi, s.loss);
  }
}

inline void write_curve_records(std::ostream& out, const ExperimentResult& r) {
  CsvWriter w(out);
  w.header("repetition", "rank", "u", "n_exceed", "evi_sp", "evi_tlpa", "alpha_hat");
  for (std::size_t k = 0; k < r.curves.size(); ++k) {
    if (!r.curves[k]) continue;
    for (const CurveRow& c : r.curves[k]->rows)
      w.row(k, c.rank, c.u, c.n_exceed, c.evi_sp, c.evi_tlpa, c.alpha_hat);
  }
}

inline void write_qq(std::ostream& out, const QQTable& table) {
  CsvWriter w(out);
  w.header("log_sorted_obs", "log_q_sp", "log_q_tlpa");
  for (const QQRow& r : table) w.row(r.log_sorted_obs, r.log_q_sp, r.log_q_tlpa);
}

/// One row per bin; `threshold` marks the bin containing the chosen u.
inline void write_histogram(std::ostream& out, const Histogram& h, std::optional<double> threshold) {
  CsvWriter w(out);
  w.header("bin_lower", "bin_upper", "count", "threshold_marker");
  const std::size_t k = h.counts.size();
  for (std::size_t i = 0; i < k; ++i) {
    bool mark = false;
    if (threshold) {
      const bool last = i + 1 == k;
      mark = *threshold >= h.edges[i] && (*threshold < h.edges[i + 1] || (last && *threshold <= h.edges[i + 1]));
    }
    w.row(h.edges[i], h.edges[i + 1], h.counts[i], std::size_t{mark ? 1u : 0u});
  }
}

}  // namespace tlpot

#endif  // TLPOT_IO_HPP
