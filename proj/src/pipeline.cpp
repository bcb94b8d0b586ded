#include "gsbm/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gsbm/gsbm_process.hpp"

namespace gsbm {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_long(const std::string& s, long& out) {
  try {
    std::size_t pos = 0;
    out = std::stol(trim(s), &pos);
    return pos == trim(s).size();
  } catch (...) {
    return false;
  }
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(trim(s), &pos);
    return pos == trim(s).size();
  } catch (...) {
    return false;
  }
}

}  // namespace

RawSeries ingest_rows(const std::vector<std::string>& lines) {
  std::vector<long> bad;
  std::ostringstream why;
  if (lines.empty() || trim(lines[0]) != "year,total_affected") {
    bad.push_back(1);
    throw IngestError("ingest: expected header 'year,total_affected'", bad);
  }

  std::vector<int> years;
  std::vector<double> totals;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const long line_no = static_cast<long>(i) + 1;
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    long year = 0;
    double total = 0.0;
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos ||
        !parse_long(line.substr(0, comma), year) ||
        !parse_double(line.substr(comma + 1), total) || !std::isfinite(total) ||
        total < 0.0) {
      bad.push_back(line_no);
      why << " line " << line_no << ": malformed row;";
      continue;
    }
    if (!years.empty() && year != years.back() + 1) {
      bad.push_back(line_no);
      why << " line " << line_no << ": year " << year << " does not follow "
          << years.back() << ";";
      continue;
    }
    years.push_back(static_cast<int>(year));
    totals.push_back(total);
  }

  if (!bad.empty())
    throw IngestError("ingest: rejected rows --" + why.str(), bad);
  if (years.empty()) throw IngestError("ingest: no data rows", {});

  RawSeries raw;
  raw.years = Eigen::Map<const Eigen::VectorXi>(years.data(),
                                                static_cast<Eigen::Index>(years.size()));
  raw.totals = Eigen::Map<const Eigen::VectorXd>(
      totals.data(), static_cast<Eigen::Index>(totals.size()));
  return raw;
}

RawSeries ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return ingest_rows(lines);
}

VolSeries moving_variance(const RawSeries& raw, int w) {
  if (w < 2) throw DomainError("moving_variance: window must be at least 2");
  const Eigen::Index n = raw.totals.size();
  if (n < w) throw DomainError("moving_variance: series shorter than window");

  VolSeries vol;
  vol.window_w = w;
  vol.index.resize(n - w + 1);
  vol.values.resize(n - w + 1);
  for (Eigen::Index end = w - 1; end < n; ++end) {
    const auto seg = raw.totals.segment(end - (w - 1), w);
    const double mean = seg.mean();
    const double ss = (seg.array() - mean).square().sum();
    const double var = ss / static_cast<double>(w - 1);
    vol.index(end - (w - 1)) = static_cast<double>(end + 1);
    vol.values(end - (w - 1)) =
        var > 0.0 ? var : std::numeric_limits<double>::quiet_NaN();
  }
  return vol;
}

DescriptiveStats descriptive_stats(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  if (n < 4) throw DomainError("descriptive_stats: need at least 4 observations");
  if (!x.allFinite()) throw DomainError("descriptive_stats: non-finite input");
  const double mean = x.mean();
  const Eigen::ArrayXd c = x.array() - mean;
  const double m2 = c.square().mean();
  if (!(m2 > 0.0)) throw DomainError("descriptive_stats: zero variance");
  const double m3 = c.cube().mean();
  const double m4 = c.pow(4).mean();

  DescriptiveStats st{};
  st.mean = mean;
  st.stddev = std::sqrt(m2 * static_cast<double>(n) / static_cast<double>(n - 1));
  st.skewness = m3 / std::pow(m2, 1.5);
  st.kurtosis = m4 / (m2 * m2);
  return st;
}

ErrorMetrics score_predictions(const std::vector<PredictionRow>& rows) {
  ErrorMetrics m;
  if (rows.empty()) {
    m.degenerate_range = true;
    return m;
  }
  double sse = 0.0;
  double lo = rows.front().v_real, hi = lo, sum = 0.0;
  for (const auto& r : rows) {
    const double e = r.v_hat - r.v_real;
    sse += e * e;
    lo = std::min(lo, r.v_real);
    hi = std::max(hi, r.v_real);
    sum += r.v_real;
  }
  m.rmse = std::sqrt(sse / static_cast<double>(rows.size()));
  const double range = hi - lo;
  const double mean = sum / static_cast<double>(rows.size());
  m.degenerate_range = !(range > 0.0);
  m.nrmse_range = m.degenerate_range ? 0.0 : m.rmse / range;
  m.nrmse_mean = mean != 0.0 ? m.rmse / mean : 0.0;
  return m;
}

ForecastReport rolling_forecast(const VolSeries& series, int L, int h,
                                const ForecastOptions& options) {
  if (L < 5) throw DomainError("rolling_forecast: L must be at least 5");
  if (h < 1) throw DomainError("rolling_forecast: horizon must be at least 1");
  const Eigen::Index n = series.size();
  if (n < L + h) throw DomainError("rolling_forecast: series shorter than L + h");

  ForecastReport report;
  report.h = h;
  report.L = L;
  report.w = series.window_w;

  // Issue times t = L .. N - h (1-based over the volatility series).
  for (Eigen::Index end = L - 1; end < n - h; ++end) {
    const Eigen::VectorXd window = series.values.segment(end - (L - 1), L);
    const double v_real = series.values(end + h);
    WindowEstimates est = calibrate_window(window, static_cast<double>(end + 1));
    if (!est.usable() || !std::isfinite(v_real)) {
      ++report.gaps;
      continue;
    }
    const double alpha =
        options.force_alpha ? *options.force_alpha : est.alpha_hat;

    // Window-relative clock: the window start is time 0 with level g0, the
    // forecast is issued at s = L - 1 and targets t = L - 1 + h.
    const double horizon_t = static_cast<double>(L - 1 + h);
    GsbmModel model = GsbmModel::constant(0.0, horizon_t, est.mu_hat,
                                          est.sigma_hat, alpha, window(0));
    ForecastQuery query(static_cast<double>(L - 1), horizon_t, window(L - 1),
                        std::move(model));
    const double v_hat = cond_exp_forecast(query);
    report.predictions.push_back({static_cast<double>(end + 1), v_hat, v_real});
  }

  report.metrics = score_predictions(report.predictions);

  // Persistence over the same issue window, for side-by-side NRMSE.
  const ForecastReport base = persistence_baseline(series, h, L);
  report.baseline = base.metrics;
  return report;
}

ForecastReport persistence_baseline(const VolSeries& series, int h, int first_issue) {
  if (h < 1) throw DomainError("persistence_baseline: horizon must be at least 1");
  if (first_issue < 1) throw DomainError("persistence_baseline: first_issue must be >= 1");
  const Eigen::Index n = series.size();
  if (n < first_issue + h)
    throw DomainError("persistence_baseline: series shorter than first_issue + h");

  ForecastReport report;
  report.h = h;
  report.L = first_issue;
  report.w = series.window_w;
  for (Eigen::Index end = first_issue - 1; end < n - h; ++end) {
    const double v_now = series.values(end);
    const double v_real = series.values(end + h);
    if (!std::isfinite(v_now) || !std::isfinite(v_real)) {
      ++report.gaps;
      continue;
    }
    report.predictions.push_back({static_cast<double>(end + 1), v_now, v_real});
  }
  report.metrics = score_predictions(report.predictions);
  return report;
}

}  // namespace gsbm
