#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "gsbm/calibrate.hpp"

namespace gsbm {

// Annual disaster-impact totals; years strictly increasing by 1.
struct RawSeries {
  Eigen::VectorXi years;
  Eigen::VectorXd totals;
};

// Parses a CSV with header `year,total_affected`. All offending rows are
// collected and reported together in one IngestError.
RawSeries ingest_csv(const std::string& path);
RawSeries ingest_rows(const std::vector<std::string>& lines);

// Trailing moving variance V_u of the totals; NaN marks windows with zero
// variance (flag-don't-fabricate).
struct VolSeries {
  Eigen::VectorXd index;   // 1-based time index of each window end
  Eigen::VectorXd values;  // V_u > 0, or NaN at a flagged gap
  int window_w = 0;

  Eigen::Index size() const { return values.size(); }
};

VolSeries moving_variance(const RawSeries& raw, int w);

struct DescriptiveStats {
  double mean;
  double stddev;    // unbiased
  double skewness;  // m3 / m2^{3/2}
  double kurtosis;  // m4 / m2^2, non-excess
};

DescriptiveStats descriptive_stats(const Eigen::VectorXd& x);

// One scored forecast: issued at index t for target t + h.
struct PredictionRow {
  double t;
  double v_hat;
  double v_real;
};

struct ErrorMetrics {
  double rmse = 0.0;
  double nrmse_range = 0.0;  // rmse / (max - min) of realized values
  double nrmse_mean = 0.0;   // rmse / mean of realized values
  bool degenerate_range = false;
};

ErrorMetrics score_predictions(const std::vector<PredictionRow>& rows);

struct ForecastReport {
  int h = 0;
  int L = 0;
  int w = 0;
  std::vector<PredictionRow> predictions;
  ErrorMetrics metrics;
  int gaps = 0;
  std::optional<ErrorMetrics> baseline;
};

struct ForecastOptions {
  // Overrides the calibrated shape (0.5 reduces every window to plain GBM).
  std::optional<double> force_alpha;
};

// The rolling loop: per window, calibrate (mu, sigma, alpha) on the L
// observations ending at t, then predict V_{t+h} as the model's conditional
// expectation with window-relative time origin. Degenerate windows become
// counted gaps, never fabricated predictions.
ForecastReport rolling_forecast(const VolSeries& series, int L, int h,
                                const ForecastOptions& options = {});

// V-hat_{t+h} = V_t, scored with the same metric definitions. `first_issue`
// is the 1-based index of the first forecast issue time.
ForecastReport persistence_baseline(const VolSeries& series, int h, int first_issue = 1);

}  // namespace gsbm
