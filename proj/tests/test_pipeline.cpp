#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "gsbm/pipeline.hpp"
#include "gsbm/rng.hpp"
#include "gsbm/skew_bm.hpp"
#include "test_support.hpp"

using namespace gsbm;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("gsbm_test_" + name);
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

Eigen::VectorXd synthetic_series(double mu, double sigma, double alpha, int n,
                                 std::uint64_t seed) {
  Eigen::VectorXd series(n);
  series(0) = 1.0;
  double log_level = 0.0;
  for (int i = 1; i < n; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    log_level += (mu - 0.5 * sigma * sigma) +
                 sigma * azzalini_marginal_sample(alpha, 1.0, rng);
    series(i) = std::exp(log_level);
  }
  return series;
}

VolSeries as_vol(const Eigen::VectorXd& values, int w = 0) {
  VolSeries vol;
  vol.window_w = w;
  vol.values = values;
  vol.index.resize(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    vol.index(i) = static_cast<double>(i + 1);
  return vol;
}

}  // namespace

TEST_CASE("ingest_csv happy path and validation") {
  const auto ok = temp_file("raw_ok.csv");
  write_file(ok, "year,total_affected\n1990,10\n1991,12.5\n1992,0\n");
  const RawSeries raw = ingest_csv(ok.string());
  CHECK(raw.years.size() == 3);
  CHECK(raw.totals(1) == 12.5);

  const auto dup = temp_file("raw_dup.csv");
  write_file(dup, "year,total_affected\n1990,10\n1990,11\n1991,12\n");
  try {
    ingest_csv(dup.string());
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    REQUIRE(e.lines.size() == 1);
    CHECK(e.lines[0] == 3);  // offending line named
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  const auto missing = temp_file("raw_missing.csv");
  write_file(missing, "year,total_affected\n1990,10\n1991,\n1992,12\n");
  try {
    ingest_csv(missing.string());
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    REQUIRE(e.lines.size() == 1);
    CHECK(e.lines[0] == 3);
  }

  CHECK_THROWS_AS(ingest_csv("/nonexistent/nowhere.csv"), IoError);

  // a full-century file: 124 rows in, 124 points out
  std::string big = "year,total_affected\n";
  RngStream rng(1, 0);
  for (int y = 1900; y <= 2023; ++y)
    big += std::to_string(y) + "," + std::to_string(1e4 + 1e5 * rng.next_unit()) + "\n";
  const auto century = temp_file("raw_century.csv");
  write_file(century, big);
  CHECK(ingest_csv(century.string()).totals.size() == 124);
}

TEST_CASE("moving_variance") {
  SUBCASE("constant totals flag every window") {
    RawSeries raw;
    raw.years = Eigen::VectorXi::LinSpaced(20, 1900, 1919);
    raw.totals = Eigen::VectorXd::Constant(20, 7.0);
    const VolSeries vol = moving_variance(raw, 5);
    CHECK(vol.size() == 16);
    for (Eigen::Index i = 0; i < vol.size(); ++i) CHECK(!std::isfinite(vol.values(i)));
  }

  SUBCASE("single jump window: unbiased variance c^2/w") {
    const int w = 8;
    const double c = 3.0;
    RawSeries raw;
    raw.years = Eigen::VectorXi::LinSpaced(w, 1900, 1900 + w - 1);
    raw.totals = Eigen::VectorXd::Zero(w);
    raw.totals(w - 1) = c;
    const VolSeries vol = moving_variance(raw, w);
    REQUIRE(vol.size() == 1);

    // two-pass oracle
    const double mean = c / w;
    double ss = 0.0;
    for (int i = 0; i < w; ++i) {
      const double v = (i == w - 1 ? c : 0.0) - mean;
      ss += v * v;
    }
    const double oracle = ss / (w - 1);
    CHECK(vol.values(0) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(vol.values(0) == doctest::Approx(c * c / w).epsilon(1e-12));
  }

  SUBCASE("law of large numbers on iid data") {
    const int n = 10000;
    RawSeries raw;
    raw.years = Eigen::VectorXi::LinSpaced(n, 0, n - 1);
    raw.totals.resize(n);
    RngStream rng(77, 0);
    for (int i = 0; i < n; ++i) raw.totals(i) = 5.0 + 2.0 * rng.next_normal();
    const VolSeries vol = moving_variance(raw, 12);
    double mean = 0.0;
    for (Eigen::Index i = 0; i < vol.size(); ++i) mean += vol.values(i);
    mean /= static_cast<double>(vol.size());
    CHECK(std::abs(mean - 4.0) < 0.05 * 4.0);
  }

  SUBCASE("invariances") {
    RawSeries raw;
    raw.years = Eigen::VectorXi::LinSpaced(30, 1900, 1929);
    raw.totals.resize(30);
    RngStream rng(78, 0);
    for (int i = 0; i < 30; ++i) raw.totals(i) = 10.0 + rng.next_unit();
    const VolSeries base = moving_variance(raw, 6);

    RawSeries shifted = raw;
    shifted.years = raw.years.array() + 50;
    const VolSeries sh = moving_variance(shifted, 6);
    CHECK((base.values - sh.values).cwiseAbs().maxCoeff() == 0.0);

    RawSeries scaled = raw;
    scaled.totals = 3.0 * raw.totals;
    const VolSeries sc = moving_variance(scaled, 6);
    for (Eigen::Index i = 0; i < base.size(); ++i)
      CHECK(sc.values(i) == doctest::Approx(9.0 * base.values(i)).epsilon(1e-12));
  }

  RawSeries raw;
  raw.years = Eigen::VectorXi::LinSpaced(5, 0, 4);
  raw.totals = Eigen::VectorXd::Ones(5);
  CHECK_THROWS_AS(moving_variance(raw, 1), DomainError);
  CHECK_THROWS_AS(moving_variance(raw, 6), DomainError);
}

TEST_CASE("descriptive_stats") {
  Eigen::VectorXd two_point(4);
  two_point << -1.0, 1.0, -1.0, 1.0;
  const DescriptiveStats sym = descriptive_stats(two_point);
  CHECK(sym.mean == 0.0);
  CHECK(sym.skewness == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(sym.kurtosis == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::VectorXd gauss(100000);
  RngStream rng(91, 0);
  for (Eigen::Index i = 0; i < gauss.size(); ++i) gauss(i) = rng.next_normal();
  const DescriptiveStats st = descriptive_stats(gauss);
  CHECK(std::abs(st.mean) < 0.02);
  CHECK(st.stddev == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(st.skewness) < 0.03);
  CHECK(st.kurtosis == doctest::Approx(3.0).epsilon(0.04));

  Eigen::VectorXd short_input(3);
  short_input << 1, 2, 3;
  CHECK_THROWS_AS(descriptive_stats(short_input), DomainError);
  CHECK_THROWS_AS(descriptive_stats(Eigen::VectorXd::Ones(5)), DomainError);
}

TEST_CASE("score_predictions metric identities") {
  std::vector<PredictionRow> rows{{1, 2.0, 1.0}, {2, 2.5, 3.0}, {3, 4.0, 2.0}};
  const ErrorMetrics m = score_predictions(rows);
  CHECK(m.rmse == doctest::Approx(std::sqrt((1.0 + 0.25 + 4.0) / 3.0)).epsilon(1e-14));
  CHECK(m.nrmse_range * (3.0 - 1.0) == doctest::Approx(m.rmse).epsilon(1e-14));
  CHECK(m.nrmse_mean * 2.0 == doctest::Approx(m.rmse).epsilon(1e-14));
  CHECK_FALSE(m.degenerate_range);
}

TEST_CASE("persistence_baseline on a linear series") {
  Eigen::VectorXd lin(20);
  for (int i = 0; i < 20; ++i) lin(i) = 1.0 + i;
  const ForecastReport rep = persistence_baseline(as_vol(lin), 1);
  CHECK(rep.predictions.size() == 19);
  CHECK(rep.metrics.rmse == doctest::Approx(1.0).epsilon(1e-14));
  // realized targets span [2, 20]
  CHECK(rep.metrics.nrmse_range == doctest::Approx(1.0 / 18.0).epsilon(1e-14));

  const ForecastReport flat = persistence_baseline(as_vol(Eigen::VectorXd::Ones(10)), 1);
  CHECK(flat.metrics.rmse == 0.0);
  CHECK(flat.metrics.nrmse_range == 0.0);
  CHECK(flat.metrics.degenerate_range);
}

TEST_CASE("rolling_forecast agrees with the GBM reduction when alpha is forced") {
  const Eigen::VectorXd series = synthetic_series(0.08, 0.25, 0.7, 90, 3131);
  const int L = 20, h = 1;

  ForecastOptions opts;
  opts.force_alpha = 0.5;
  const ForecastReport rep = rolling_forecast(as_vol(series), L, h, opts);
  const auto estimates = rolling_calibrate(series, L, h);

  REQUIRE(!rep.predictions.empty());
  CHECK(rep.predictions.size() + static_cast<std::size_t>(rep.gaps) ==
        static_cast<std::size_t>(series.size() - h - L + 1));

  std::size_t checked = 0;
  for (const auto& row : rep.predictions) {
    for (const auto& est : estimates) {
      if (est.t != row.t || !est.usable()) continue;
      const Eigen::Index t0 = static_cast<Eigen::Index>(row.t) - 1;
      const double gs = series(t0);
      const double gbm = gs * std::exp(est.mu_hat * h);
      CHECK(row.v_hat == doctest::Approx(gbm).epsilon(1e-6));
      ++checked;
    }
  }
  CHECK(checked == rep.predictions.size());
}

TEST_CASE("rolling_forecast beats persistence on drifting synthetic data") {
  const Eigen::VectorXd series = synthetic_series(0.1, 0.2, 0.6, 120, 555);
  const ForecastReport rep = rolling_forecast(as_vol(series), 30, 1);
  REQUIRE(rep.baseline.has_value());
  CHECK(rep.metrics.nrmse_range <= rep.baseline->nrmse_range);
}

TEST_CASE("rolling_forecast counts gaps and validates input") {
  Eigen::VectorXd series = synthetic_series(0.05, 0.2, 0.5, 40, 808);
  series(10) = std::numeric_limits<double>::quiet_NaN();
  const ForecastReport rep = rolling_forecast(as_vol(series), 8, 1);
  CHECK(rep.gaps > 0);
  CHECK(rep.predictions.size() + static_cast<std::size_t>(rep.gaps) ==
        static_cast<std::size_t>(series.size() - 1 - 8 + 1));

  CHECK_THROWS_AS(rolling_forecast(as_vol(series), 4, 1), DomainError);
  CHECK_THROWS_AS(rolling_forecast(as_vol(series), 8, 0), DomainError);
  Eigen::VectorXd tiny = series.head(7);
  CHECK_THROWS_AS(rolling_forecast(as_vol(tiny), 8, 1), DomainError);
}
