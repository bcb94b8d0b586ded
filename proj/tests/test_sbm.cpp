#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gsbm/normal.hpp"
#include "gsbm/quadrature.hpp"
#include "gsbm/skew_bm.hpp"
#include "test_support.hpp"

using namespace gsbm;
using testsupport::ks_statistic;

namespace {

// Independent oracle: adaptive Gauss-Kronrod on the first-arrival integral
// with constant shape, plus the image term. Shares nothing with the
// tanh-sinh route inside density_inhom.
double conddist_quadrature_oracle(double alpha, double x, double y, double dt) {
  const double sgn = (y > 0.0) - (y < 0.0);
  const double c = 1.0 + (2.0 * alpha - 1.0) * sgn;
  GaussKronrodOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-14;
  opt.max_intervals = 4000;
  auto integrand = [&](double u) {
    const double rem = dt - u;
    if (u <= 0.0 || rem <= 0.0) return 0.0;
    const double expo = -y * y / (2.0 * rem) - x * x / (2.0 * u);
    if (expo < -700.0) return 0.0;
    return std::abs(y) * c * std::exp(expo) /
           (2.0 * std::numbers::pi * rem * std::sqrt(rem) * std::sqrt(u));
  };
  const auto left = gauss_kronrod(integrand, 0.0, dt / 2.0, opt);
  const auto right = gauss_kronrod(integrand, dt / 2.0, dt, opt);
  double image = 0.0;
  if (x * y > 0.0) {
    const double sd = std::sqrt(dt);
    image = (norm_pdf((y - x) / sd) - norm_pdf((y + x) / sd)) / sd;
  }
  return left.value + right.value + image;
}

PiecewiseConstantFn const_alpha(double alpha, double t0, double t1) {
  return PiecewiseConstantFn::constant(t0, t1, alpha, {{0.0, 1.0}});
}

}  // namespace

TEST_CASE("density_const special shapes") {
  // alpha = 1/2 is plain Brownian motion.
  CHECK(density_const(SkewStepKernel(0.5, 1.0, 0.0), 0.0) ==
        doctest::Approx(kInvSqrt2Pi).epsilon(1e-15));
  // alpha = 1 reflects positively: no mass below zero.
  CHECK(density_const(SkewStepKernel(1.0, 1.0, 0.0), -0.3) == 0.0);
  // frozen from high-precision quadrature of the first-arrival formula
  CHECK(density_const(SkewStepKernel(0.7, 2.0, 0.5), 1.0) ==
        doctest::Approx(0.3292966392635493).epsilon(1e-12));
}

TEST_CASE("density_const matches the quadrature oracle") {
  RngStream rng(101, 0);
  for (int i = 0; i < 25; ++i) {
    const double alpha = rng.next_unit();
    double x = 4.0 * rng.next_unit() - 2.0;
    if (std::abs(x) < 0.05) x = 0.35;  // oracle's GK route dislikes x ~ 0
    const double y = 5.0 * rng.next_unit() - 2.5;
    const double dt = 0.3 + 2.5 * rng.next_unit();
    const double closed = density_const(SkewStepKernel(alpha, dt, x), y);
    const double oracle = conddist_quadrature_oracle(alpha, x, y, dt);
    CHECK(closed == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("density_const normalizes analytically") {
  RngStream rng(102, 0);
  for (int i = 0; i < 30; ++i) {
    const SkewStepKernel k(rng.next_unit(), 0.1 + 3.0 * rng.next_unit(),
                           4.0 * rng.next_unit() - 2.0);
    // total mass via the antiderivative
    const double lo = step_cdf_const(k, k.x0 - 14.0 * std::sqrt(k.dt));
    const double hi = step_cdf_const(k, k.x0 + 14.0 * std::sqrt(k.dt));
    CHECK(hi - lo == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("step_cdf_const properties") {
  const SkewStepKernel sym(0.5, 1.0, 0.0);
  CHECK(step_cdf_const(sym, 0.0) == doctest::Approx(0.5).epsilon(1e-15));

  // sign mass from the origin: F(0) = 1 - alpha exactly
  for (double alpha : {0.0, 0.2, 0.55, 0.9, 1.0}) {
    const SkewStepKernel k(alpha, 2.3, 0.0);
    CHECK(step_cdf_const(k, 0.0) == doctest::Approx(1.0 - alpha).epsilon(1e-15));
  }

  RngStream rng(103, 0);
  for (int i = 0; i < 10; ++i) {
    const SkewStepKernel k(rng.next_unit(), 0.2 + rng.next_unit(),
                           2.0 * rng.next_unit() - 1.0);
    CHECK(step_cdf_const(k, k.x0 + 20.0 * std::sqrt(k.dt)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(step_cdf_const(k, k.x0 - 20.0 * std::sqrt(k.dt)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // nondecreasing, derivative consistent with the density
    double prev = 0.0;
    for (double y = -3.0; y <= 3.0; y += 0.25) {
      const double f = step_cdf_const(k, y);
      CHECK(f >= prev);
      prev = f;
      const double h = 1e-6;
      const double deriv = (step_cdf_const(k, y + h) - step_cdf_const(k, y - h)) / (2 * h);
      if (std::abs(y) > 1e-3)
        CHECK(deriv == doctest::Approx(density_const(k, y)).epsilon(5e-5));
    }
  }
}

TEST_CASE("density_inhom equals the closed form for constant shape") {
  RngStream rng(104, 0);
  for (int i = 0; i < 60; ++i) {
    const double alpha = rng.next_unit();
    const double x = 6.0 * rng.next_unit() - 3.0;
    const double y = 8.0 * rng.next_unit() - 4.0;
    const double dt = 0.1 + 3.9 * rng.next_unit();
    const double s = 2.0 * rng.next_unit();
    const double inhom = density_inhom(s, s + dt, x, y, const_alpha(alpha, s, s + dt));
    const double closed = density_const(SkewStepKernel(alpha, dt, x), y);
    CHECK(std::abs(inhom - closed) < 1e-8);
  }
  // the specific spot check used throughout the docs
  CHECK(density_inhom(0.0, 1.0, 0.2, 0.4, const_alpha(0.5, 0.0, 1.0)) ==
        doctest::Approx(density_const(SkewStepKernel(0.5, 1.0, 0.2), 0.4))
            .epsilon(1e-10));
}

TEST_CASE("density_inhom degenerate cases") {
  const auto af = const_alpha(0.7, 0.0, 1.0);
  CHECK_THROWS_AS(density_inhom(0.0, 5e-13, 0.0, 0.0, const_alpha(0.7, 0.0, 1e-12)),
                  NumericError);
  // y = 0 returns the two-sided limit average phi_dt(x)
  CHECK(density_inhom(0.0, 1.0, 0.3, 0.0, af) ==
        doctest::Approx(norm_pdf(0.3)).epsilon(1e-14));
  // reflected shape keeps no mass on the wrong side
  CHECK(density_inhom(0.0, 1.0, 0.4, -0.7, const_alpha(1.0, 0.0, 1.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(density_inhom(0.0, 1.0, -0.4, 0.7, const_alpha(0.0, 0.0, 1.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("density_inhom two-step shape normalizes") {
  Eigen::VectorXd pts(3), vals(2);
  pts << 0.0, 0.5, 1.0;
  vals << 0.3, 0.8;
  const PiecewiseConstantFn af{TimeGrid(pts), vals, {{0.0, 1.0}}};
  GaussKronrodOptions opt;
  opt.rel_tol = 1e-9;
  opt.max_intervals = 2000;
  const auto left = gauss_kronrod(
      [&](double y) { return density_inhom(0.0, 1.0, 0.0, y, af); }, -20.0, 0.0, opt);
  const auto right = gauss_kronrod(
      [&](double y) { return density_inhom(0.0, 1.0, 0.0, y, af); }, 0.0, 20.0, opt);
  CHECK(left.value + right.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("chapman-kolmogorov composition for constant shape") {
  RngStream rng(105, 0);
  GaussKronrodOptions opt;
  opt.rel_tol = 1e-10;
  opt.max_intervals = 2000;
  for (int i = 0; i < 8; ++i) {
    const double alpha = rng.next_unit();
    const double x = 2.0 * rng.next_unit() - 1.0;
    const double y = 3.0 * rng.next_unit() - 1.5;
    const double dt1 = 0.2 + rng.next_unit();
    const double dt2 = 0.2 + rng.next_unit();
    auto mid = [&](double z) {
      return density_const(SkewStepKernel(alpha, dt1, x), z) *
             density_const(SkewStepKernel(alpha, dt2, z), y);
    };
    const double lim = std::max(std::abs(x), std::abs(y)) + 12.0 * std::sqrt(dt1 + dt2);
    const double composed = gauss_kronrod(mid, -lim, 0.0, opt).value +
                            gauss_kronrod(mid, 0.0, lim, opt).value;
    const double direct = density_const(SkewStepKernel(alpha, dt1 + dt2, x), y);
    CHECK(std::abs(composed - direct) < 2e-6);
  }
}

TEST_CASE("sample_step law and sign mass") {
  // reflected case: every draw lands on the positive side
  {
    RngStream rng(7, 1);
    const SkewStepKernel k(1.0, 1.0, 0.0);
    for (int i = 0; i < 500; ++i) CHECK(sample_step(k, rng) >= 0.0);
  }

  // KS against the analytic CDF, plus empirical positive mass ~ alpha
  const int n = 20000;
  for (double alpha : {0.25, 0.5, 0.75}) {
    const SkewStepKernel k(alpha, 1.0, 0.0);
    std::vector<double> xs(n);
    int positive = 0;
    for (int i = 0; i < n; ++i) {
      RngStream rng(42, static_cast<std::uint64_t>(i));
      xs[static_cast<std::size_t>(i)] = sample_step(k, rng);
      positive += xs[static_cast<std::size_t>(i)] > 0.0 ? 1 : 0;
    }
    const double d =
        ks_statistic(xs, [&](double y) { return step_cdf_const(k, y); });
    CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));  // 1% critical value
    const double se = std::sqrt(alpha * (1.0 - alpha) / n);
    CHECK(std::abs(static_cast<double>(positive) / n - alpha) < 3.5 * se);
  }
}

TEST_CASE("simulate_path basic laws") {
  const TimeGrid grid = TimeGrid::regular(0.0, 1.0, 64);

  SUBCASE("standard BM variance at the horizon") {
    const auto alpha = const_alpha(0.5, 0.0, 1.0);
    const int paths = 4000;
    double sum = 0.0, sumsq = 0.0;
    for (int p = 0; p < paths; ++p) {
      const SbmPath path = simulate_path(alpha, grid, 0.0, {9001, static_cast<std::uint64_t>(p)});
      const double xt = path.states(path.states.size() - 1);
      sum += xt;
      sumsq += xt * xt;
    }
    const double mean = sum / paths;
    const double var = sumsq / paths - mean * mean;
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(paths)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.08));
  }

  SUBCASE("reflected path stays nonnegative") {
    const auto alpha = const_alpha(1.0, 0.0, 1.0);
    for (int p = 0; p < 50; ++p) {
      const SbmPath path = simulate_path(alpha, grid, 0.0, {17, static_cast<std::uint64_t>(p)});
      CHECK(path.states.minCoeff() >= 0.0);
    }
  }

  SUBCASE("terminal marginal matches the composed constant kernel") {
    const auto alpha = const_alpha(0.6, 0.0, 1.0);
    const int paths = 10000;
    std::vector<double> xs(paths);
    for (int p = 0; p < paths; ++p) {
      const SbmPath path = simulate_path(alpha, grid, 0.0, {55, static_cast<std::uint64_t>(p)});
      xs[static_cast<std::size_t>(p)] = path.states(path.states.size() - 1);
    }
    const SkewStepKernel k(0.6, 1.0, 0.0);
    const double d = ks_statistic(xs, [&](double y) { return step_cdf_const(k, y); });
    CHECK(d < 0.02);
  }

  SUBCASE("grid must refine the shape grid") {
    Eigen::VectorXd pts(3), vals(2);
    pts << 0.0, 0.37, 1.0;
    vals << 0.2, 0.9;
    const PiecewiseConstantFn alpha{TimeGrid(pts), vals, {{0.0, 1.0}}};
    CHECK_THROWS_AS(simulate_path(alpha, grid, 0.0, {1, 0}), DomainError);
  }

  SUBCASE("deterministic replay") {
    const auto alpha = const_alpha(0.7, 0.0, 1.0);
    const SbmPath a = simulate_path(alpha, grid, 0.0, {123, 5});
    const SbmPath b = simulate_path(alpha, grid, 0.0, {123, 5});
    CHECK((a.states - b.states).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("piecewise-constant refinements approach the continuous shape") {
  // alpha(t) = 0.35 + 0.3 t on [0,1]; its n-step left-value discretizations
  // approach the fine reference as n grows, under coupled uniforms.
  const auto alpha_cont = [](double t) { return 0.35 + 0.3 * t; };
  const int fine_steps = 160;
  const TimeGrid grid = TimeGrid::regular(0.0, 1.0, fine_steps);

  auto discretized = [&](int n) {
    Eigen::VectorXd pts(n + 1), vals(n);
    for (int i = 0; i <= n; ++i) pts(i) = static_cast<double>(i) / n;
    for (int i = 0; i < n; ++i) vals(i) = alpha_cont(static_cast<double>(i) / n);
    return PiecewiseConstantFn{TimeGrid(pts), vals, {{0.0, 1.0}}};
  };

  const PiecewiseConstantFn reference = discretized(fine_steps);
  const int paths = 300;
  std::vector<double> sup_err;
  for (int n : {2, 4, 8, 16}) {
    const PiecewiseConstantFn approx = discretized(n);
    double acc = 0.0;
    for (int p = 0; p < paths; ++p) {
      const StreamKey key{321, static_cast<std::uint64_t>(p)};
      const SbmPath ref = simulate_path(reference, grid, 0.0, key);
      const SbmPath apx = simulate_path(approx, grid, 0.0, key);
      acc += (ref.states - apx.states).cwiseAbs().maxCoeff();
    }
    sup_err.push_back(acc / paths);
  }
  CHECK(sup_err[1] < sup_err[0]);
  CHECK(sup_err[2] < sup_err[1]);
  CHECK(sup_err[3] < sup_err[2]);
}

TEST_CASE("azzalini construction marginals") {
  {
    RngStream rng(31, 0);
    // alpha = 1/2: plain normal with variance t
    std::vector<double> xs(20000);
    for (auto& x : xs) x = azzalini_marginal_sample(0.5, 2.0, rng);
    const double d = ks_statistic(
        xs, [](double y) { return norm_cdf(y / std::sqrt(2.0)); });
    CHECK(d < 1.63 / std::sqrt(20000.0));
  }
  {
    RngStream rng(32, 0);
    for (int i = 0; i < 200; ++i) CHECK(azzalini_marginal_sample(1.0, 1.0, rng) >= 0.0);
    for (int i = 0; i < 200; ++i) CHECK(azzalini_marginal_sample(0.0, 1.0, rng) <= 0.0);
  }
  {
    // skewness at alpha = 0.8 (delta = 0.6); closed-form value 0.0695841841
    RngStream rng(33, 0);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = azzalini_marginal_sample(0.8, 1.0, rng);
    CHECK(std::abs(testsupport::sample_skewness(xs) - 0.06958418405943137) < 0.05);
  }
}

TEST_CASE("local time estimator") {
  const TimeGrid grid = TimeGrid::regular(0.0, 1.0, 512);

  SUBCASE("never fires away from zero") {
    Eigen::VectorXd states = Eigen::VectorXd::Constant(grid.size(), 3.0);
    const SbmPath path{grid, states, {0, 0}};
    CHECK(local_time_estimate(path, 0.05) == 0.0);
  }

  SUBCASE("stays below the horizon on average, alpha = 1/2") {
    const auto alpha = const_alpha(0.5, 0.0, 1.0);
    double acc = 0.0;
    const int paths = 400;
    for (int p = 0; p < paths; ++p) {
      const SbmPath path = simulate_path(alpha, grid, 0.0, {77, static_cast<std::uint64_t>(p)});
      acc += local_time_estimate(path, 0.05);
    }
    CHECK(acc / paths <= 1.0 + 0.05);
  }

  SUBCASE("reflected case matches sqrt(2T/pi) within 20%") {
    const auto alpha = const_alpha(1.0, 0.0, 1.0);
    double acc = 0.0;
    const int paths = 1000;
    for (int p = 0; p < paths; ++p) {
      const SbmPath path = simulate_path(alpha, grid, 0.0, {78, static_cast<std::uint64_t>(p)});
      acc += local_time_estimate(path, 0.05);
    }
    const double expected = 0.7978845608028654;  // sqrt(2/pi), T = 1
    CHECK(std::abs(acc / paths - expected) < 0.2 * expected);
  }

  SUBCASE("precondition checks") {
    const TimeGrid tiny = TimeGrid::regular(0.0, 1.0, 10);
    const SbmPath path{tiny, Eigen::VectorXd::Zero(11), {0, 0}};
    CHECK_THROWS_AS(local_time_estimate(path, 0.05), DomainError);
    const SbmPath ok{grid, Eigen::VectorXd::Zero(grid.size()), {0, 0}};
    CHECK_THROWS_AS(local_time_estimate(ok, 0.0), DomainError);
  }
}
