#include "gsbm/gsbm_process.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gsbm/normal.hpp"
#include "gsbm/quadrature.hpp"

namespace gsbm {

namespace {

void require_same_grid(const PiecewiseConstantFn& a, const PiecewiseConstantFn& b) {
  if (a.grid().size() != b.grid().size() ||
      (a.grid().points() - b.grid().points()).cwiseAbs().maxCoeff() != 0.0)
    throw DomainError("GsbmModel: parameter functions must share one grid");
}

}  // namespace

GsbmModel::GsbmModel(PiecewiseConstantFn mu_, PiecewiseConstantFn sigma_,
                     PiecewiseConstantFn alpha_, double g0_)
    : mu(std::move(mu_)), sigma(std::move(sigma_)), alpha(std::move(alpha_)), g0(g0_) {
  require_same_grid(mu, sigma);
  require_same_grid(mu, alpha);
  if (sigma.values().minCoeff() <= 0.0)
    throw DomainError("GsbmModel: sigma values must be positive");
  if (alpha.values().minCoeff() < 0.0 || alpha.values().maxCoeff() > 1.0)
    throw DomainError("GsbmModel: alpha values outside [0,1]");
  if (!(g0 > 0.0) || !std::isfinite(g0))
    throw DomainError("GsbmModel: g0 must be positive");
}

GsbmModel GsbmModel::constant(double t0, double t1, double mu, double sigma,
                              double alpha, double g0) {
  return GsbmModel(PiecewiseConstantFn::constant(t0, t1, mu),
                   PiecewiseConstantFn::constant(t0, t1, sigma),
                   PiecewiseConstantFn::constant(t0, t1, alpha, {{0.0, 1.0}}), g0);
}

GsbmPath gsbm_path(const GsbmModel& model, const SbmPath& driver) {
  const TimeGrid& grid = driver.grid;
  if (!model.mu.grid().spans(grid.start(), grid.end()))
    throw DomainError("gsbm_path: driver grid outside model grid span");
  const double tol = 1e-9 * (grid.end() - grid.start());
  for (double b : model.mu.grid().points())
    if (b > grid.start() && b < grid.end() && !grid.has_point(b, tol))
      throw DomainError("gsbm_path: driver grid does not refine model grid");

  Eigen::VectorXd levels(grid.size());
  levels(0) = model.g0;
  double log_level = std::log(model.g0);
  for (Eigen::Index i = 0; i + 1 < grid.size(); ++i) {
    const double dt = grid[i + 1] - grid[i];
    const double mu_i = model.mu(grid[i]);
    const double sg_i = model.sigma(grid[i]);
    const double dx = driver.states(i + 1) - driver.states(i);
    log_level += (mu_i - 0.5 * sg_i * sg_i) * dt + sg_i * dx;
    levels(i + 1) = std::exp(log_level);
  }
  return GsbmPath{grid, std::move(levels), driver};
}

ForecastQuery::ForecastQuery(double s_, double t_, double gs_, GsbmModel model_)
    : s(s_), t(t_), gs(gs_), model(std::move(model_)) {
  if (!(s < t)) throw DomainError("ForecastQuery: needs s < t");
  if (!(gs > 0.0) || !std::isfinite(gs))
    throw DomainError("ForecastQuery: observed level must be positive");
  const double origin = model.mu.grid().start();
  if (!(s >= origin) || !model.mu.grid().spans(origin, t))
    throw DomainError("ForecastQuery: model grid must cover [origin, t]");
  // sigma constant over [origin, t]: hypothesis of the conditional-mean formula.
  const double s0 = model.sigma(origin);
  for (Eigen::Index i = 0; i < model.sigma.values().size(); ++i) {
    if (model.sigma.grid()[i] >= t) break;
    if (model.sigma.values()(i) != s0)
      throw DomainError("ForecastQuery: sigma must be constant on [0, t]");
  }
}

double cond_exp_forecast(const ForecastQuery& q) {
  const double origin = q.model.mu.grid().start();
  const double sigma = q.model.sigma(origin);
  const double span = q.t - q.s;
  const double sd = std::sqrt(span);

  auto drift_int = [&](double a, double b) {
    return q.model.mu.integrate(a, b) - 0.5 * sigma * sigma * (b - a);
  };

  const double log_ratio = std::log(q.gs / q.model.g0);
  const double x = (log_ratio - drift_int(origin, q.s)) / sigma;  // reconstructed state
  const double prefactor = q.gs * std::exp(drift_int(origin, q.t) - log_ratio);

  auto tilted = [&](double y) {
    return std::exp(sigma * y) * density_inhom(q.s, q.t, x, y, q.model.alpha);
  };

  // Mass bound p(t, y | s, x) <= 2 phi_span(y - x) gives closed-form Gaussian
  // tail bounds for the exponentially tilted integral on either side.
  const double tail_scale = 2.0 * std::exp(sigma * x + 0.5 * sigma * sigma * span);
  auto right_tail = [&](double hi) {
    return tail_scale * norm_sf((hi - x - sigma * span) / sd);
  };
  auto left_tail = [&](double lo) {
    return tail_scale * norm_cdf((lo - x - sigma * span) / sd);
  };

  GaussKronrodOptions opt;
  opt.rel_tol = 1e-8;
  opt.max_intervals = 400;

  auto integrate_strip = [&](double a, double b) {
    double acc = 0.0;
    // The density has a kink at y = 0; split there so each panel is smooth.
    std::vector<double> cuts{a};
    if (a < 0.0 && 0.0 < b) cuts.push_back(0.0);
    cuts.push_back(b);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const QuadratureResult r = gauss_kronrod(tilted, cuts[i], cuts[i + 1], opt);
      if (!r.converged)
        throw NumericError("cond_exp_forecast: y-quadrature did not converge", r.error);
      acc += r.value;
    }
    return acc;
  };

  double lo = x - (sigma * span + 12.0) * sd;
  double hi = x + (sigma * span + 12.0) * sd;
  double integral = integrate_strip(lo, hi);

  for (int rounds = 0;; ++rounds) {
    const double scale = 1e-8 * std::max(integral, tail_scale * 1e-12);
    bool extended = false;
    if (right_tail(hi) > scale) {
      integral += integrate_strip(hi, hi + 4.0 * sd);
      hi += 4.0 * sd;
      extended = true;
    }
    if (left_tail(lo) > scale) {
      integral += integrate_strip(lo - 4.0 * sd, lo);
      lo -= 4.0 * sd;
      extended = true;
    }
    if (!extended) break;
    if (rounds > 64)
      throw NumericError("cond_exp_forecast: tail window failed to close");
  }

  return prefactor * integral;
}

double cond_exp_const_oracle(double alpha, double sigma, double dt, double x) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("cond_exp_const_oracle: alpha outside [0,1]");
  if (!(dt > 0.0)) throw DomainError("cond_exp_const_oracle: dt must be positive");
  const double sd = std::sqrt(dt);
  const double a = std::abs(x);
  const double half_var = 0.5 * sigma * sigma * dt;
  const double direct = std::exp(sigma * x + half_var);
  const double pos = std::exp(-sigma * a + half_var) * norm_cdf((sigma * dt - a) / sd);
  const double neg = std::exp(sigma * a + half_var) * norm_cdf(-(sigma * dt + a) / sd);
  return direct + (2.0 * alpha - 1.0) * (pos - neg);
}

}  // namespace gsbm
