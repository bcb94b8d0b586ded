#include "gsbm/skew_normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsbm/nelder_mead.hpp"
#include "gsbm/normal.hpp"

namespace gsbm {

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)

double clamp_lambda(double l) { return std::clamp(l, -kLambdaMax, kLambdaMax); }

struct Moments {
  double mean, sd, skewness;
};

Moments sample_moments(const Eigen::VectorXd& data) {
  const double n = static_cast<double>(data.size());
  const double mean = data.mean();
  const Eigen::ArrayXd centered = data.array() - mean;
  const double m2 = centered.square().mean();
  const double m3 = centered.cube().mean();
  const double sd = std::sqrt(m2 * n / std::max(1.0, n - 1.0));
  const double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return {mean, sd, skew};
}

}  // namespace

double sn_loglik(double xi, double omega, double lambda, const Eigen::VectorXd& data) {
  if (!(omega > 0.0)) throw DomainError("sn_loglik: omega must be positive");
  if (data.size() == 0) throw DomainError("sn_loglik: empty data");
  if (!data.allFinite()) throw DomainError("sn_loglik: non-finite data");

  const double log2 = std::numbers::ln2;
  const double log_omega = std::log(omega);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double u = (data(i) - xi) / omega;
    acc += log2 - log_omega - kLogSqrt2Pi - 0.5 * u * u + log_norm_cdf(lambda * u);
  }
  return acc;
}

SnFit sn_method_of_moments(const Eigen::VectorXd& data) {
  const Moments m = sample_moments(data);
  // Invert the skewness formula of the family; clamp inside the attainable
  // range (|skewness| < 0.9953).
  const double g = std::clamp(m.skewness, -0.98, 0.98);
  const double r = std::pow(std::abs(g) / (0.5 * (4.0 - std::numbers::pi)), 2.0 / 3.0);
  double delta = std::sqrt(0.5 * std::numbers::pi * r / (1.0 + r));
  delta = std::min(delta, 0.995);
  if (g < 0.0) delta = -delta;

  SnFit fit;
  fit.lambda = clamp_lambda(delta / std::sqrt(1.0 - delta * delta));
  fit.omega = m.sd / std::sqrt(std::max(1e-8, 1.0 - 2.0 * delta * delta / std::numbers::pi));
  fit.xi = m.mean - fit.omega * delta * kSqrt2OverPi;
  fit.loglik = sn_loglik(fit.xi, fit.omega, fit.lambda, data);
  fit.converged = false;
  return fit;
}

SnFit sn_mle(const Eigen::VectorXd& data) {
  if (data.size() < 5) throw DomainError("sn_mle: need at least 5 observations");
  if (!data.allFinite()) throw DomainError("sn_mle: non-finite data");
  const Moments m = sample_moments(data);
  if (!(m.sd > 0.0)) throw DomainError("sn_mle: zero sample variance");

  const SnFit mom = sn_method_of_moments(data);

  auto objective = [&](const Eigen::VectorXd& th) {
    const double omega = std::exp(std::clamp(th(1), -40.0, 40.0));
    return -sn_loglik(th(0), omega, clamp_lambda(th(2)), data);
  };

  Eigen::Vector3d step(0.1 * std::max(m.sd, 1e-3), 0.2, 0.5);
  Eigen::Vector3d scale(std::max(m.sd, 1e-3), 1.0, 1.0);

  const double start_lambdas[3] = {mom.lambda, 2.0, -2.0};
  SnFit best_converged;
  bool have_converged = false;
  SnFit best_any = mom;  // method-of-moments fallback when every start stalls
  for (double l0 : start_lambdas) {
    Eigen::Vector3d x0(mom.xi, std::log(mom.omega), l0);
    const NelderMeadResult r = nelder_mead(objective, x0, step, scale, 1e-8, 2000);
    SnFit fit;
    fit.xi = r.x(0);
    fit.omega = std::exp(std::clamp(r.x(1), -40.0, 40.0));
    fit.lambda = clamp_lambda(r.x(2));
    fit.loglik = -r.fmin;
    fit.converged = r.converged;
    if (fit.loglik > best_any.loglik) best_any = fit;
    if (r.converged && (!have_converged || fit.loglik > best_converged.loglik)) {
      best_converged = fit;
      have_converged = true;
    }
  }

  if (!have_converged)
    throw SnFitError("sn_mle: no simplex start converged", best_any);
  return best_converged;
}

GsbmStepParams map_sn_to_gsbm(const SnFit& fit, double dt) {
  if (!fit.converged) throw DomainError("map_sn_to_gsbm: fit did not converge");
  if (!(dt > 0.0)) throw DomainError("map_sn_to_gsbm: dt must be positive");
  const double delta = fit.lambda / std::sqrt(1.0 + fit.lambda * fit.lambda);
  GsbmStepParams p{};
  p.alpha = 0.5 * (1.0 + delta);
  p.sigma = fit.omega / std::sqrt(dt);
  p.mu = fit.xi / dt + 0.5 * p.sigma * p.sigma;
  return p;
}

}  // namespace gsbm
