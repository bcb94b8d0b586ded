#include "gsbm/calibrate.hpp"

#include <cmath>

#include "gsbm/errors.hpp"

namespace gsbm {

const char* to_string(WindowEstimates::Flag flag) {
  switch (flag) {
    case WindowEstimates::Flag::ok: return "ok";
    case WindowEstimates::Flag::degenerate: return "degenerate";
    case WindowEstimates::Flag::fit_failed: return "fit_failed";
  }
  return "unknown";
}

WindowEstimates calibrate_window(const Eigen::VectorXd& window, double t_index) {
  WindowEstimates est;
  est.t = t_index;
  est.mu_hat = est.sigma_hat = est.alpha_hat = est.loglik =
      std::numeric_limits<double>::quiet_NaN();

  for (Eigen::Index i = 0; i < window.size(); ++i) {
    if (!std::isfinite(window(i)) || window(i) <= 0.0) {
      est.flag = WindowEstimates::Flag::degenerate;
      return est;
    }
  }

  Eigen::VectorXd loginc(window.size() - 1);
  for (Eigen::Index i = 0; i + 1 < window.size(); ++i)
    loginc(i) = std::log(window(i + 1)) - std::log(window(i));

  const double mean = loginc.mean();
  const double var = (loginc.array() - mean).square().sum() /
                     static_cast<double>(loginc.size() - 1);
  if (!(var > 1e-20 * (1.0 + mean * mean))) {
    est.flag = WindowEstimates::Flag::degenerate;
    return est;
  }

  try {
    const SnFit fit = sn_mle(loginc);
    const GsbmStepParams p = map_sn_to_gsbm(fit, 1.0);
    est.mu_hat = p.mu;
    est.sigma_hat = p.sigma;
    est.alpha_hat = p.alpha;
    est.loglik = fit.loglik;
    est.flag = WindowEstimates::Flag::ok;
  } catch (const SnFitError& e) {
    est.loglik = e.best.loglik;
    est.flag = WindowEstimates::Flag::fit_failed;
  }
  return est;
}

std::vector<WindowEstimates> rolling_calibrate(const Eigen::VectorXd& series, int L,
                                               int horizon) {
  if (L < 6) throw DomainError("rolling_calibrate: L must be at least 6");
  if (horizon < 0) throw DomainError("rolling_calibrate: horizon must be >= 0");
  const Eigen::Index n = series.size();
  if (n < L + 1) throw DomainError("rolling_calibrate: series shorter than L + 1");

  std::vector<WindowEstimates> out;
  // Windows end at t = L .. N - horizon in 1-based time.
  for (Eigen::Index end = L - 1; end < n - horizon; ++end) {
    const Eigen::VectorXd window = series.segment(end - (L - 1), L);
    out.push_back(calibrate_window(window, static_cast<double>(end + 1)));
  }
  return out;
}

ParamPolys fit_parameter_polys(const std::vector<WindowEstimates>& estimates) {
  std::vector<double> t, mu, sigma, alpha;
  for (const auto& e : estimates) {
    if (!e.usable()) continue;
    t.push_back(e.t);
    mu.push_back(e.mu_hat);
    sigma.push_back(e.sigma_hat);
    alpha.push_back(e.alpha_hat);
  }
  if (t.size() < 4)
    throw FitError("fit_parameter_polys: fewer than 4 usable windows");

  const Eigen::Map<const Eigen::VectorXd> ts(t.data(), static_cast<Eigen::Index>(t.size()));
  auto fit = [&](const std::vector<double>& ys) {
    return poly_fit_cubic(
        ts, Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size())));
  };

  ParamPolys polys;
  polys.mu = fit(mu);
  polys.sigma = fit(sigma);
  polys.alpha = fit(alpha);
  return polys;
}

}  // namespace gsbm
