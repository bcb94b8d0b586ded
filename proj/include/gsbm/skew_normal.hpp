#pragma once

#include <Eigen/Core>

#include "gsbm/errors.hpp"

namespace gsbm {

inline constexpr double kLambdaMax = 20.0;

// Skew-normal MLE result for one rolling window.
struct SnFit {
  double xi = 0.0;      // location
  double omega = 1.0;   // scale, > 0
  double lambda = 0.0;  // shape, clamped to [-20, 20]
  double loglik = 0.0;
  bool converged = false;
};

struct SnFitError : FitError {
  SnFit best;  // best point seen across all starts
  SnFitError(const std::string& what, SnFit best_so_far)
      : FitError(what), best(best_so_far) {}
};

// Log-likelihood of SN(xi, omega, lambda):
//   sum log[(2/omega) phi((x-xi)/omega) Phi(lambda (x-xi)/omega)].
// The Phi factor is evaluated through a log-CDF that stays finite far in
// the tail.
double sn_loglik(double xi, double omega, double lambda, const Eigen::VectorXd& data);

// Multi-start Nelder-Mead fit (method-of-moments start plus lambda = +/-2
// perturbations), searched in (xi, log omega, lambda). Throws SnFitError
// with the best point attached when no start converges.
SnFit sn_mle(const Eigen::VectorXd& data);

// Method-of-moments starting point (also the stall fallback).
SnFit sn_method_of_moments(const Eigen::VectorXd& data);

// One-step drift/volatility/shape implied by a skew-normal fit of
// log-increments over steps of length dt:
//   delta = lambda/sqrt(1+lambda^2), alpha = (1+delta)/2,
//   sigma = omega/sqrt(dt),          mu = xi/dt + sigma^2/2.
struct GsbmStepParams {
  double mu;
  double sigma;
  double alpha;
};

GsbmStepParams map_sn_to_gsbm(const SnFit& fit, double dt);

}  // namespace gsbm
