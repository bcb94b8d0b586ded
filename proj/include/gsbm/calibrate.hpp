#pragma once

#include <Eigen/Core>
#include <vector>

#include "gsbm/poly.hpp"
#include "gsbm/skew_normal.hpp"

namespace gsbm {

// Per-window parameter estimates; t is the 1-based time index of the window
// end, so the window covers [t - L + 1, t].
struct WindowEstimates {
  enum class Flag { ok, degenerate, fit_failed };

  double t = 0.0;
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
  double alpha_hat = 0.0;
  double loglik = 0.0;
  Flag flag = Flag::ok;

  bool usable() const { return flag == Flag::ok; }
};

const char* to_string(WindowEstimates::Flag flag);

// Skew-normal fit of the L-1 log-increments of one window, mapped to
// one-step (mu, sigma, alpha). Returns a flagged record instead of
// fabricating estimates when the window is degenerate or the fit fails.
WindowEstimates calibrate_window(const Eigen::VectorXd& window, double t_index);

// Rolling MLE over windows of length L ending at t = L, ..., N - horizon.
// NaN entries mark gaps; windows touching a gap are flagged degenerate.
std::vector<WindowEstimates> rolling_calibrate(const Eigen::VectorXd& series, int L,
                                               int horizon = 0);

// Cubic summaries of the estimate paths, one polynomial per parameter.
struct ParamPolys {
  CubicPoly mu;
  CubicPoly sigma;
  CubicPoly alpha;
};

// Least-squares cubic per parameter over the non-flagged estimates;
// needs at least 4 usable windows.
ParamPolys fit_parameter_polys(const std::vector<WindowEstimates>& estimates);

}  // namespace gsbm
