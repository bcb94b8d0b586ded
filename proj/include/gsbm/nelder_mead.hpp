#pragma once

#include <Eigen/Core>
#include <functional>

namespace gsbm {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double fmin = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Derivative-free simplex minimizer. Convergence is declared when the
// simplex diameter, measured per coordinate against `scale`, drops below
// `tol`.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                             const Eigen::VectorXd& scale, double tol, int max_iter);

}  // namespace gsbm
