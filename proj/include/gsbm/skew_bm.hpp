#pragma once

#include <Eigen/Core>

#include "gsbm/grid.hpp"
#include "gsbm/rng.hpp"

namespace gsbm {

// One-step transition law of skew Brownian motion under a constant shape
// parameter: the closed-form kernel
//   p(y) = phi_dt(y - x0) + sign(y) (2 alpha - 1) phi_dt(|x0| + |y|),
// where phi_dt is the centered Gaussian density with variance dt.
struct SkewStepKernel {
  double alpha;  // weight of the positive side, in [0, 1]
  double dt;     // step duration, > 0
  double x0;     // start state

  SkewStepKernel(double alpha_, double dt_, double x0_);
};

double density_const(const SkewStepKernel& k, double y);

// Antiderivative of density_const in terms of Gaussian CDFs; nondecreasing,
// 0 at -inf, 1 at +inf. With x0 = 0 it equals 1 - alpha at y = 0 exactly.
double step_cdf_const(const SkewStepKernel& k, double y);

// Exact inverse-transform sample of the one-step kernel; the root of
// step_cdf_const(y) = U is located to |dy| <= 1e-12 sqrt(dt).
double sample_step(const SkewStepKernel& k, RngStream& rng);

struct SbmPath {
  TimeGrid grid;
  Eigen::VectorXd states;  // one state per grid point
  StreamKey seed;
};

// Exact-step simulation with piecewise-constant shape: every grid interval
// is sampled from its constant-alpha kernel. The grid must refine alpha's
// grid (every alpha breakpoint is a grid point).
SbmPath simulate_path(const PiecewiseConstantFn& alpha, const TimeGrid& grid,
                      double x0, StreamKey key);

// Arguments of the time-inhomogeneous transition density p_alpha(t, y | s, x).
struct DensityQuery {
  double s, t;  // s < t
  double x, y;
  PiecewiseConstantFn alpha_fn;  // covers [s, t], values in [0, 1]

  DensityQuery(double s_, double t_, double x_, double y_, PiecewiseConstantFn alpha);
};

// Transition density of the time-inhomogeneous skew Brownian motion:
// a singular integral over the arrival time at zero plus an image term.
// Absolute quadrature error <= 1e-8; y = 0 returns the two-sided limit
// average. Throws NumericError if the refinement budget is exhausted.
double density_inhom(const DensityQuery& q);
double density_inhom(double s, double t, double x, double y,
                     const PiecewiseConstantFn& alpha_fn);

// 2 sqrt(alpha(1-alpha)) W1_t + (2 alpha - 1)|W2_t|; the marginal is
// skew-normal with scale sqrt(t) and shape (2a-1)/(2 sqrt(a(1-a))).
double azzalini_marginal_sample(double alpha, double t, RngStream& rng);

// Occupation-time estimate of the symmetric local time at zero:
// (1/2eps) sum 1{|X_{t_i}| <= eps} dt_i. Diagnostic; biased on coarse grids.
double local_time_estimate(const SbmPath& path, double eps);

}  // namespace gsbm
