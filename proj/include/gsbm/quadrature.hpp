#pragma once

#include <cstdint>
#include <functional>

namespace gsbm {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // refinement-difference / accumulated error estimate
  bool converged = false;
  std::int64_t evaluations = 0;
};

// Integrand receives (x, x - a, b - x); the endpoint distances are exact to
// rounding, so integrable endpoint singularities can be evaluated without
// cancellation.
using EndpointAwareFn = std::function<double(double, double, double)>;

struct TanhSinhOptions {
  double abs_tol = 1e-9;  // stop when successive levels differ by less
  int min_level = 3;
  int max_level = 12;
  std::int64_t max_evaluations = 1 << 16;
};

// Double-exponential quadrature on (a, b). Handles endpoint singularities
// of integrable type (e.g. u^{-1/2}) without special-casing.
QuadratureResult tanh_sinh(const EndpointAwareFn& f, double a, double b,
                           const TanhSinhOptions& opt = {});

struct GaussKronrodOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_intervals = 512;
};

// Globally adaptive Gauss-Kronrod 7/15 on [a, b]; always refines the
// interval with the largest error estimate first.
QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double a,
                               double b, const GaussKronrodOptions& opt = {});

}  // namespace gsbm
