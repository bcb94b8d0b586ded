#pragma once

#include <Eigen/Core>
#include <array>

namespace gsbm {

// Cubic polynomial a0 + a1 t + a2 t^2 + a3 t^3.
struct CubicPoly {
  std::array<double, 4> a{0.0, 0.0, 0.0, 0.0};
};

double poly_eval(const CubicPoly& p, double t);

// Least-squares cubic fit through (ts, ys), solved by column-pivoted QR of
// the 4-column Vandermonde design. Needs >= 4 distinct abscissae.
CubicPoly poly_fit_cubic(const Eigen::VectorXd& ts, const Eigen::VectorXd& ys);

}  // namespace gsbm
