#include "gsbm/poly.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <vector>

#include "gsbm/errors.hpp"

namespace gsbm {

double poly_eval(const CubicPoly& p, double t) {
  return p.a[0] + t * (p.a[1] + t * (p.a[2] + t * p.a[3]));
}

CubicPoly poly_fit_cubic(const Eigen::VectorXd& ts, const Eigen::VectorXd& ys) {
  if (ts.size() != ys.size()) throw DomainError("poly_fit_cubic: size mismatch");
  const Eigen::Index n = ts.size();
  if (n < 4) throw DomainError("poly_fit_cubic: need at least 4 points");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!std::isfinite(ts(i)) || !std::isfinite(ys(i)))
      throw DomainError("poly_fit_cubic: non-finite input");

  std::vector<double> sorted(ts.data(), ts.data() + n);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("poly_fit_cubic: abscissae must be distinct");

  Eigen::MatrixXd design(n, 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = ts(i);
    design(i, 0) = 1.0;
    design(i, 1) = t;
    design(i, 2) = t * t;
    design(i, 3) = t * t * t;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 4) throw FitError("poly_fit_cubic: rank-deficient design");
  const Eigen::Vector4d coef = qr.solve(ys);

  CubicPoly p;
  for (int i = 0; i < 4; ++i) p.a[static_cast<std::size_t>(i)] = coef(i);
  return p;
}

}  // namespace gsbm
