#include "gsbm/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "gsbm/errors.hpp"

namespace gsbm {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                             const Eigen::VectorXd& scale, double tol, int max_iter) {
  const Eigen::Index n = x0.size();
  if (step.size() != n || scale.size() != n)
    throw DomainError("nelder_mead: inconsistent dimensions");

  std::vector<Eigen::VectorXd> verts(static_cast<std::size_t>(n) + 1, x0);
  std::vector<double> fv(static_cast<std::size_t>(n) + 1);
  for (Eigen::Index i = 0; i < n; ++i) verts[static_cast<std::size_t>(i) + 1](i) += step(i);
  for (std::size_t i = 0; i < verts.size(); ++i) fv[i] = f(verts[i]);

  std::vector<std::size_t> order(verts.size());
  auto sort_simplex = [&]() {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
  };

  auto diameter = [&]() {
    double d = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
      double lo = verts[0](c), hi = verts[0](c);
      for (const auto& v : verts) {
        lo = std::min(lo, v(c));
        hi = std::max(hi, v(c));
      }
      d = std::max(d, (hi - lo) / scale(c));
    }
    return d;
  };

  NelderMeadResult res;
  for (int iter = 0; iter < max_iter; ++iter) {
    sort_simplex();
    if (diameter() < tol) {
      res.x = verts[order[0]];
      res.fmin = fv[order[0]];
      res.iterations = iter;
      res.converged = true;
      return res;
    }

    const std::size_t best = order[0];
    const std::size_t worst = order[order.size() - 1];
    const std::size_t second_worst = order[order.size() - 2];

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (i != worst) centroid += verts[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - verts[worst]);
    const double fr = f(reflected);

    if (fr < fv[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - verts[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        verts[worst] = expanded;
        fv[worst] = fe;
      } else {
        verts[worst] = reflected;
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      verts[worst] = reflected;
      fv[worst] = fr;
    } else {
      const Eigen::VectorXd contracted =
          fr < fv[worst] ? centroid + 0.5 * (reflected - centroid)
                         : centroid + 0.5 * (verts[worst] - centroid);
      const double fc = f(contracted);
      if (fc < std::min(fr, fv[worst])) {
        verts[worst] = contracted;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i < verts.size(); ++i) {
          if (i == best) continue;
          verts[i] = verts[best] + 0.5 * (verts[i] - verts[best]);
          fv[i] = f(verts[i]);
        }
      }
    }
  }

  sort_simplex();
  res.x = verts[order[0]];
  res.fmin = fv[order[0]];
  res.iterations = max_iter;
  res.converged = false;
  return res;
}

}  // namespace gsbm
