#include "gsbm/skew_bm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsbm/normal.hpp"
#include "gsbm/quadrature.hpp"

namespace gsbm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sign_of(double y) { return (y > 0.0) - (y < 0.0); }

}  // namespace

SkewStepKernel::SkewStepKernel(double alpha_, double dt_, double x0_)
    : alpha(alpha_), dt(dt_), x0(x0_) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("SkewStepKernel: alpha outside [0,1]");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("SkewStepKernel: dt must be positive");
  if (!std::isfinite(x0)) throw DomainError("SkewStepKernel: x0 must be finite");
}

double density_const(const SkewStepKernel& k, double y) {
  const double sd = std::sqrt(k.dt);
  const double skew = (2.0 * k.alpha - 1.0) * sign_of(y);
  const double direct = norm_pdf((y - k.x0) / sd);
  const double image = norm_pdf((std::abs(k.x0) + std::abs(y)) / sd);
  return std::max(0.0, (direct + skew * image) / sd);
}

double step_cdf_const(const SkewStepKernel& k, double y) {
  const double sd = std::sqrt(k.dt);
  const double a = std::abs(k.x0);
  const double c = 2.0 * k.alpha - 1.0;
  double v;
  if (y <= 0.0)
    v = norm_cdf((y - k.x0) / sd) - c * norm_cdf((y - a) / sd);
  else
    v = norm_cdf((y - k.x0) / sd) - c * norm_sf((y + a) / sd);
  return std::clamp(v, 0.0, 1.0);
}

double sample_step(const SkewStepKernel& k, RngStream& rng) {
  const double u = rng.next_unit();
  const double sd = std::sqrt(k.dt);

  double lo = k.x0 - 10.0 * sd;
  double hi = k.x0 + 10.0 * sd;
  for (int i = 0; step_cdf_const(k, lo) > u; ++i) {
    if (i > 60) throw NumericError("sample_step: lower bracket not found");
    lo -= 10.0 * sd;
  }
  for (int i = 0; step_cdf_const(k, hi) < u; ++i) {
    if (i > 60) throw NumericError("sample_step: upper bracket not found");
    hi += 10.0 * sd;
  }

  // Bisection narrows past the kink at zero, then secant finishes; any
  // secant step that leaves the bracket falls back to bisection.
  const double tol = 1e-12 * sd;
  double flo = step_cdf_const(k, lo) - u;
  double fhi = step_cdf_const(k, hi) - u;
  double y0 = lo, f0 = flo, y1 = hi, f1 = fhi;
  for (int iter = 0; iter < 240; ++iter) {
    if (hi - lo <= tol) break;
    double cand;
    const bool use_secant = iter >= 10 && f1 != f0;
    if (use_secant) {
      cand = y1 - f1 * (y1 - y0) / (f1 - f0);
      if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    } else {
      cand = 0.5 * (lo + hi);
    }
    const double fc = step_cdf_const(k, cand) - u;
    y0 = y1;
    f0 = f1;
    y1 = cand;
    f1 = fc;
    if (fc == 0.0) return cand;
    if (fc < 0.0) {
      lo = cand;
      flo = fc;
    } else {
      hi = cand;
      fhi = fc;
    }
  }
  if (hi - lo > 1e6 * tol)
    throw NumericError("sample_step: root refinement stalled", hi - lo);
  return 0.5 * (lo + hi);
}

SbmPath simulate_path(const PiecewiseConstantFn& alpha, const TimeGrid& grid,
                      double x0, StreamKey key) {
  if (!alpha.grid().spans(grid.start(), grid.end()))
    throw DomainError("simulate_path: grid outside alpha's domain");
  const double tol = 1e-9 * (grid.end() - grid.start());
  for (double b : alpha.breakpoints_in(grid.start(), grid.end()))
    if (!grid.has_point(b, tol))
      throw DomainError("simulate_path: grid does not refine alpha's grid");

  const Eigen::Index n = grid.size();
  Eigen::VectorXd states(n);
  states(0) = x0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double dt = grid[i + 1] - grid[i];
    SkewStepKernel kernel(alpha(grid[i]), dt, states(i));
    RngStream rng(key.seed, key.stream, static_cast<std::uint64_t>(i));
    states(i + 1) = sample_step(kernel, rng);
  }
  return SbmPath{grid, std::move(states), key};
}

DensityQuery::DensityQuery(double s_, double t_, double x_, double y_,
                           PiecewiseConstantFn alpha)
    : s(s_), t(t_), x(x_), y(y_), alpha_fn(std::move(alpha)) {
  if (!(s < t)) throw DomainError("DensityQuery: needs s < t");
  if (!std::isfinite(x) || !std::isfinite(y))
    throw DomainError("DensityQuery: states must be finite");
  if (!alpha_fn.grid().spans(s, t))
    throw DomainError("DensityQuery: alpha_fn must cover [s, t]");
  if (alpha_fn.values().minCoeff() < 0.0 || alpha_fn.values().maxCoeff() > 1.0)
    throw DomainError("DensityQuery: alpha values outside [0,1]");
}

double density_inhom(double s, double t, double x, double y,
                     const PiecewiseConstantFn& alpha_fn) {
  if (!(s < t)) throw DomainError("density_inhom: needs s < t");
  if (!std::isfinite(x) || !std::isfinite(y))
    throw DomainError("density_inhom: states must be finite");
  if (!alpha_fn.grid().spans(s, t))
    throw DomainError("density_inhom: alpha_fn must cover [s, t]");
  if (alpha_fn.values().minCoeff() < 0.0 || alpha_fn.values().maxCoeff() > 1.0)
    throw DomainError("density_inhom: alpha values outside [0,1]");

  const double span = t - s;
  if (span <= 1e-12)
    throw NumericError("density_inhom: degenerate horizon t - s <= 1e-12");
  const double sd = std::sqrt(span);

  // y = 0: the printed formula is ambiguous there; return the average of the
  // two one-sided limits, i.e. the continuous completion phi_span(x).
  if (y == 0.0) return norm_pdf(x / sd) / sd;

  const double sgn_y = sign_of(y);

  double image = 0.0;
  if (x * y > 0.0)
    image = (norm_pdf((y - x) / sd) - norm_pdf((y + x) / sd)) / sd;

  // First-arrival integral over u in (0, span), split at the alpha
  // breakpoints so each tanh-sinh panel sees a smooth integrand.
  std::vector<double> cuts{0.0};
  for (double b : alpha_fn.breakpoints_in(s, t)) cuts.push_back(b - s);
  cuts.push_back(span);
  std::sort(cuts.begin(), cuts.end());

  const std::size_t nseg = cuts.size() - 1;
  TanhSinhOptions opt;
  opt.abs_tol = 1e-9 / static_cast<double>(nseg);
  std::int64_t budget = 1 << 16;

  double integral = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i < nseg; ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    // u - 0 and span - u, both exact near their endpoints.
    auto integrand = [&](double u, double u_from_a, double b_minus_u) -> double {
      const double u_from_0 = a + u_from_a;
      const double rem = (span - b) + b_minus_u;
      if (u_from_0 <= 0.0 || rem <= 0.0) return 0.0;
      const double expo = -y * y / (2.0 * rem) - x * x / (2.0 * u_from_0);
      if (expo < -700.0) return 0.0;
      const double alpha_u = alpha_fn(u + s);
      const double c = 1.0 + (2.0 * alpha_u - 1.0) * sgn_y;
      if (c == 0.0) return 0.0;
      return std::abs(y) * c * std::exp(expo) /
             (kTwoPi * rem * std::sqrt(rem) * std::sqrt(u_from_0));
    };
    opt.max_evaluations = budget;
    const QuadratureResult r = tanh_sinh(integrand, a, b, opt);
    budget -= r.evaluations;
    integral += r.value;
    err += r.error;
    if (!r.converged && err > 1e-8)
      throw NumericError("density_inhom: quadrature budget exhausted", err);
  }

  return std::max(0.0, integral + image);
}

double density_inhom(const DensityQuery& q) {
  return density_inhom(q.s, q.t, q.x, q.y, q.alpha_fn);
}

double azzalini_marginal_sample(double alpha, double t, RngStream& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("azzalini_marginal_sample: alpha outside [0,1]");
  if (!(t > 0.0)) throw DomainError("azzalini_marginal_sample: t must be positive");
  const double sd = std::sqrt(t);
  const double w1 = sd * rng.next_normal();
  const double w2 = sd * rng.next_normal();
  if (alpha == 0.0) return -std::abs(w2);
  if (alpha == 1.0) return std::abs(w2);
  return 2.0 * std::sqrt(alpha * (1.0 - alpha)) * w1 + (2.0 * alpha - 1.0) * std::abs(w2);
}

double local_time_estimate(const SbmPath& path, double eps) {
  if (!(eps > 0.0)) throw DomainError("local_time_estimate: eps must be positive");
  if (path.grid.size() < 101)
    throw DomainError("local_time_estimate: path needs at least 100 steps");
  double occ = 0.0;
  for (Eigen::Index i = 0; i + 1 < path.grid.size(); ++i)
    if (std::abs(path.states(i)) <= eps) occ += path.grid[i + 1] - path.grid[i];
  return occ / (2.0 * eps);
}

}  // namespace gsbm
