#include "gsbm/grid.hpp"

#include <algorithm>
#include <cmath>

namespace gsbm {

TimeGrid::TimeGrid(Eigen::VectorXd points) : points_(std::move(points)) {
  if (points_.size() < 2) throw DomainError("TimeGrid needs at least 2 points");
  for (Eigen::Index i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_(i))) throw DomainError("TimeGrid points must be finite");
    if (i > 0 && points_(i) <= points_(i - 1))
      throw DomainError("TimeGrid points must be strictly increasing");
  }
}

TimeGrid TimeGrid::regular(double t0, double t1, Eigen::Index steps) {
  if (steps < 1) throw DomainError("TimeGrid::regular needs at least 1 step");
  if (!(t1 > t0)) throw DomainError("TimeGrid::regular needs t1 > t0");
  Eigen::VectorXd pts(steps + 1);
  for (Eigen::Index i = 0; i <= steps; ++i)
    pts(i) = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(steps);
  pts(steps) = t1;
  return TimeGrid(std::move(pts));
}

Eigen::Index TimeGrid::interval_index(double t) const {
  if (t < start() || t > end()) throw DomainError("time outside grid span");
  const double* begin = points_.data();
  const double* last = begin + points_.size();
  // First point strictly greater than t, then step back one interval.
  const double* it = std::upper_bound(begin, last, t);
  Eigen::Index idx = static_cast<Eigen::Index>(it - begin) - 1;
  if (idx >= points_.size() - 1) idx = points_.size() - 2;  // right endpoint
  return idx;
}

bool TimeGrid::has_point(double t, double tol) const {
  const double* begin = points_.data();
  const double* last = begin + points_.size();
  const double* it = std::lower_bound(begin, last, t - tol);
  return it != last && std::abs(*it - t) <= tol;
}

PiecewiseConstantFn::PiecewiseConstantFn(TimeGrid grid, Eigen::VectorXd values,
                                         Codomain codomain)
    : grid_(std::move(grid)), values_(std::move(values)), codomain_(codomain) {
  if (values_.size() != grid_.size() - 1)
    throw DomainError("piecewise-constant function needs one value per grid interval");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_(i)))
      throw DomainError("piecewise-constant values must be finite");
    if (codomain_ && (values_(i) < codomain_->first || values_(i) > codomain_->second))
      throw DomainError("piecewise-constant value outside declared codomain");
  }
}

PiecewiseConstantFn PiecewiseConstantFn::constant(double t0, double t1, double value,
                                                  Codomain codomain) {
  Eigen::VectorXd pts(2);
  pts << t0, t1;
  Eigen::VectorXd vals(1);
  vals << value;
  return PiecewiseConstantFn(TimeGrid(std::move(pts)), std::move(vals), codomain);
}

double PiecewiseConstantFn::operator()(double t) const {
  return values_(grid_.interval_index(t));
}

double PiecewiseConstantFn::integrate(double a, double b) const {
  if (a > b) throw DomainError("integrate: a > b");
  if (!grid_.spans(a, b)) throw DomainError("integrate: range outside grid span");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double lo = std::max(a, grid_[i]);
    const double hi = std::min(b, grid_[i + 1]);
    if (hi > lo) acc += values_(i) * (hi - lo);
  }
  return acc;
}

std::vector<double> PiecewiseConstantFn::breakpoints_in(double a, double b) const {
  std::vector<double> out;
  for (Eigen::Index i = 1; i + 1 < grid_.size(); ++i) {
    const double t = grid_[i];
    if (t > a && t < b && values_(i) != values_(i - 1)) out.push_back(t);
  }
  return out;
}

}  // namespace gsbm
