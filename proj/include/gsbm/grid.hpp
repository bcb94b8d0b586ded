#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "gsbm/errors.hpp"

namespace gsbm {

// Strictly increasing sequence of times; the first point is the model's
// time origin. One grid unit is one observation period.
class TimeGrid {
 public:
  explicit TimeGrid(Eigen::VectorXd points);

  static TimeGrid regular(double t0, double t1, Eigen::Index steps);

  const Eigen::VectorXd& points() const { return points_; }
  Eigen::Index size() const { return points_.size(); }
  double start() const { return points_(0); }
  double end() const { return points_(points_.size() - 1); }
  double operator[](Eigen::Index i) const { return points_(i); }

  bool spans(double a, double b) const { return start() <= a && b <= end(); }

  // Index i of the interval [t_i, t_{i+1}) containing t; the right grid
  // endpoint maps to the last interval (cadlag convention).
  Eigen::Index interval_index(double t) const;

  bool has_point(double t, double tol) const;

 private:
  Eigen::VectorXd points_;
};

// Cadlag step function: one value per grid interval [t_i, t_{i+1}).
// Evaluation at the right grid endpoint returns the last interval's value.
class PiecewiseConstantFn {
 public:
  using Codomain = std::optional<std::pair<double, double>>;

  PiecewiseConstantFn(TimeGrid grid, Eigen::VectorXd values,
                      Codomain codomain = std::nullopt);

  static PiecewiseConstantFn constant(double t0, double t1, double value,
                                      Codomain codomain = std::nullopt);

  double operator()(double t) const;

  const TimeGrid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  const Codomain& codomain() const { return codomain_; }

  // Integral over [a, b] (exact for a step function).
  double integrate(double a, double b) const;

  // Interior jump locations strictly inside (a, b).
  std::vector<double> breakpoints_in(double a, double b) const;

 private:
  TimeGrid grid_;
  Eigen::VectorXd values_;
  Codomain codomain_;
};

inline double pc_eval(const PiecewiseConstantFn& f, double t) { return f(t); }

}  // namespace gsbm
