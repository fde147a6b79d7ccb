#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ilab/common.hpp"
#include "ilab/detail/signal.hpp"

namespace ilab {

// Matrix coefficient A(t) of x' + A(t)x = f(t). Square, fixed dimension.
// The custom variant is an in-process extension point and is the only one
// that cannot be serialized.
class CoefficientOperator {
 public:
  static CoefficientOperator constant(Eigen::MatrixXd value);
  static CoefficientOperator piecewise_constant(std::vector<double> breaks,
                                                std::vector<Eigen::MatrixXd> values);
  static CoefficientOperator sampled(std::vector<double> times,
                                     std::vector<Eigen::MatrixXd> values);
  static CoefficientOperator custom(int dimension,
                                    std::function<Eigen::MatrixXd(double)> eval);

  Eigen::MatrixXd at(double t, Side side = Side::post) const;
  int dimension() const { return dimension_; }
  SignalKind kind() const { return signal_.kind; }

  // Points where the signal may jump (piecewise-constant breaks; empty for
  // the other variants).
  const std::vector<double>& discontinuities() const;

  // Integral of ||A(s)|| over [a, b] by composite Simpson. The caller is
  // responsible for splitting at discontinuities; the upper endpoint is
  // evaluated with its pre-side limit.
  double norm_integral(double a, double b, int nodes = kQuadratureNodes) const;

 private:
  CoefficientOperator(detail::Signal<Eigen::MatrixXd> s, int dim);
  detail::Signal<Eigen::MatrixXd> signal_;
  int dimension_;
};

// Vector forcing f(t); same variants and conventions as CoefficientOperator.
class ForcingFunction {
 public:
  static ForcingFunction zero(int dimension);
  static ForcingFunction constant(Eigen::VectorXd value);
  static ForcingFunction piecewise_constant(std::vector<double> breaks,
                                            std::vector<Eigen::VectorXd> values);
  static ForcingFunction sampled(std::vector<double> times,
                                 std::vector<Eigen::VectorXd> values);
  static ForcingFunction custom(int dimension,
                                std::function<Eigen::VectorXd(double)> eval);

  Eigen::VectorXd at(double t, Side side = Side::post) const;
  int dimension() const { return dimension_; }
  SignalKind kind() const { return signal_.kind; }
  const std::vector<double>& discontinuities() const;

  // True for the exactly-zero constant signal.
  bool is_zero() const;

  // sup of ||f(t)|| over [0, t_max]. Exact for the three data-backed variants
  // (the sup is attained at stored values); a uniform grid of grid_points
  // samples for the custom variant.
  double sup_norm(double t_max, int grid_points = 2049) const;

 private:
  ForcingFunction(detail::Signal<Eigen::VectorXd> s, int dim);
  detail::Signal<Eigen::VectorXd> signal_;
  int dimension_;
};

}  // namespace ilab
