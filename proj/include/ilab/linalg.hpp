#pragma once

#include <Eigen/Dense>
#include <string>

namespace ilab {

// Vector sup norm.
inline double inf_norm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.template lpNorm<Eigen::Infinity>();
}

// Induced operator infinity norm: max absolute row sum.
inline double operator_inf_norm(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

// 1-norm condition estimate via LU reciprocal condition; +inf when singular.
double condition_estimate(const Eigen::MatrixXd& m);

// LU solve m * x = rhs. Throws NumericalError naming `context` when the
// condition estimate of m exceeds kConditionLimit.
Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& m,
                              const Eigen::MatrixXd& rhs,
                              const std::string& context);

Eigen::MatrixXd inverse_checked(const Eigen::MatrixXd& m,
                                const std::string& context);

}  // namespace ilab
