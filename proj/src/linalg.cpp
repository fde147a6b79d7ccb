#include "ilab/linalg.hpp"

#include <limits>

#include "ilab/common.hpp"
#include "ilab/errors.hpp"

namespace ilab {

double condition_estimate(const Eigen::MatrixXd& m) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double rc = lu.rcond();
  if (!(rc > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / rc;
}

namespace {

Eigen::PartialPivLU<Eigen::MatrixXd> checked_lu(const Eigen::MatrixXd& m,
                                                const std::string& context) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double rc = lu.rcond();
  if (!(rc > 1.0 / kConditionLimit)) {
    const double cond =
        rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    throw NumericalError(context + ": operator numerically singular (condition estimate " +
                         std::to_string(cond) + ")");
  }
  return lu;
}

}  // namespace

Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& m,
                              const Eigen::MatrixXd& rhs,
                              const std::string& context) {
  return checked_lu(m, context).solve(rhs);
}

Eigen::MatrixXd inverse_checked(const Eigen::MatrixXd& m,
                                const std::string& context) {
  return checked_lu(m, context).inverse();
}

}  // namespace ilab
