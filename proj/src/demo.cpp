#include "ilab/demo.hpp"

#include <cmath>

namespace ilab::demo {

namespace {

Scenario scalar_uniform(double a, double b, double horizon) {
  auto schedule = ImpulseSchedule::uniform(1.0, horizon);
  const std::size_t m = schedule.size();
  return Scenario{
      ImpulsiveSystem(CoefficientOperator::constant(Eigen::MatrixXd::Constant(1, 1, a)),
                      JumpSequence::constant(Eigen::MatrixXd::Constant(1, 1, b), m),
                      std::move(schedule)),
      Forcing::none(1, m), Eigen::VectorXd::Ones(1)};
}

}  // namespace

Scenario halving(double horizon) { return scalar_uniform(0.0, 0.5, horizon); }

Scenario compensated(double horizon) {
  return scalar_uniform(1.0, std::exp(1.0), horizon);
}

}  // namespace ilab::demo
