#include "ilab/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ilab/linalg.hpp"

namespace ilab {

JumpSequence::JumpSequence(std::vector<Eigen::MatrixXd> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) return;
  const auto dim = ops_.front().rows();
  if (dim < 1) throw std::invalid_argument("jumps: empty operator");
  for (const auto& b : ops_)
    if (b.rows() != dim || b.cols() != dim)
      throw std::invalid_argument("jumps: operators must be square and same size");
  dimension_ = static_cast<int>(dim);
}

JumpSequence JumpSequence::constant(const Eigen::MatrixXd& op, std::size_t count) {
  return JumpSequence(std::vector<Eigen::MatrixXd>(count, op));
}

JumpSequence JumpSequence::identity(int dimension, std::size_t count) {
  return constant(Eigen::MatrixXd::Identity(dimension, dimension), count);
}

double JumpSequence::norm_bound() const {
  double b = 0.0;
  for (const auto& op : ops_) b = std::max(b, operator_inf_norm(op));
  return b;
}

namespace {

void check_breaks_on_schedule(const CoefficientOperator& A,
                              const ImpulseSchedule& schedule) {
  const double tol = 1e-12 * std::max(1.0, schedule.horizon());
  for (double brk : A.discontinuities()) {
    if (brk <= 0.0 || brk >= schedule.horizon()) continue;
    bool matched = false;
    for (double t : schedule.times())
      if (std::abs(t - brk) <= tol) {
        matched = true;
        break;
      }
    if (!matched)
      throw std::invalid_argument(
          "system: coefficient break at t=" + std::to_string(brk) +
          " does not coincide with any impulse instant");
  }
}

}  // namespace

ImpulsiveSystem::ImpulsiveSystem(CoefficientOperator A, JumpSequence jumps,
                                 ImpulseSchedule schedule)
    : A_(std::move(A)), jumps_(std::move(jumps)), schedule_(std::move(schedule)) {
  if (jumps_.size() != schedule_.size())
    throw std::invalid_argument("system: need exactly one jump operator per impulse (" +
                                std::to_string(jumps_.size()) + " vs " +
                                std::to_string(schedule_.size()) + ")");
  if (!jumps_.empty() && jumps_.dimension() != A_.dimension())
    throw std::invalid_argument("system: jump dimension does not match coefficient");
  check_breaks_on_schedule(A_, schedule_);
}

Forcing::Forcing(ForcingFunction f, std::vector<Eigen::VectorXd> alphas)
    : f_(std::move(f)), alphas_(std::move(alphas)) {
  for (const auto& a : alphas_)
    if (a.size() != f_.dimension())
      throw std::invalid_argument("forcing: jump offset dimension mismatch");
}

Forcing Forcing::none(int dimension, std::size_t impulse_count) {
  return Forcing(ForcingFunction::zero(dimension),
                 std::vector<Eigen::VectorXd>(impulse_count,
                                              Eigen::VectorXd::Zero(dimension)));
}

double Forcing::sup_alpha() const {
  double s = 0.0;
  for (const auto& a : alphas_) s = std::max(s, inf_norm(a));
  return s;
}

SystemBounds measure_bounds(const ImpulsiveSystem& system) {
  const auto& sched = system.schedule();
  if (sched.empty())
    throw std::invalid_argument("measure_bounds: needs at least one impulse");
  SystemBounds out;
  out.min_gap = sched.min_gap();
  out.max_gap = sched.max_gap();
  out.jump_norm_bound = system.jumps().norm_bound();
  const auto bounds = sched.interval_boundaries();
  for (std::size_t i = 1; i < bounds.size(); ++i)
    out.coeff_integral_bound =
        std::max(out.coeff_integral_bound,
                 system.coefficients().norm_integral(bounds[i - 1], bounds[i]));
  out.impulse_density = static_cast<double>(sched.size()) / sched.horizon();
  return out;
}

}  // namespace ilab
