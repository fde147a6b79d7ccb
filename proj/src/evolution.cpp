#include "ilab/evolution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ilab/errors.hpp"
#include "ilab/linalg.hpp"

namespace ilab {

namespace {

void check_in_horizon(double t, double horizon, const char* what) {
  if (!(t >= 0.0) || t > horizon)
    throw std::invalid_argument(std::string(what) + " time " + std::to_string(t) +
                                " outside [0, " + std::to_string(horizon) + "]");
}

}  // namespace

FundamentalSolution::FundamentalSolution(ImpulsiveSystem system, double h_max)
    : system_(std::move(system)), h_max_(h_max) {
  const int n = system_.dimension();
  Eigen::MatrixXd y = Eigen::MatrixXd::Identity(n, n);
  double t = 0.0;
  checkpoints_.reserve(system_.schedule().size());
  for (std::size_t i = 0; i < system_.schedule().size(); ++i) {
    const double tau = system_.schedule().time(i);
    y = detail::integrate_operator(system_.coefficients(), t, tau, std::move(y), h_max_);
    Checkpoint cp;
    cp.time = tau;
    cp.pre = y;
    cp.post = system_.jumps().at(i) * y;
    y = cp.post;
    checkpoints_.push_back(std::move(cp));
    t = tau;
  }
}

Eigen::MatrixXd FundamentalSolution::at(double t, Side side) const {
  check_in_horizon(t, system_.horizon(), "fundamental matrix");
  const auto i = system_.schedule().last_at_or_before(t);
  if (i != ImpulseSchedule::npos && system_.schedule().time(i) == t)
    return side == Side::pre ? checkpoints_[i].pre : checkpoints_[i].post;
  const int n = system_.dimension();
  const double t0 = i == ImpulseSchedule::npos ? 0.0 : checkpoints_[i].time;
  Eigen::MatrixXd y = i == ImpulseSchedule::npos ? Eigen::MatrixXd::Identity(n, n)
                                                 : checkpoints_[i].post;
  return detail::integrate_operator(system_.coefficients(), t0, t, std::move(y), h_max_);
}

std::vector<Eigen::MatrixXd> FundamentalSolution::at_many(
    const std::vector<double>& ascending_times) const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(ascending_times.size());
  const int n = system_.dimension();
  double carry_t = 0.0;
  Eigen::MatrixXd carry;
  auto carry_interval = ImpulseSchedule::npos;
  bool have_carry = false;
  double prev_query = -1.0;
  for (double t : ascending_times) {
    if (t < prev_query)
      throw std::invalid_argument("at_many: times must be ascending");
    prev_query = t;
    check_in_horizon(t, system_.horizon(), "fundamental matrix");
    const auto i = system_.schedule().last_at_or_before(t);
    if (i != ImpulseSchedule::npos && system_.schedule().time(i) == t) {
      out.push_back(checkpoints_[i].post);
      continue;  // leave the carry alone; later times may still use it
    }
    if (!have_carry || i != carry_interval || t < carry_t) {
      carry_t = i == ImpulseSchedule::npos ? 0.0 : checkpoints_[i].time;
      carry = i == ImpulseSchedule::npos ? Eigen::MatrixXd::Identity(n, n)
                                         : checkpoints_[i].post;
      carry_interval = i;
      have_carry = true;
    }
    carry = detail::integrate_operator(system_.coefficients(), carry_t, t,
                                       std::move(carry), h_max_);
    carry_t = t;
    out.push_back(carry);
  }
  return out;
}

Eigen::MatrixXd fundamental_matrix(const ImpulsiveSystem& system, double t,
                                   double h_max) {
  return FundamentalSolution(system, h_max).at(t);
}

std::vector<std::pair<double, double>> fundamental_norm_samples(
    const ImpulsiveSystem& system, double h_max) {
  std::vector<std::pair<double, double>> out;
  const int n = system.dimension();
  Eigen::MatrixXd y = Eigen::MatrixXd::Identity(n, n);
  out.emplace_back(0.0, operator_inf_norm(y));
  const detail::OperatorSink sink = [&](double t, const Eigen::MatrixXd& m) {
    out.emplace_back(t, operator_inf_norm(m));
  };
  double t = 0.0;
  for (std::size_t i = 0; i < system.schedule().size(); ++i) {
    const double tau = system.schedule().time(i);
    y = detail::integrate_operator(system.coefficients(), t, tau, std::move(y),
                                   h_max, sink);
    y = system.jumps().at(i) * y;
    out.emplace_back(tau, operator_inf_norm(y));
    t = tau;
  }
  if (t < system.horizon())
    detail::integrate_operator(system.coefficients(), t, system.horizon(),
                               std::move(y), h_max, sink);
  return out;
}

Eigen::MatrixXd evolution_operator(const FundamentalSolution& fundamental,
                                   double t, double s) {
  const double horizon = fundamental.system().horizon();
  check_in_horizon(t, horizon, "evolution operator");
  check_in_horizon(s, horizon, "evolution operator");
  Eigen::MatrixXd xt = fundamental.at(t, Side::post);
  if (s == 0.0) return xt;  // X(0) = I
  const Eigen::MatrixXd xs = fundamental.at(s, Side::post);
  // Right-inverse via the transposed system: C = (X(s)^T \ X(t)^T)^T.
  return solve_checked(xs.transpose(), xt.transpose(),
                       "evolution operator: fundamental matrix at s=" + std::to_string(s))
      .transpose();
}

Eigen::MatrixXd evolution_operator(const ImpulsiveSystem& system, double t,
                                   double s, double h_max) {
  return evolution_operator(FundamentalSolution(system, h_max), t, s);
}

double semigroup_residual(const FundamentalSolution& fundamental, double t,
                          double tau, double s) {
  const Eigen::MatrixXd direct = evolution_operator(fundamental, t, s);
  const Eigen::MatrixXd split = evolution_operator(fundamental, t, tau) *
                                evolution_operator(fundamental, tau, s);
  return operator_inf_norm(direct - split);
}

double semigroup_residual(const ImpulsiveSystem& system, double t, double tau,
                          double s, double h_max) {
  return semigroup_residual(FundamentalSolution(system, h_max), t, tau, s);
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::same_interval: return "same-interval";
    case Branch::forward: return "forward";
    case Branch::backward: return "backward";
  }
  return "?";
}

Branch branch_of(const ImpulseSchedule& schedule, double t, double s) {
  if (t == s) return Branch::same_interval;
  const auto ct = schedule.count_at_or_before(t);
  const auto cs = schedule.count_at_or_before(s);
  if (t > s) return ct > cs ? Branch::forward : Branch::same_interval;
  return cs > ct ? Branch::backward : Branch::same_interval;
}

NonImpulsiveEvolution::NonImpulsiveEvolution(CoefficientOperator A, double h_max)
    : A_(std::move(A)), h_max_(h_max) {}

Eigen::MatrixXd NonImpulsiveEvolution::at(double t, double s) const {
  const int n = A_.dimension();
  Eigen::MatrixXd y = Eigen::MatrixXd::Identity(n, n);
  if (t == s) return y;
  return detail::integrate_operator(A_, s, t, std::move(y), h_max_);
}

Eigen::MatrixXd evolution_from_G(const NonImpulsiveEvolution& G,
                                 const JumpSequence& jumps,
                                 const ImpulseSchedule& schedule, double t,
                                 double s) {
  if (jumps.size() != schedule.size())
    throw std::invalid_argument("evolution_from_G: one jump operator per impulse");
  if (!jumps.empty() && jumps.dimension() != G.dimension())
    throw std::invalid_argument("evolution_from_G: dimension mismatch");
  check_in_horizon(t, schedule.horizon(), "evolution operator");
  check_in_horizon(s, schedule.horizon(), "evolution operator");

  const auto& times = schedule.times();
  switch (branch_of(schedule, t, s)) {
    case Branch::same_interval:
      return G.at(t, s);
    case Branch::forward: {
      // C(t,s) = G(t,tau_j) B_j G(tau_j,tau_{j-1}) ... B_i G(tau_i,s)
      // over the impulses tau_i..tau_j inside (s, t].
      const std::size_t first = schedule.count_at_or_before(s);
      const std::size_t last = schedule.count_at_or_before(t) - 1;
      Eigen::MatrixXd m = G.at(t, times[last]);
      for (std::size_t j = last;; --j) {
        m = m * jumps.at(j);
        m = m * (j > first ? G.at(times[j], times[j - 1]) : G.at(times[first], s));
        if (j == first) break;
      }
      return m;
    }
    case Branch::backward: {
      // C(t,s) = G(t,tau_i) B_i^-1 G(tau_i,tau_{i+1}) ... B_j^-1 G(tau_j,s)
      // over the impulses tau_i..tau_j inside (t, s].
      const std::size_t first = schedule.count_at_or_before(t);
      const std::size_t last = schedule.count_at_or_before(s) - 1;
      Eigen::MatrixXd m = G.at(t, times[first]);
      for (std::size_t j = first; j <= last; ++j) {
        m = m * inverse_checked(jumps.at(j), "evolution operator: jump at t=" +
                                                 std::to_string(times[j]));
        m = m * (j < last ? G.at(times[j], times[j + 1]) : G.at(times[last], s));
      }
      return m;
    }
  }
  throw std::logic_error("evolution_from_G: bad branch");
}

double scalar_fundamental(const std::function<double(double)>& U,
                          const JumpSequence& jumps,
                          const ImpulseSchedule& schedule, double t) {
  if (jumps.size() != schedule.size())
    throw std::invalid_argument("scalar_fundamental: one jump factor per impulse");
  if (!jumps.empty() && jumps.dimension() != 1)
    throw std::invalid_argument("scalar_fundamental: jumps must be scalar");
  check_in_horizon(t, schedule.horizon(), "scalar fundamental");
  double prod = U(t);
  const auto count = schedule.count_at_or_before(t);
  for (std::size_t i = 0; i < count; ++i) prod *= jumps.at(i)(0, 0);
  return prod;
}

}  // namespace ilab
