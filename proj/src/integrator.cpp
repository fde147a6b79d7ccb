#include "ilab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "ilab/detail/rk4.hpp"
#include "ilab/errors.hpp"
#include "ilab/evolution.hpp"
#include "ilab/linalg.hpp"

namespace ilab {

Trajectory::Trajectory(std::vector<double> times, std::vector<Eigen::VectorXd> states,
                       std::vector<JumpRecord> jumps, double max_step)
    : times_(std::move(times)),
      states_(std::move(states)),
      jumps_(std::move(jumps)),
      max_step_(max_step) {
  if (times_.empty() || times_.size() != states_.size())
    throw std::invalid_argument("trajectory: times and states must match and be nonempty");
}

const Eigen::VectorXd& Trajectory::value_near(double t, double tol) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  auto idx = static_cast<std::size_t>(it - times_.begin());
  // lower_bound lands at the first node >= t; the one before may be closer.
  if (idx == times_.size() ||
      (idx > 0 && std::abs(times_[idx - 1] - t) < std::abs(times_[idx] - t)))
    --idx;
  if (std::abs(times_[idx] - t) > tol)
    throw std::invalid_argument("trajectory: no sample within tolerance of t=" +
                                std::to_string(t));
  return states_[idx];
}

std::vector<std::pair<double, double>> Trajectory::norm_samples() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(times_.size());
  for (std::size_t i = 0; i < times_.size(); ++i)
    out.emplace_back(times_[i], inf_norm(states_[i]));
  return out;
}

namespace detail {
namespace {

// Interior discontinuities of the signals between `from` and `to`, ordered
// along the direction of integration.
std::vector<double> segment_cuts(const CoefficientOperator& A,
                                 const ForcingFunction* f, double from, double to) {
  const double lo = std::min(from, to), hi = std::max(from, to);
  std::vector<double> cuts;
  auto take = [&](const std::vector<double>& pts) {
    for (double p : pts)
      if (p > lo && p < hi) cuts.push_back(p);
  };
  take(A.discontinuities());
  if (f) take(f->discontinuities());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (to < from) std::reverse(cuts.begin(), cuts.end());
  return cuts;
}

template <class State, class DerivForPiece>
State sweep(const CoefficientOperator& A, const ForcingFunction* f, double from,
            double to, State y, double h_max, DerivForPiece&& deriv_for,
            const std::function<void(double, const State&)>& sink) {
  auto cuts = segment_cuts(A, f, from, to);
  cuts.push_back(to);
  double t = from;
  for (double next : cuts) {
    const double hi = std::max(t, next);
    auto deriv = deriv_for(hi);
    if (sink)
      y = rk4_integrate(t, next, std::move(y), h_max, deriv,
                        [&](double s, const State& v) { sink(s, v); });
    else
      y = rk4_integrate(t, next, std::move(y), h_max, deriv,
                        [](double, const State&) {});
    t = next;
  }
  return y;
}

}  // namespace

Eigen::VectorXd integrate_state(const CoefficientOperator& A, const ForcingFunction* f,
                                double from, double to, Eigen::VectorXd x,
                                double h_max, const StateSink& sink) {
  return sweep<Eigen::VectorXd>(
      A, f, from, to, std::move(x), h_max,
      [&](double hi) {
        // Evaluate the pre-side limit at the piece's upper end so the last
        // RK4 stage never samples the next piece of a piecewise signal.
        return [&A, f, hi](double t, const Eigen::VectorXd& v) -> Eigen::VectorXd {
          const Side side = t >= hi ? Side::pre : Side::post;
          Eigen::VectorXd d = -(A.at(t, side) * v);
          if (f) d += f->at(t, side);
          return d;
        };
      },
      sink);
}

Eigen::MatrixXd integrate_operator(const CoefficientOperator& A, double from,
                                   double to, Eigen::MatrixXd y, double h_max,
                                   const OperatorSink& sink) {
  return sweep<Eigen::MatrixXd>(
      A, nullptr, from, to, std::move(y), h_max,
      [&](double hi) {
        return [&A, hi](double t, const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
          return -(A.at(t, t >= hi ? Side::pre : Side::post) * m);
        };
      },
      sink);
}

}  // namespace detail

Eigen::VectorXd flow(const CoefficientOperator& A, const ForcingFunction& f,
                     double t0, double t1, const Eigen::VectorXd& x0, double h_max) {
  if (!(t1 >= t0)) throw std::invalid_argument("flow: needs t0 <= t1");
  if (A.dimension() != f.dimension() || x0.size() != A.dimension())
    throw std::invalid_argument("flow: dimension mismatch");
  return detail::integrate_state(A, &f, t0, t1, x0, h_max);
}

Eigen::VectorXd flow(const CoefficientOperator& A, double t0, double t1,
                     const Eigen::VectorXd& x0, double h_max) {
  if (!(t1 >= t0)) throw std::invalid_argument("flow: needs t0 <= t1");
  if (x0.size() != A.dimension())
    throw std::invalid_argument("flow: dimension mismatch");
  return detail::integrate_state(A, nullptr, t0, t1, x0, h_max);
}

namespace {

void check_forcing_fits(const ImpulsiveSystem& system, const Forcing& forcing) {
  if (forcing.dimension() != system.dimension())
    throw std::invalid_argument("forcing dimension does not match system");
  if (forcing.alpha_count() != system.schedule().size())
    throw std::invalid_argument("need exactly one jump offset per impulse (" +
                                std::to_string(forcing.alpha_count()) + " vs " +
                                std::to_string(system.schedule().size()) + ")");
  const double tol = 1e-12 * std::max(1.0, system.horizon());
  for (double brk : forcing.f().discontinuities()) {
    if (brk <= 0.0 || brk >= system.horizon()) continue;
    bool matched = false;
    for (double t : system.schedule().times())
      if (std::abs(t - brk) <= tol) {
        matched = true;
        break;
      }
    if (!matched)
      throw std::invalid_argument("forcing break at t=" + std::to_string(brk) +
                                  " does not coincide with any impulse instant");
  }
}

[[noreturn]] void rethrow_with_interval(const NumericalError& e, double a, double b) {
  char msg[192];
  std::snprintf(msg, sizeof msg, "%s in interval [%.17g, %.17g]", e.what(), a, b);
  throw NumericalError(msg, e.at());
}

}  // namespace

Trajectory solve_ivp(const ImpulsiveSystem& system, const Forcing& forcing,
                     const Eigen::VectorXd& x0, double h_max) {
  check_forcing_fits(system, forcing);
  if (x0.size() != system.dimension())
    throw std::invalid_argument("solve_ivp: initial state dimension mismatch");
  if (!x0.allFinite())
    throw std::invalid_argument("solve_ivp: initial state must be finite");

  std::vector<double> times{0.0};
  std::vector<Eigen::VectorXd> states{x0};
  std::vector<JumpRecord> jumps;
  const detail::StateSink sink = [&](double t, const Eigen::VectorXd& v) {
    times.push_back(t);
    states.push_back(v);
  };

  Eigen::VectorXd x = x0;
  double t = 0.0;
  const auto& sched = system.schedule();
  for (std::size_t i = 0; i < sched.size(); ++i) {
    const double tau = sched.time(i);
    try {
      x = detail::integrate_state(system.coefficients(), &forcing.f(), t, tau, x,
                                  h_max, sink);
    } catch (const NumericalError& e) {
      rethrow_with_interval(e, t, tau);
    }
    JumpRecord rec;
    rec.time = tau;
    rec.pre = x;
    rec.post = system.jumps().at(i) * x + forcing.alpha(i);
    if (!rec.post.allFinite()) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "integration overflow: nonfinite state after jump at t=%.17g", tau);
      throw NumericalError(msg, tau);
    }
    x = rec.post;
    states.back() = rec.post;  // sample at tau is the post value
    jumps.push_back(std::move(rec));
    t = tau;
  }
  if (t < system.horizon()) {
    try {
      x = detail::integrate_state(system.coefficients(), &forcing.f(), t,
                                  system.horizon(), x, h_max, sink);
    } catch (const NumericalError& e) {
      rethrow_with_interval(e, t, system.horizon());
    }
  }
  return Trajectory(std::move(times), std::move(states), std::move(jumps), h_max);
}

Eigen::VectorXd representation_solution(const ImpulsiveSystem& system,
                                        const Forcing& forcing,
                                        const Eigen::VectorXd& x0, double t,
                                        double h_max) {
  return representation_solution(FundamentalSolution(system, h_max), forcing, x0, t);
}

Eigen::VectorXd representation_solution(const FundamentalSolution& fundamental,
                                        const Forcing& forcing,
                                        const Eigen::VectorXd& x0, double t) {
  const ImpulsiveSystem& system = fundamental.system();
  check_forcing_fits(system, forcing);
  if (x0.size() != system.dimension())
    throw std::invalid_argument("representation: initial state dimension mismatch");
  if (!(t >= 0.0) || t > system.horizon())
    throw std::invalid_argument("representation: t outside [0, horizon]");

  // Everything is accumulated in X^-1 units and mapped through X(t) once:
  // x(t) = X(t) [ x0 + sum X(tau_i^+)^-1 alpha_i + int X(s)^-1 f(s) ds ].
  Eigen::VectorXd acc = x0;
  const auto& sched = system.schedule();
  const std::size_t n_jumps = sched.count_at_or_before(t);
  for (std::size_t i = 0; i < n_jumps; ++i) {
    if (forcing.alpha(i).isZero(0.0)) continue;
    acc += solve_checked(fundamental.at(sched.time(i), Side::post), forcing.alpha(i),
                         "transported jump offset")
               .col(0);
  }

  if (!forcing.f().is_zero()) {
    std::vector<double> bounds{0.0};
    for (std::size_t i = 0; i < n_jumps; ++i)
      if (sched.time(i) < t) bounds.push_back(sched.time(i));
    bounds.push_back(t);
    const int panels = kQuadratureNodes - 1;
    for (std::size_t seg = 1; seg < bounds.size(); ++seg) {
      const double a = bounds[seg - 1], b = bounds[seg];
      std::vector<double> interior(panels - 1);
      for (int j = 1; j < panels; ++j)
        interior[j - 1] = a + (b - a) * j / panels;
      const auto Xs = fundamental.at_many(interior);
      auto node = [&](const Eigen::MatrixXd& X, double s, Side side) {
        return Eigen::VectorXd(
            solve_checked(X, forcing.f().at(s, side), "forcing integral").col(0));
      };
      Eigen::VectorXd sum = node(fundamental.at(a, Side::post), a, Side::post);
      for (int j = 1; j < panels; ++j)
        sum += (j % 2 == 1 ? 4.0 : 2.0) * node(Xs[j - 1], interior[j - 1], Side::post);
      sum += node(fundamental.at(b, Side::pre), b, Side::pre);
      acc += ((b - a) / panels / 3.0) * sum;
    }
  }
  return fundamental.at(t, Side::post) * acc;
}

}  // namespace ilab
