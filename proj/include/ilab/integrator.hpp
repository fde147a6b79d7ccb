#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "ilab/common.hpp"
#include "ilab/system.hpp"

namespace ilab {

class FundamentalSolution;  // evolution.hpp

// Pre- and post-jump state at one impulse instant.
struct JumpRecord {
  double time = 0.0;
  Eigen::VectorXd pre;
  Eigen::VectorXd post;
};

// Right-continuous sampled solution path. The stored sample at an impulse
// instant is the post-jump value; the matching pre-jump value lives in
// jump_records().
class Trajectory {
 public:
  Trajectory(std::vector<double> times, std::vector<Eigen::VectorXd> states,
             std::vector<JumpRecord> jumps, double max_step);

  std::size_t size() const { return times_.size(); }
  double time(std::size_t i) const { return times_[i]; }
  const Eigen::VectorXd& state(std::size_t i) const { return states_[i]; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Eigen::VectorXd>& states() const { return states_; }
  const std::vector<JumpRecord>& jump_records() const { return jumps_; }
  double max_step() const { return max_step_; }
  const Eigen::VectorXd& final_state() const { return states_.back(); }

  // Sample whose node lies within tol of t; throws when absent.
  const Eigen::VectorXd& value_near(double t, double tol = 1e-9) const;

  // (t, ||x(t)||) over all samples.
  std::vector<std::pair<double, double>> norm_samples() const;

 private:
  std::vector<double> times_;
  std::vector<Eigen::VectorXd> states_;
  std::vector<JumpRecord> jumps_;
  double max_step_;
};

namespace detail {

using StateSink = std::function<void(double, const Eigen::VectorXd&)>;
using OperatorSink = std::function<void(double, const Eigen::MatrixXd&)>;

// Integrate x' = -A x + f from `from` to `to` (either direction), splitting at
// interior discontinuities of A and f. Piecewise signals are evaluated with
// the pre-side limit at each split segment's upper end. f may be null.
Eigen::VectorXd integrate_state(const CoefficientOperator& A, const ForcingFunction* f,
                                double from, double to, Eigen::VectorXd x,
                                double h_max, const StateSink& sink = {});

// Same sweep for the matrix equation Y' = -A Y.
Eigen::MatrixXd integrate_operator(const CoefficientOperator& A, double from,
                                   double to, Eigen::MatrixXd y, double h_max,
                                   const OperatorSink& sink = {});

}  // namespace detail

// State transported by the jump-free equation from (t0, x0) to t1 (t0 <= t1).
// The span must not contain an impulse of whatever system x0 belongs to;
// discontinuities of A and f themselves are handled internally.
Eigen::VectorXd flow(const CoefficientOperator& A, const ForcingFunction& f,
                     double t0, double t1, const Eigen::VectorXd& x0,
                     double h_max = kDefaultStep);
Eigen::VectorXd flow(const CoefficientOperator& A, double t0, double t1,
                     const Eigen::VectorXd& x0, double h_max = kDefaultStep);

// Full path over [0, horizon]: integrate between impulses, apply
// x(tau^+) = B x(tau^-) + alpha at each instant, steps hit instants exactly.
Trajectory solve_ivp(const ImpulsiveSystem& system, const Forcing& forcing,
                     const Eigen::VectorXd& x0, double h_max = kDefaultStep);

// x(t) assembled from the closed-form representation: fundamental matrix
// times x0, plus the forcing integral (composite Simpson per inter-impulse
// segment), plus the transported jump offsets. Needs invertible jumps only
// where an offset alpha_i is nonzero.
Eigen::VectorXd representation_solution(const ImpulsiveSystem& system,
                                        const Forcing& forcing,
                                        const Eigen::VectorXd& x0, double t,
                                        double h_max = kDefaultStep);
// Same, reusing a prebuilt fundamental solution (much cheaper in loops).
Eigen::VectorXd representation_solution(const FundamentalSolution& fundamental,
                                        const Forcing& forcing,
                                        const Eigen::VectorXd& x0, double t);

}  // namespace ilab
