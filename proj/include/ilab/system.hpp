#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ilab/schedule.hpp"
#include "ilab/signals.hpp"

namespace ilab {

// One linear jump operator per impulse instant: x(tau^+) = B x(tau^-) + alpha.
// Operators need not be invertible; backward evolution checks that lazily.
class JumpSequence {
 public:
  explicit JumpSequence(std::vector<Eigen::MatrixXd> ops);
  static JumpSequence constant(const Eigen::MatrixXd& op, std::size_t count);
  static JumpSequence identity(int dimension, std::size_t count);

  const Eigen::MatrixXd& at(std::size_t i) const { return ops_.at(i); }
  const std::vector<Eigen::MatrixXd>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }
  // 0 when empty (dimension unconstrained).
  int dimension() const { return dimension_; }
  // max_i ||B_i||; 0 when empty.
  double norm_bound() const;

 private:
  std::vector<Eigen::MatrixXd> ops_;
  int dimension_ = 0;
};

// x' + A(t)x = f(t) on [0, horizon] with jumps at the scheduled instants.
// Construction checks dimension agreement, one jump per instant, and that any
// piecewise breaks of A inside (0, horizon) sit exactly on scheduled instants
// so that integration segments never straddle a discontinuity.
class ImpulsiveSystem {
 public:
  ImpulsiveSystem(CoefficientOperator A, JumpSequence jumps, ImpulseSchedule schedule);

  const CoefficientOperator& coefficients() const { return A_; }
  const JumpSequence& jumps() const { return jumps_; }
  const ImpulseSchedule& schedule() const { return schedule_; }
  int dimension() const { return A_.dimension(); }
  double horizon() const { return schedule_.horizon(); }

 private:
  CoefficientOperator A_;
  JumpSequence jumps_;
  ImpulseSchedule schedule_;
};

// Continuous forcing plus one jump offset alpha_i per impulse.
class Forcing {
 public:
  Forcing(ForcingFunction f, std::vector<Eigen::VectorXd> alphas);
  // f = 0 and alpha_i = 0 for the given impulse count.
  static Forcing none(int dimension, std::size_t impulse_count);

  const ForcingFunction& f() const { return f_; }
  const std::vector<Eigen::VectorXd>& alphas() const { return alphas_; }
  const Eigen::VectorXd& alpha(std::size_t i) const { return alphas_.at(i); }
  std::size_t alpha_count() const { return alphas_.size(); }
  int dimension() const { return f_.dimension(); }
  // max_i ||alpha_i||; 0 when there are no impulses.
  double sup_alpha() const;
  double sup_f(double t_max) const { return f_.sup_norm(t_max); }

 private:
  ForcingFunction f_;
  std::vector<Eigen::VectorXd> alphas_;
};

// Measured quantities entering the stability machinery:
//   min_gap/max_gap over [0,tau_1],[tau_1,tau_2],...; jump_norm_bound =
//   max ||B_i||; coeff_integral_bound = max over schedule intervals of
//   int ||A||; impulse_density = impulse count / horizon.
struct SystemBounds {
  double min_gap = 0.0;
  double max_gap = 0.0;
  double jump_norm_bound = 0.0;
  double coeff_integral_bound = 0.0;
  double impulse_density = 0.0;
};

// Requires a nonempty schedule.
SystemBounds measure_bounds(const ImpulsiveSystem& system);

}  // namespace ilab
