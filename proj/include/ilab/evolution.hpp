#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "ilab/common.hpp"
#include "ilab/integrator.hpp"
#include "ilab/system.hpp"

namespace ilab {

// Fundamental matrix X(t): X' + A X = 0, X(0) = I, X(tau^+) = B X(tau^-).
// Impulse instants carry a pre/post checkpoint pair; queries between
// checkpoints integrate forward from the nearest one.
class FundamentalSolution {
 public:
  explicit FundamentalSolution(ImpulsiveSystem system, double h_max = kDefaultStep);

  const ImpulsiveSystem& system() const { return system_; }
  double max_step() const { return h_max_; }

  Eigen::MatrixXd at(double t, Side side = Side::post) const;

  // Values at ascending times (post convention), computed in one sweep per
  // inter-impulse stretch instead of one restart per query.
  std::vector<Eigen::MatrixXd> at_many(const std::vector<double>& ascending_times) const;

  struct Checkpoint {
    double time;
    Eigen::MatrixXd pre;
    Eigen::MatrixXd post;
  };
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }

 private:
  ImpulsiveSystem system_;
  double h_max_;
  std::vector<Checkpoint> checkpoints_;
};

// X(t) for one t; prefer FundamentalSolution when querying repeatedly.
Eigen::MatrixXd fundamental_matrix(const ImpulsiveSystem& system, double t,
                                   double h_max = kDefaultStep);

// (t, ||X(t)||) at every integration node over [0, horizon]. Impulse instants
// contribute a pre-norm row immediately followed by a post-norm row.
std::vector<std::pair<double, double>> fundamental_norm_samples(
    const ImpulsiveSystem& system, double h_max = kDefaultStep);

// Two-parameter evolution operator C(t, s) = X(t) X(s)^-1, the transport of
// state from time s to time t (either order). Throws NumericalError when
// X(s) is numerically singular.
Eigen::MatrixXd evolution_operator(const FundamentalSolution& fundamental,
                                   double t, double s);
Eigen::MatrixXd evolution_operator(const ImpulsiveSystem& system, double t,
                                   double s, double h_max = kDefaultStep);

// ||C(t,s) - C(t,tau) C(tau,s)||; zero in exact arithmetic for any ordering
// of the three times.
double semigroup_residual(const FundamentalSolution& fundamental, double t,
                          double tau, double s);
double semigroup_residual(const ImpulsiveSystem& system, double t, double tau,
                          double s, double h_max = kDefaultStep);

// Which side of the product construction applies: no impulse strictly
// between s and t, impulses crossed forward, or impulses crossed backward.
enum class Branch { same_interval, forward, backward };
const char* branch_name(Branch b);
Branch branch_of(const ImpulseSchedule& schedule, double t, double s);

// Jump-free evolution G(t, s) of x' + A x = 0 (no impulses), any order of
// arguments; G(t,s) = G(s,t)^-1 by construction.
class NonImpulsiveEvolution {
 public:
  explicit NonImpulsiveEvolution(CoefficientOperator A, double h_max = kDefaultStep);
  int dimension() const { return A_.dimension(); }
  Eigen::MatrixXd at(double t, double s) const;

 private:
  CoefficientOperator A_;
  double h_max_;
};

// C(t, s) assembled as an alternating product of jump-free evolutions and
// jump operators (inverted on the backward branch; a time sitting exactly on
// an impulse counts post-jump). Agrees with evolution_operator.
Eigen::MatrixXd evolution_from_G(const NonImpulsiveEvolution& G,
                                 const JumpSequence& jumps,
                                 const ImpulseSchedule& schedule, double t,
                                 double s);

// Scalar shortcut X(t) = U(t) * prod of jump factors up to t, where U is the
// jump-free scalar solution with U(0) = 1. The product is accumulated
// incrementally. Requires a one-dimensional jump sequence.
double scalar_fundamental(const std::function<double(double)>& U,
                          const JumpSequence& jumps,
                          const ImpulseSchedule& schedule, double t);

}  // namespace ilab
