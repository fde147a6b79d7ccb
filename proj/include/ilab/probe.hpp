#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ilab/common.hpp"
#include "ilab/integrator.hpp"
#include "ilab/system.hpp"

namespace ilab {

enum class Verdict { bounded_up_to, growth_detected };
const char* to_string(Verdict v);

// Outcome of the worst-case sign probe over [0, horizon].
struct ProbeVerdict {
  Verdict verdict = Verdict::bounded_up_to;
  double peak = 0.0;          // Q_hat: sup ||x|| along the probe path
  double growth_ratio = 1.0;  // largest window-over-window sup ratio
  std::optional<double> overflow_time;  // set when integration blew up
  std::optional<Trajectory> path;       // absent after overflow
};

// Worst-case unit offsets for scalar systems: alpha_i = sign of the running
// jump product prod_{j<=i} B_j, accumulated by sign only so magnitudes can
// never underflow. Every factor must be nonzero.
std::vector<double> sign_sequence(const JumpSequence& jumps);

// Simulate the scalar system from x(0) = 0 under the sign-probe offsets and
// classify growth: the horizon splits into windows of kWindowGapMultiple
// times the largest gap, and growth is declared when kGrowthRunLength
// consecutive window-over-window sup ratios exceed 1 + kGrowthThreshold
// (ratio conventions: 0/0 = 1, positive/0 = inf). Overflow counts as growth.
ProbeVerdict scalar_probe(const ImpulsiveSystem& system, double h_max = kDefaultStep);

// Observed boundedness constant: sup ||x|| over `trials` simulations from
// x(0) = 0 with random unit offsets (entries +-1), plus the deterministic
// sign probe when the system is scalar with nonzero jumps (for scalars the
// sign probe dominates every unit-offset choice, so the result equals the
// probe peak). Deterministic for a fixed seed.
double estimate_boundedness_constant(const ImpulsiveSystem& system, int trials,
                                     std::uint64_t seed, double h_max = kDefaultStep);

// Equivalent jump data for forcing by delta impulses c_i delta(t - i*spacing):
// identity jumps with offsets alpha_i = c_i on the uniform schedule.
struct DeltaSystem {
  ImpulseSchedule schedule;
  JumpSequence jumps;
  Forcing forcing;
};
DeltaSystem delta_to_jumps(const std::vector<Eigen::VectorXd>& weights,
                           double spacing, double horizon);

}  // namespace ilab
