#pragma once

namespace ilab {

// Evaluation side at a discontinuity: pre is the limit from the left, post is
// the value under the right-continuity convention. They agree away from jumps.
enum class Side { pre, post };

// Step ceiling for the fixed-step RK4 sweeps.
inline constexpr double kDefaultStep = 1e-3;

// Node count for composite Simpson quadrature (odd).
inline constexpr int kQuadratureNodes = 129;

// Condition-estimate ceiling; operators beyond it are treated as singular.
inline constexpr double kConditionLimit = 1e12;

// Relative slack when checking that a certificate envelope dominates data.
inline constexpr double kDominanceSlack = 1e-6;

// Probe growth detection: window-over-window ratio threshold and how many
// consecutive windows must exceed it. Window length is this multiple of the
// largest impulse gap.
inline constexpr double kGrowthThreshold = 1e-3;
inline constexpr int kGrowthRunLength = 3;
inline constexpr double kWindowGapMultiple = 10.0;

// Transfer hypotheses: measured min |prod B| below the floor is reported as 0
// (no positive lower bound at working precision); running max of prod ||B||
// above the cap rejects the boundedness hypothesis.
inline constexpr double kJumpProductFloor = 1e-9;
inline constexpr double kJumpProductCap = 1e12;

// Largest commutator norm still treated as commuting.
inline constexpr double kCommutingTolerance = 1e-8;

}  // namespace ilab
