#pragma once

#include "ilab/scenario.hpp"

namespace ilab::demo {

// Constant flow with halving jumps: x' = 0, B = 1/2 at t = 1, 2, ...,
// x(0) = 1. The flow alone is only marginally stable; the jumps make the
// system exponentially decaying with x(t) = 2^-floor(t).
Scenario halving(double horizon = 10.0);

// Matched decay and amplification: x' + x = 0 with B = e at t = 1, 2, ...,
// x(0) = 1. Each jump exactly undoes the decay of the preceding interval, so
// x(i) = x(0) at every instant: bounded but not decaying, and the worst-case
// probe grows without bound.
Scenario compensated(double horizon = 10.0);

}  // namespace ilab::demo
