#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ilab/errors.hpp"

namespace ilab::detail {

// Classical RK4 from a to b (either direction) with uniform step
// |h| = |b-a| / ceil(|b-a| / h_max); the final node lands on b exactly.
// sink(t, y) runs after every accepted step. Throws NumericalError at the
// first nonfinite state.
template <class State, class Deriv, class Sink>
State rk4_integrate(double a, double b, State y, double h_max, Deriv&& deriv,
                    Sink&& sink) {
  if (!(h_max > 0.0)) throw std::invalid_argument("rk4: step ceiling must be positive");
  const double len = b - a;
  if (len == 0.0) return y;
  const auto steps = static_cast<long>(std::ceil(std::abs(len) / h_max));
  for (long i = 0; i < steps; ++i) {
    const double t0 = a + len * (static_cast<double>(i) / static_cast<double>(steps));
    const double t1 = (i + 1 == steps)
                          ? b
                          : a + len * (static_cast<double>(i + 1) /
                                       static_cast<double>(steps));
    const double h = t1 - t0;
    const State k1 = deriv(t0, y);
    const State k2 = deriv(t0 + 0.5 * h, State(y + (0.5 * h) * k1));
    const State k3 = deriv(t0 + 0.5 * h, State(y + (0.5 * h) * k2));
    const State k4 = deriv(t1, State(y + h * k3));
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite()) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "integration overflow: nonfinite state at t=%.17g", t1);
      throw NumericalError(msg, t1);
    }
    sink(t1, y);
  }
  return y;
}

}  // namespace ilab::detail
