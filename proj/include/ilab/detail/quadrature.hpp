#pragma once

#include <stdexcept>
#include <type_traits>

#include "ilab/common.hpp"

namespace ilab::detail {

// Composite Simpson over nodes-1 panels (nodes odd, >= 3). The integrand is
// evaluated exactly once at b, so callers can switch to a pre-side limit there.
template <class F>
auto simpson(F&& f, double a, double b, int nodes = kQuadratureNodes)
    -> std::decay_t<decltype(f(a))> {
  if (nodes < 3 || nodes % 2 == 0)
    throw std::invalid_argument("simpson: node count must be odd and >= 3");
  using R = std::decay_t<decltype(f(a))>;
  const int panels = nodes - 1;
  const double h = (b - a) / panels;
  R acc = f(a);
  for (int j = 1; j < panels; ++j)
    acc += (j % 2 == 1 ? 4.0 : 2.0) * f(a + h * j);
  acc += f(b);
  return R((h / 3.0) * acc);
}

}  // namespace ilab::detail
