#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ilab/common.hpp"

namespace ilab {

enum class SignalKind { constant, piecewise_constant, sampled, custom };

namespace detail {

// Variant storage shared by the matrix and vector signals. Piecewise-constant
// data is right continuous with value i active on [knot_{i-1}, knot_i);
// sampled data interpolates linearly and clamps outside its span. Structural
// validation (knot ordering, count consistency) happens here; shape checks
// belong to the owning class.
template <class Value>
struct Signal {
  SignalKind kind = SignalKind::constant;
  std::vector<double> knots;        // breaks (piecewise) or sample times
  std::vector<Value> values;        // 1 / knots+1 / knots.size() values
  std::function<Value(double)> fn;  // custom only

  void validate_structure() const {
    switch (kind) {
      case SignalKind::constant:
        if (values.size() != 1)
          throw std::invalid_argument("signal: constant needs exactly one value");
        break;
      case SignalKind::piecewise_constant:
        if (values.size() != knots.size() + 1)
          throw std::invalid_argument(
              "signal: piecewise needs one more value than breaks");
        check_increasing("breaks");
        break;
      case SignalKind::sampled:
        if (values.empty() || values.size() != knots.size())
          throw std::invalid_argument(
              "signal: sampled needs matching nonempty times and values");
        check_increasing("sample times");
        break;
      case SignalKind::custom:
        if (!fn) throw std::invalid_argument("signal: custom needs an evaluator");
        break;
    }
  }

  Value at(double t, Side side) const {
    switch (kind) {
      case SignalKind::constant:
        return values.front();
      case SignalKind::piecewise_constant: {
        // post counts knots <= t, pre counts knots < t.
        const auto idx = side == Side::post
                             ? std::upper_bound(knots.begin(), knots.end(), t) -
                                   knots.begin()
                             : std::lower_bound(knots.begin(), knots.end(), t) -
                                   knots.begin();
        return values[static_cast<std::size_t>(idx)];
      }
      case SignalKind::sampled: {
        if (t <= knots.front()) return values.front();
        if (t >= knots.back()) return values.back();
        const auto hi = static_cast<std::size_t>(
            std::upper_bound(knots.begin(), knots.end(), t) - knots.begin());
        const auto lo = hi - 1;
        const double w = (t - knots[lo]) / (knots[hi] - knots[lo]);
        return Value((1.0 - w) * values[lo] + w * values[hi]);
      }
      case SignalKind::custom:
        return fn(t);
    }
    throw std::logic_error("signal: bad kind");
  }

 private:
  void check_increasing(const char* what) const {
    for (std::size_t i = 1; i < knots.size(); ++i)
      if (!(knots[i] > knots[i - 1]))
        throw std::invalid_argument(std::string("signal: ") + what +
                                    " must be strictly increasing");
  }
};

}  // namespace detail
}  // namespace ilab
