#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ilab {

// Integration produced a nonfinite state, a linear solve hit a numerically
// singular operator, or an estimate is undefined on the given data. Carries
// the time at which the failure occurred when one is meaningful.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          std::optional<double> at = std::nullopt)
      : std::runtime_error(what), at_(at) {}
  std::optional<double> at() const { return at_; }

 private:
  std::optional<double> at_;
};

// A stability-transfer hypothesis failed on the supplied data.
class HypothesisViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ilab
