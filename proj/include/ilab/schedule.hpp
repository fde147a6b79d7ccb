#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace ilab {

// Strictly increasing impulse instants on (0, horizon]. Time 0 is never an
// impulse. The schedule may be empty (jump-free system).
class ImpulseSchedule {
 public:
  ImpulseSchedule(std::vector<double> times, double horizon);

  // Instants spacing, 2*spacing, ... up to the horizon.
  static ImpulseSchedule uniform(double spacing, double horizon);

  const std::vector<double>& times() const { return times_; }
  double horizon() const { return horizon_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double time(std::size_t i) const { return times_[i]; }

  // Gap statistics over [0, tau_1], [tau_1, tau_2], ...; the stretch after the
  // last impulse is not a gap. Throw on an empty schedule.
  double min_gap() const;
  double max_gap() const;

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  // Index of the last impulse with time <= t, npos when none.
  std::size_t last_at_or_before(double t) const;
  // Number of impulses with time <= t.
  std::size_t count_at_or_before(double t) const;

  // {0, tau_1, ..., tau_m, horizon}; the horizon is appended only when it
  // exceeds the last impulse.
  std::vector<double> interval_boundaries() const;

 private:
  std::vector<double> times_;
  double horizon_;
};

}  // namespace ilab
