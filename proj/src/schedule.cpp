#include "ilab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ilab {

ImpulseSchedule::ImpulseSchedule(std::vector<double> times, double horizon)
    : times_(std::move(times)), horizon_(horizon) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
    throw std::invalid_argument("schedule: horizon must be positive and finite");
  double prev = 0.0;
  for (double t : times_) {
    if (!std::isfinite(t))
      throw std::invalid_argument("schedule: nonfinite impulse time");
    if (!(t > prev))
      throw std::invalid_argument(
          "schedule: impulse times must be strictly increasing and positive (offender " +
          std::to_string(t) + ")");
    if (t > horizon_)
      throw std::invalid_argument("schedule: impulse time " + std::to_string(t) +
                                  " exceeds horizon " + std::to_string(horizon_));
    prev = t;
  }
}

ImpulseSchedule ImpulseSchedule::uniform(double spacing, double horizon) {
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw std::invalid_argument("uniform schedule: spacing must be positive");
  if (!(horizon >= spacing))
    throw std::invalid_argument("uniform schedule: horizon smaller than spacing");
  // Tolerant count so that horizon = k*spacing lands exactly on k instants.
  const auto count = static_cast<std::size_t>(std::floor(horizon / spacing + 1e-9));
  std::vector<double> times(count);
  for (std::size_t i = 0; i < count; ++i)
    times[i] = std::min(static_cast<double>(i + 1) * spacing, horizon);
  return ImpulseSchedule(std::move(times), horizon);
}

double ImpulseSchedule::min_gap() const {
  if (times_.empty()) throw std::invalid_argument("schedule: no gaps without impulses");
  double best = times_.front();
  for (std::size_t i = 1; i < times_.size(); ++i)
    best = std::min(best, times_[i] - times_[i - 1]);
  return best;
}

double ImpulseSchedule::max_gap() const {
  if (times_.empty()) throw std::invalid_argument("schedule: no gaps without impulses");
  double best = times_.front();
  for (std::size_t i = 1; i < times_.size(); ++i)
    best = std::max(best, times_[i] - times_[i - 1]);
  return best;
}

std::size_t ImpulseSchedule::last_at_or_before(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return npos;
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

std::size_t ImpulseSchedule::count_at_or_before(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(it - times_.begin());
}

std::vector<double> ImpulseSchedule::interval_boundaries() const {
  std::vector<double> b;
  b.reserve(times_.size() + 2);
  b.push_back(0.0);
  b.insert(b.end(), times_.begin(), times_.end());
  if (b.back() < horizon_) b.push_back(horizon_);
  return b;
}

}  // namespace ilab
