#include "ilab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ilab/errors.hpp"
#include "ilab/linalg.hpp"

namespace ilab {

const char* to_string(Verdict v) {
  return v == Verdict::bounded_up_to ? "bounded-up-to" : "growth-detected";
}

std::vector<double> sign_sequence(const JumpSequence& jumps) {
  if (!jumps.empty() && jumps.dimension() != 1)
    throw std::invalid_argument("sign_sequence: jumps must be scalar");
  std::vector<double> out;
  out.reserve(jumps.size());
  double sign = 1.0;
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const double b = jumps.at(i)(0, 0);
    if (b == 0.0)
      throw std::invalid_argument("sign_sequence: zero jump factor at index " +
                                  std::to_string(i));
    if (b < 0.0) sign = -sign;
    out.push_back(sign);
  }
  return out;
}

namespace {

double peak_norm(const Trajectory& traj) {
  double peak = 0.0;
  for (const auto& x : traj.states()) peak = std::max(peak, inf_norm(x));
  return peak;
}

Forcing offsets_only(int dimension, std::vector<Eigen::VectorXd> alphas) {
  return Forcing(ForcingFunction::zero(dimension), std::move(alphas));
}

}  // namespace

ProbeVerdict scalar_probe(const ImpulsiveSystem& system, double h_max) {
  if (system.dimension() != 1)
    throw std::invalid_argument("scalar_probe: system must be one-dimensional");
  const auto signs = sign_sequence(system.jumps());
  std::vector<Eigen::VectorXd> alphas;
  alphas.reserve(signs.size());
  for (double s : signs) alphas.push_back(Eigen::VectorXd::Constant(1, s));

  ProbeVerdict out;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
  try {
    out.path = solve_ivp(system, offsets_only(1, std::move(alphas)), x0, h_max);
  } catch (const NumericalError& e) {
    out.verdict = Verdict::growth_detected;
    out.peak = std::numeric_limits<double>::infinity();
    out.growth_ratio = std::numeric_limits<double>::infinity();
    out.overflow_time = e.at();
    return out;
  }
  const Trajectory& traj = *out.path;
  out.peak = peak_norm(traj);

  if (system.schedule().empty()) return out;  // no windows to compare
  const double window = kWindowGapMultiple * system.schedule().max_gap();
  const auto n_win = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(system.horizon() / window)));
  std::vector<double> sup(n_win, 0.0);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    auto w = static_cast<std::size_t>(traj.time(i) / window);
    w = std::min(w, n_win - 1);
    sup[w] = std::max(sup[w], inf_norm(traj.state(i)));
  }
  int run = 0;
  for (std::size_t w = 1; w < n_win; ++w) {
    double ratio;
    if (sup[w - 1] > 0.0)
      ratio = sup[w] / sup[w - 1];
    else
      ratio = sup[w] > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    out.growth_ratio = std::max(out.growth_ratio, ratio);
    run = ratio > 1.0 + kGrowthThreshold ? run + 1 : 0;
    if (run >= kGrowthRunLength) out.verdict = Verdict::growth_detected;
  }
  return out;
}

double estimate_boundedness_constant(const ImpulsiveSystem& system, int trials,
                                     std::uint64_t seed, double h_max) {
  if (trials < 1)
    throw std::invalid_argument("boundedness estimate needs at least one trial");
  const int n = system.dimension();
  const std::size_t m = system.schedule().size();
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  double k_hat = 0.0;

  // The sign probe dominates every unit-offset choice in the scalar case, so
  // its trial pins the estimate exactly; run it whenever it is defined.
  if (n == 1) {
    bool nonzero = true;
    for (std::size_t i = 0; i < m; ++i)
      if (system.jumps().at(i)(0, 0) == 0.0) nonzero = false;
    if (nonzero) {
      const auto signs = sign_sequence(system.jumps());
      std::vector<Eigen::VectorXd> alphas;
      for (double s : signs) alphas.push_back(Eigen::VectorXd::Constant(1, s));
      k_hat = std::max(
          k_hat,
          peak_norm(solve_ivp(system, offsets_only(1, std::move(alphas)), x0, h_max)));
    }
  }

  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<Eigen::VectorXd> alphas(m);
    for (auto& a : alphas) {
      a.resize(n);
      for (int j = 0; j < n; ++j) a[j] = (rng() >> 40) & 1 ? 1.0 : -1.0;
    }
    k_hat = std::max(
        k_hat, peak_norm(solve_ivp(system, offsets_only(n, std::move(alphas)), x0, h_max)));
  }
  return k_hat;
}

DeltaSystem delta_to_jumps(const std::vector<Eigen::VectorXd>& weights,
                           double spacing, double horizon) {
  if (weights.empty())
    throw std::invalid_argument("delta_to_jumps: needs at least one impulse weight");
  const auto dim = weights.front().size();
  for (const auto& w : weights)
    if (w.size() != dim || dim < 1)
      throw std::invalid_argument("delta_to_jumps: weights must share a dimension");
  auto schedule = ImpulseSchedule::uniform(spacing, horizon);
  if (schedule.size() != weights.size())
    throw std::invalid_argument("delta_to_jumps: need one weight per instant (" +
                                std::to_string(weights.size()) + " given, " +
                                std::to_string(schedule.size()) + " instants)");
  auto jumps = JumpSequence::identity(static_cast<int>(dim), weights.size());
  return DeltaSystem{std::move(schedule), std::move(jumps),
                     Forcing(ForcingFunction::zero(static_cast<int>(dim)), weights)};
}

}  // namespace ilab
