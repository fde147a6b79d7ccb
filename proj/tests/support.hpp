#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ilab/integrator.hpp"
#include "ilab/linalg.hpp"
#include "ilab/system.hpp"

namespace ilab::testing {

inline Eigen::MatrixXd m1(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }
inline Eigen::VectorXd v1(double v) { return Eigen::VectorXd::Constant(1, v); }

// x' + a x = 0 with constant scalar jump factor b on the uniform grid.
inline ImpulsiveSystem scalar_uniform(double a, double b, double spacing,
                                      double horizon) {
  auto schedule = ImpulseSchedule::uniform(spacing, horizon);
  auto jumps = JumpSequence::constant(m1(b), schedule.size());
  return ImpulsiveSystem(CoefficientOperator::constant(m1(a)), std::move(jumps),
                         std::move(schedule));
}

inline double peak(const Trajectory& traj) {
  double p = 0.0;
  for (const auto& x : traj.states()) p = std::max(p, inf_norm(x));
  return p;
}

struct RandomScenario {
  ImpulsiveSystem system;
  Forcing forcing;
  Eigen::VectorXd x0;
};

// Random test system: n <= 3, 2..6 impulses with gaps in [0.4, 0.9],
// piecewise-constant A (entries in [-1, 1]) breaking exactly at the impulse
// instants, and jumps built as scaled near-identity perturbations so they
// stay invertible with modest condition numbers. Forcing, when requested, is
// piecewise constant on the same breaks with offsets bounded by 1.
inline RandomScenario random_scenario(std::mt19937_64& rng, bool with_forcing) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> gap(0.4, 0.9);
  std::uniform_real_distribution<double> scale(0.5, 1.2);
  std::uniform_int_distribution<int> dim_d(1, 3);
  std::uniform_int_distribution<int> count_d(2, 6);
  const int n = dim_d(rng);
  const int m = count_d(rng);

  std::vector<double> times;
  double t = 0.0;
  for (int i = 0; i < m; ++i) times.push_back(t += gap(rng));
  const double horizon = t + gap(rng);
  ImpulseSchedule schedule(times, horizon);

  auto rand_matrix = [&] {
    Eigen::MatrixXd a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = unit(rng);
    return a;
  };
  auto rand_vector = [&] {
    Eigen::VectorXd v(n);
    for (int r = 0; r < n; ++r) v[r] = unit(rng);
    return v;
  };

  std::vector<Eigen::MatrixXd> a_vals;
  for (int i = 0; i <= m; ++i) a_vals.push_back(rand_matrix());
  auto A = CoefficientOperator::piecewise_constant(times, std::move(a_vals));

  std::vector<Eigen::MatrixXd> ops;
  for (int i = 0; i < m; ++i)
    ops.push_back(scale(rng) *
                  (Eigen::MatrixXd::Identity(n, n) + 0.3 * rand_matrix()));
  JumpSequence jumps(std::move(ops));

  const Eigen::VectorXd x0 = rand_vector();
  ImpulsiveSystem system(std::move(A), std::move(jumps), std::move(schedule));
  if (!with_forcing)
    return {std::move(system), Forcing::none(n, m), x0};

  std::vector<Eigen::VectorXd> f_vals;
  for (int i = 0; i <= m; ++i) f_vals.push_back(rand_vector());
  auto f = ForcingFunction::piecewise_constant(times, std::move(f_vals));
  std::vector<Eigen::VectorXd> alphas;
  for (int i = 0; i < m; ++i) alphas.push_back(rand_vector());
  return {std::move(system), Forcing(std::move(f), std::move(alphas)), x0};
}

inline std::filesystem::path make_temp_dir(const std::string& tag) {
  std::random_device rd;
  std::ostringstream name;
  name << "ilab_" << tag << "_" << std::hex << rd() << rd();
  const auto dir = std::filesystem::temp_directory_path() / name.str();
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace ilab::testing
