#include "ilab/signals.hpp"

#include <stdexcept>

#include "ilab/detail/quadrature.hpp"
#include "ilab/linalg.hpp"

namespace ilab {

namespace {

const std::vector<double> kNoBreaks{};

int check_square(const std::vector<Eigen::MatrixXd>& ms) {
  if (ms.empty()) throw std::invalid_argument("coefficient: no values");
  const auto dim = ms.front().rows();
  if (dim < 1) throw std::invalid_argument("coefficient: empty matrix");
  for (const auto& m : ms)
    if (m.rows() != dim || m.cols() != dim)
      throw std::invalid_argument("coefficient: values must be square and same size");
  return static_cast<int>(dim);
}

int check_vectors(const std::vector<Eigen::VectorXd>& vs) {
  if (vs.empty()) throw std::invalid_argument("forcing: no values");
  const auto dim = vs.front().size();
  if (dim < 1) throw std::invalid_argument("forcing: empty vector");
  for (const auto& v : vs)
    if (v.size() != dim)
      throw std::invalid_argument("forcing: values must have equal size");
  return static_cast<int>(dim);
}

}  // namespace

CoefficientOperator::CoefficientOperator(detail::Signal<Eigen::MatrixXd> s, int dim)
    : signal_(std::move(s)), dimension_(dim) {
  signal_.validate_structure();
}

CoefficientOperator CoefficientOperator::constant(Eigen::MatrixXd value) {
  detail::Signal<Eigen::MatrixXd> s;
  s.kind = SignalKind::constant;
  s.values.push_back(std::move(value));
  const int dim = check_square(s.values);
  return CoefficientOperator(std::move(s), dim);
}

CoefficientOperator CoefficientOperator::piecewise_constant(
    std::vector<double> breaks, std::vector<Eigen::MatrixXd> values) {
  detail::Signal<Eigen::MatrixXd> s;
  s.kind = SignalKind::piecewise_constant;
  s.knots = std::move(breaks);
  s.values = std::move(values);
  const int dim = check_square(s.values);
  return CoefficientOperator(std::move(s), dim);
}

CoefficientOperator CoefficientOperator::sampled(std::vector<double> times,
                                                 std::vector<Eigen::MatrixXd> values) {
  detail::Signal<Eigen::MatrixXd> s;
  s.kind = SignalKind::sampled;
  s.knots = std::move(times);
  s.values = std::move(values);
  const int dim = check_square(s.values);
  return CoefficientOperator(std::move(s), dim);
}

CoefficientOperator CoefficientOperator::custom(
    int dimension, std::function<Eigen::MatrixXd(double)> eval) {
  if (dimension < 1) throw std::invalid_argument("coefficient: dimension must be >= 1");
  detail::Signal<Eigen::MatrixXd> s;
  s.kind = SignalKind::custom;
  s.fn = std::move(eval);
  return CoefficientOperator(std::move(s), dimension);
}

Eigen::MatrixXd CoefficientOperator::at(double t, Side side) const {
  Eigen::MatrixXd m = signal_.at(t, side);
  if (m.rows() != dimension_ || m.cols() != dimension_)
    throw std::invalid_argument("coefficient: evaluator returned wrong shape");
  return m;
}

const std::vector<double>& CoefficientOperator::discontinuities() const {
  return signal_.kind == SignalKind::piecewise_constant ? signal_.knots : kNoBreaks;
}

double CoefficientOperator::norm_integral(double a, double b, int nodes) const {
  if (!(b >= a)) throw std::invalid_argument("norm_integral: needs a <= b");
  if (a == b) return 0.0;
  return detail::simpson(
      [&](double s) {
        return operator_inf_norm(at(s, s >= b ? Side::pre : Side::post));
      },
      a, b, nodes);
}

ForcingFunction::ForcingFunction(detail::Signal<Eigen::VectorXd> s, int dim)
    : signal_(std::move(s)), dimension_(dim) {
  signal_.validate_structure();
}

ForcingFunction ForcingFunction::zero(int dimension) {
  if (dimension < 1) throw std::invalid_argument("forcing: dimension must be >= 1");
  return constant(Eigen::VectorXd::Zero(dimension));
}

ForcingFunction ForcingFunction::constant(Eigen::VectorXd value) {
  detail::Signal<Eigen::VectorXd> s;
  s.kind = SignalKind::constant;
  s.values.push_back(std::move(value));
  const int dim = check_vectors(s.values);
  return ForcingFunction(std::move(s), dim);
}

ForcingFunction ForcingFunction::piecewise_constant(std::vector<double> breaks,
                                                    std::vector<Eigen::VectorXd> values) {
  detail::Signal<Eigen::VectorXd> s;
  s.kind = SignalKind::piecewise_constant;
  s.knots = std::move(breaks);
  s.values = std::move(values);
  const int dim = check_vectors(s.values);
  return ForcingFunction(std::move(s), dim);
}

ForcingFunction ForcingFunction::sampled(std::vector<double> times,
                                         std::vector<Eigen::VectorXd> values) {
  detail::Signal<Eigen::VectorXd> s;
  s.kind = SignalKind::sampled;
  s.knots = std::move(times);
  s.values = std::move(values);
  const int dim = check_vectors(s.values);
  return ForcingFunction(std::move(s), dim);
}

ForcingFunction ForcingFunction::custom(int dimension,
                                        std::function<Eigen::VectorXd(double)> eval) {
  if (dimension < 1) throw std::invalid_argument("forcing: dimension must be >= 1");
  detail::Signal<Eigen::VectorXd> s;
  s.kind = SignalKind::custom;
  s.fn = std::move(eval);
  return ForcingFunction(std::move(s), dimension);
}

Eigen::VectorXd ForcingFunction::at(double t, Side side) const {
  Eigen::VectorXd v = signal_.at(t, side);
  if (v.size() != dimension_)
    throw std::invalid_argument("forcing: evaluator returned wrong size");
  return v;
}

const std::vector<double>& ForcingFunction::discontinuities() const {
  return signal_.kind == SignalKind::piecewise_constant ? signal_.knots : kNoBreaks;
}

bool ForcingFunction::is_zero() const {
  return signal_.kind == SignalKind::constant && signal_.values.front().isZero(0.0);
}

double ForcingFunction::sup_norm(double t_max, int grid_points) const {
  if (!(t_max >= 0.0)) throw std::invalid_argument("sup_norm: t_max must be >= 0");
  double sup = inf_norm(at(0.0));
  switch (signal_.kind) {
    case SignalKind::constant:
      return sup;
    case SignalKind::piecewise_constant:
      // Each piece active inside (0, t_max) starts at a break in that range.
      for (std::size_t i = 0; i < signal_.knots.size(); ++i)
        if (signal_.knots[i] > 0.0 && signal_.knots[i] < t_max)
          sup = std::max(sup, inf_norm(signal_.values[i + 1]));
      return std::max(sup, inf_norm(at(t_max)));
    case SignalKind::sampled:
      // Piecewise linear, so the sup sits at a sample or at the ends.
      for (std::size_t i = 0; i < signal_.knots.size(); ++i)
        if (signal_.knots[i] > 0.0 && signal_.knots[i] < t_max)
          sup = std::max(sup, inf_norm(signal_.values[i]));
      return std::max(sup, inf_norm(at(t_max)));
    case SignalKind::custom: {
      if (grid_points < 2) throw std::invalid_argument("sup_norm: grid too small");
      for (int i = 1; i < grid_points; ++i) {
        const double t = t_max * i / (grid_points - 1);
        sup = std::max(sup, inf_norm(at(t)));
      }
      return sup;
    }
  }
  throw std::logic_error("forcing: bad kind");
}

}  // namespace ilab
