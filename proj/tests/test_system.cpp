#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ilab/demo.hpp"
#include "ilab/system.hpp"

#include "support.hpp"

using namespace ilab;
using testing::m1;
using testing::v1;

TEST_SUITE("system") {

TEST_CASE("uniform schedule lands instants on multiples of the spacing") {
  const auto s = ImpulseSchedule::uniform(1.0, 10.0);
  REQUIRE(s.size() == 10);
  CHECK(s.time(0) == 1.0);
  CHECK(s.time(9) == 10.0);  // horizon itself is an instant here
  CHECK(s.min_gap() == 1.0);
  CHECK(s.max_gap() == 1.0);

  const auto q = ImpulseSchedule::uniform(0.25, 1.0);
  REQUIRE(q.size() == 4);
  CHECK(q.time(3) == 1.0);  // clamped exactly onto the horizon
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(ImpulseSchedule({1.0, 1.0}, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ImpulseSchedule({2.0, 1.0}, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(ImpulseSchedule({0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ImpulseSchedule({1.5}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ImpulseSchedule({}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ImpulseSchedule::uniform(0.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(ImpulseSchedule({}, 1.0));  // jump-free schedule is fine
}

TEST_CASE("gap statistics include the leading interval") {
  const ImpulseSchedule s({1.0, 2.5, 3.0}, 4.0);
  CHECK(s.min_gap() == doctest::Approx(0.5));
  CHECK(s.max_gap() == doctest::Approx(1.5));
  CHECK_THROWS_AS(ImpulseSchedule({}, 1.0).min_gap(), std::invalid_argument);
}

TEST_CASE("instant lookup") {
  const ImpulseSchedule s({1.0, 2.0, 3.0}, 5.0);
  CHECK(s.last_at_or_before(0.5) == ImpulseSchedule::npos);
  CHECK(s.last_at_or_before(1.0) == 0);
  CHECK(s.last_at_or_before(2.999) == 1);
  CHECK(s.last_at_or_before(3.0) == 2);
  CHECK(s.count_at_or_before(0.5) == 0);
  CHECK(s.count_at_or_before(2.0) == 2);
  CHECK(s.count_at_or_before(10.0) == 3);
}

TEST_CASE("interval boundaries append the horizon only when it extends past "
          "the last instant") {
  CHECK(ImpulseSchedule({1.0, 2.0}, 3.0).interval_boundaries() ==
        std::vector<double>{0.0, 1.0, 2.0, 3.0});
  CHECK(ImpulseSchedule({1.0, 2.0}, 2.0).interval_boundaries() ==
        std::vector<double>{0.0, 1.0, 2.0});
  CHECK(ImpulseSchedule({}, 2.0).interval_boundaries() ==
        std::vector<double>{0.0, 2.0});
}

TEST_CASE("piecewise coefficient takes the left limit on the pre side") {
  const auto A = CoefficientOperator::piecewise_constant(
      {1.0, 2.0}, {m1(10.0), m1(20.0), m1(30.0)});
  CHECK(A.at(0.5)(0, 0) == 10.0);
  CHECK(A.at(1.0, Side::post)(0, 0) == 20.0);
  CHECK(A.at(1.0, Side::pre)(0, 0) == 10.0);
  CHECK(A.at(1.5)(0, 0) == 20.0);
  CHECK(A.at(2.0, Side::pre)(0, 0) == 20.0);
  CHECK(A.at(5.0)(0, 0) == 30.0);
  CHECK(A.discontinuities() == std::vector<double>{1.0, 2.0});
}

TEST_CASE("sampled coefficient interpolates and clamps") {
  const auto A = CoefficientOperator::sampled({0.0, 1.0}, {m1(0.0), m1(2.0)});
  CHECK(A.at(0.5)(0, 0) == doctest::Approx(1.0));
  CHECK(A.at(-3.0)(0, 0) == 0.0);
  CHECK(A.at(9.0)(0, 0) == 2.0);
  CHECK(A.discontinuities().empty());
}

TEST_CASE("signal validation") {
  CHECK_THROWS_AS(CoefficientOperator::piecewise_constant({1.0}, {m1(1.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      CoefficientOperator::piecewise_constant({2.0, 1.0},
                                              {m1(1.0), m1(2.0), m1(3.0)}),
      std::invalid_argument);
  CHECK_THROWS_AS(CoefficientOperator::sampled({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientOperator::custom(1, nullptr), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientOperator::piecewise_constant(
                      {1.0}, {m1(1.0), Eigen::MatrixXd::Zero(2, 2)}),
                  std::invalid_argument);
}

TEST_CASE("norm integral uses the pre-side limit at the upper endpoint") {
  // The Simpson rule samples the upper endpoint; with a break exactly there
  // the post value (3) must not leak into the integral over [0, 1].
  const auto A =
      CoefficientOperator::piecewise_constant({1.0}, {m1(1.0), m1(3.0)});
  CHECK(A.norm_integral(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(A.norm_integral(1.0, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(A.norm_integral(0.5, 0.5) == 0.0);
  CHECK_THROWS_AS(A.norm_integral(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("norm integral is exact for constants and accurate for smooth data") {
  CHECK(CoefficientOperator::constant(m1(2.0)).norm_integral(0.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-14));
  const auto A = CoefficientOperator::custom(
      1, [](double t) { return m1(2.0 + 0.1 * std::sin(t)); });
  // int over [1, 2] of 2 + 0.1 sin t = 2 + 0.1 (cos 1 - cos 2)
  CHECK(A.norm_integral(1.0, 2.0) ==
        doctest::Approx(2.0956449142415282).epsilon(1e-12));
}

TEST_CASE("forcing sup norm is exact on stored data") {
  const auto f = ForcingFunction::piecewise_constant({1.0}, {v1(2.0), v1(-5.0)});
  CHECK(f.sup_norm(0.5) == 2.0);
  CHECK(f.sup_norm(2.0) == 5.0);
  CHECK(f.sup_norm(1.0) == 5.0);  // the piece starting at t = 1 counts
  CHECK(ForcingFunction::constant(v1(-3.0)).sup_norm(100.0) == 3.0);
  CHECK(ForcingFunction::zero(2).is_zero());
  CHECK_FALSE(f.is_zero());
  const auto g = ForcingFunction::custom(1, [](double t) { return v1(t); });
  CHECK(g.sup_norm(1.0) == doctest::Approx(1.0));
}

TEST_CASE("jump sequence basics") {
  Eigen::MatrixXd b(2, 2);
  b << 1.0, 2.0, 0.0, 1.0;
  const auto jumps = JumpSequence::constant(b, 3);
  CHECK(jumps.size() == 3);
  CHECK(jumps.dimension() == 2);
  CHECK(jumps.norm_bound() == 3.0);  // max absolute row sum
  CHECK(JumpSequence({}).empty());
  CHECK(JumpSequence({}).norm_bound() == 0.0);
  CHECK(JumpSequence::identity(2, 2).at(1) == Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(JumpSequence({m1(1.0), Eigen::MatrixXd::Zero(2, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(JumpSequence({Eigen::MatrixXd::Zero(2, 3)}),
                  std::invalid_argument);
}

TEST_CASE("impulsive system validation") {
  auto schedule = ImpulseSchedule({1.0}, 2.0);
  // jump dimension must match A
  CHECK_THROWS_AS(ImpulsiveSystem(CoefficientOperator::constant(m1(1.0)),
                                  JumpSequence::identity(2, 1), schedule),
                  std::invalid_argument);
  // one jump per instant
  CHECK_THROWS_AS(ImpulsiveSystem(CoefficientOperator::constant(m1(1.0)),
                                  JumpSequence::identity(1, 2), schedule),
                  std::invalid_argument);
  // interior coefficient breaks must sit on impulse instants
  CHECK_THROWS_AS(
      ImpulsiveSystem(CoefficientOperator::piecewise_constant(
                          {0.5}, {m1(1.0), m1(2.0)}),
                      JumpSequence::identity(1, 1), schedule),
      std::invalid_argument);
  CHECK_NOTHROW(ImpulsiveSystem(CoefficientOperator::piecewise_constant(
                                    {1.0}, {m1(1.0), m1(2.0)}),
                                JumpSequence::identity(1, 1), schedule));
}

TEST_CASE("forcing container") {
  auto f = Forcing(ForcingFunction::zero(1), {v1(2.0), v1(-3.0)});
  CHECK(f.alpha_count() == 2);
  CHECK(f.sup_alpha() == 3.0);
  CHECK(f.sup_f(10.0) == 0.0);
  const auto none = Forcing::none(2, 3);
  CHECK(none.sup_alpha() == 0.0);
  CHECK(none.f().is_zero());
}

TEST_CASE("measured bounds on the demo systems") {
  const auto halving = demo::halving(10.0);
  const auto hb = measure_bounds(halving.system);
  CHECK(hb.min_gap == doctest::Approx(1.0));
  CHECK(hb.max_gap == doctest::Approx(1.0));
  CHECK(hb.jump_norm_bound == doctest::Approx(0.5));
  CHECK(hb.coeff_integral_bound == doctest::Approx(0.0));
  CHECK(hb.impulse_density == doctest::Approx(1.0));

  const auto compensated = demo::compensated(10.0);
  const auto cb = measure_bounds(compensated.system);
  CHECK(cb.jump_norm_bound == doctest::Approx(std::exp(1.0)));
  CHECK(cb.coeff_integral_bound == doctest::Approx(1.0));

  const ImpulsiveSystem jump_free(CoefficientOperator::constant(m1(1.0)),
                                  JumpSequence({}), ImpulseSchedule({}, 1.0));
  CHECK_THROWS_AS(measure_bounds(jump_free), std::invalid_argument);
}

TEST_CASE("coefficient integral bound is the worst interval, split exactly at "
          "the instants") {
  // A = 2 + 0.1 sin t with instants at 1 and 2: the second interval carries
  // the larger integral.
  const auto A = CoefficientOperator::custom(
      1, [](double t) { return m1(2.0 + 0.1 * std::sin(t)); });
  const ImpulsiveSystem sys(A, JumpSequence::constant(m1(0.5), 2),
                            ImpulseSchedule({1.0, 2.0}, 2.0));
  const auto b = measure_bounds(sys);
  CHECK(b.coeff_integral_bound ==
        doctest::Approx(2.0956449142415282).epsilon(1e-12));
  CHECK(b.impulse_density == doctest::Approx(1.0));
}

}  // TEST_SUITE
