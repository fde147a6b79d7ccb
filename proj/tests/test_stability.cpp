#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ilab/demo.hpp"
#include "ilab/errors.hpp"
#include "ilab/evolution.hpp"
#include "ilab/stability.hpp"

#include "support.hpp"

using namespace ilab;
using testing::m1;
using testing::v1;

namespace {

std::vector<std::pair<double, double>> exp_samples(double rate, double amp,
                                                   double t_max, int n) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) {
    const double t = t_max * i / (n - 1);
    out.emplace_back(t, amp * std::exp(-rate * t));
  }
  return out;
}

}  // namespace

TEST_SUITE("stability") {

TEST_CASE("interval envelope from the coefficient integral and jump norm") {
  const auto e1 = gronwall_envelope(std::log(3.0), 2.0);
  CHECK(e1.interior == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e1.at_jump == doctest::Approx(6.0).epsilon(1e-12));

  const auto e2 = gronwall_envelope(0.0, 1.0);
  CHECK(e2.interior == 1.0);
  CHECK(e2.at_jump == 1.0);

  const double e = std::exp(1.0);
  const auto e3 = gronwall_envelope(1.0, e);
  CHECK(e3.interior == doctest::Approx(e).epsilon(1e-12));
  CHECK(e3.at_jump == doctest::Approx(e * e).epsilon(1e-12));

  CHECK_THROWS_AS(gronwall_envelope(-0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gronwall_envelope(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("boundedness constant k = 2 over unit gaps certifies rate ln 2") {
  const auto cert = fundamental_certificate(2.0, 1.0, 1.0, 0.0);
  CHECK(cert.kind == CertificateKind::fundamental);
  CHECK(cert.source == CertificateSource::boundedness_fundamental);
  CHECK(cert.rate == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(cert.amplitude == doctest::Approx(16.0).epsilon(1e-12));

  // doubling the gap halves the rate
  const auto wide = fundamental_certificate(2.0, 2.0, 1.0, 0.0);
  CHECK(wide.rate == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));

  // the amplitude keeps whichever term is larger
  const auto sup = fundamental_certificate(2.0, 1.0, 1.0, 20.0);
  CHECK(sup.amplitude == doctest::Approx(20.0).epsilon(1e-12));

  CHECK_THROWS_AS(fundamental_certificate(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fundamental_certificate(0.5, 1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fundamental_certificate(2.0, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("certified rate is strictly decreasing in k and in the gap") {
  double prev = std::numeric_limits<double>::infinity();
  for (double k : {1.001, 1.01, 1.5, 2.0, 4.0, 8.0}) {
    const double nu = fundamental_certificate(k, 1.0, 1.0, 0.0).rate;
    CHECK(nu < prev);
    CHECK(nu > 0.0);
    prev = nu;
  }
  prev = std::numeric_limits<double>::infinity();
  for (double sigma : {0.5, 1.0, 2.0}) {
    const double nu = fundamental_certificate(2.0, sigma, 1.0, 0.0).rate;
    CHECK(nu < prev);
    prev = nu;
  }
}

TEST_CASE("integral-route certificate squares its interval constant") {
  const double ln2 = std::log(2.0);
  const auto c1 = evolution_certificate(2.0, 1.0, ln2, 1.0, 0.0);
  CHECK(c1.kind == CertificateKind::evolution);
  CHECK(c1.source == CertificateSource::boundedness_evolution);
  CHECK(c1.rate == doctest::Approx(ln2).epsilon(1e-12));
  // interval constant max(16, 2, 2) = 16, squared
  CHECK(c1.amplitude == doctest::Approx(256.0).epsilon(1e-12));

  const auto c3 = evolution_certificate(2.0, 1.0, ln2, 3.0, 0.0);
  // max(48, 6, 2) = 48, squared
  CHECK(c3.amplitude == doctest::Approx(2304.0).epsilon(1e-12));

  CHECK_THROWS_AS(evolution_certificate(2.0, 1.0, ln2, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(evolution_certificate(2.0, 1.0, 0.0, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("derived certificates measure the halving demo exactly") {
  const auto sc = demo::halving(10.0);
  const auto fc = derive_fundamental_certificate(sc.system, 2.0);
  CHECK(fc.rate == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // max(||X(tau_1^+)|| k^4/(k-1)^2, sup e^{nu t}||X(t)|| on [0,1]) = max(8, 2)
  CHECK(fc.amplitude == doctest::Approx(8.0).epsilon(1e-9));

  const auto ec = derive_evolution_certificate(sc.system, 2.0);
  CHECK(ec.rate == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // interval constant max(0.5*16, 0.5*2, 2) = 8, squared
  CHECK(ec.amplitude == doctest::Approx(64.0).epsilon(1e-9));

  // both certificates actually dominate the measured fundamental norms
  const auto samples = fundamental_norm_samples(sc.system);
  CHECK(check_dominance(fc, samples).pass);
  CHECK(check_dominance(ec, samples).pass);

  const ImpulsiveSystem jumpless(CoefficientOperator::constant(m1(1.0)),
                                 JumpSequence::identity(1, 0),
                                 ImpulseSchedule({}, 2.0));
  CHECK_THROWS_AS(derive_fundamental_certificate(jumpless, 2.0),
                  std::invalid_argument);
}

TEST_CASE("uniform response bound for bounded forcing") {
  StabilityCertificate cert;
  cert.amplitude = 1.0;
  cert.rate = 1.0;
  // offsets only: geometric series 1/(1 - e^{-1})
  CHECK(response_bound(cert, 1.0, 0.0, 1.0, 0.0) ==
        doctest::Approx(1.0 / (1.0 - std::exp(-1.0))).epsilon(1e-12));

  // initial state only: the bound is N ||x0||
  StabilityCertificate n3;
  n3.amplitude = 3.0;
  n3.rate = 2.0;
  CHECK(response_bound(n3, 0.7, 1.0, 0.0, 0.0) == doctest::Approx(3.0).epsilon(1e-12));

  // all three contributions: 2 + 2/(1 - e^{-1/8}) + 4
  StabilityCertificate c;
  c.amplitude = 2.0;
  c.rate = 0.5;
  const double expected = 2.0 + 2.0 / (1.0 - std::exp(-0.125)) + 4.0;
  CHECK(expected == doctest::Approx(23.020827910003681).epsilon(1e-12));
  CHECK(response_bound(c, 0.25, 1.0, 1.0, 1.0) ==
        doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS(response_bound(cert, 0.0, 1.0, 1.0, 1.0), std::invalid_argument);
  StabilityCertificate flat;  // rate 0 cannot bound a series of offsets
  CHECK_THROWS_AS(response_bound(flat, 1.0, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("response bound is attained by the matched scalar system") {
  // x' + x = 0, B = 1, offsets 1 at t = 1, 2, ...: the post-jump values climb
  // the geometric series up to exactly the bound for the sharp certificate
  // N = 1, nu = 1.
  const auto sys = testing::scalar_uniform(1.0, 1.0, 1.0, 25.0);
  std::vector<Eigen::VectorXd> alphas(25, v1(1.0));
  const auto traj =
      solve_ivp(sys, Forcing(ForcingFunction::zero(1), alphas), v1(0.0));
  StabilityCertificate cert;
  cert.amplitude = 1.0;
  cert.rate = 1.0;
  const double bound = response_bound(cert, 1.0, 0.0, 1.0, 0.0);
  const double peak = testing::peak(traj);
  CHECK(peak <= bound + 1e-12);
  CHECK(bound - peak < 1e-9);  // sharp: the fixed point of the jump recursion
}

TEST_CASE("decaying forcing envelope aggregates the three terms") {
  const double ln2 = std::log(2.0);
  StabilityCertificate cert;
  cert.amplitude = 1.0;
  cert.rate = ln2;
  DecayingForcingSpec spec;
  spec.amplitude = 1.0;
  spec.rate = 1.0;

  // unit gaps: the jump-sum term dominates, 2/(e/2 - 1)
  const auto env = forced_decay_envelope(cert, 1.0, 1.0, spec);
  CHECK(env.amplitude == doctest::Approx(5.5688447647093313).epsilon(1e-9));
  CHECK(env.rate == doctest::Approx(ln2).epsilon(1e-12));

  // small smallest gap: the convolution term 1/(1 - ln 2) takes over
  const auto env2 = forced_decay_envelope(cert, 0.1, 1.0, spec);
  CHECK(env2.amplitude == doctest::Approx(3.2588913532709295).epsilon(1e-9));
  CHECK(env2.rate == doctest::Approx(ln2).epsilon(1e-12));

  // no forcing: the homogeneous pair passes through untouched
  DecayingForcingSpec none;
  none.amplitude = 0.0;
  none.rate = 1.0;
  const auto env3 = forced_decay_envelope(cert, 1.0, 1.0, none);
  CHECK(env3.amplitude == 1.0);
  CHECK(env3.rate == ln2);
}

TEST_CASE("near-resonant rates stay finite via the local perturbation") {
  StabilityCertificate cert;
  cert.amplitude = 1.0;
  cert.rate = 1.0;
  DecayingForcingSpec spec;
  spec.amplitude = 1.0;
  spec.rate = 1.0;  // nu rho == lambda and nu == lambda: both denominators collapse
  const auto env = forced_decay_envelope(cert, 1.0, 1.0, spec);
  CHECK(std::isfinite(env.amplitude));
  CHECK(env.amplitude > 1e5);  // 1/(e^{1e-6} - 1) scale
  CHECK(env.rate > 0.0);
}

TEST_CASE("envelope rate never beats the homogeneous and jump-density caps") {
  for (double nu : {0.2, 0.7, 1.3}) {
    for (double lambda : {0.1, 0.5, 2.0}) {
      for (double sigma : {0.5, 1.0, 2.0}) {
        StabilityCertificate cert;
        cert.amplitude = 2.0;
        cert.rate = nu;
        DecayingForcingSpec spec;
        spec.amplitude = 0.3;
        spec.rate = lambda;
        const auto env = forced_decay_envelope(cert, 0.5 * sigma, sigma, spec);
        CHECK(env.rate <= std::min(nu, lambda / sigma) + 1e-12);
        CHECK(env.amplitude >= cert.amplitude);
      }
    }
  }
}

TEST_CASE("forcing envelope dominance check inspects the actual data") {
  DecayingForcingSpec spec;
  spec.amplitude = 1.0;
  spec.rate = 1.0;
  std::vector<Eigen::VectorXd> alphas{v1(std::exp(-1.0)), v1(std::exp(-2.0))};
  const Forcing ok(ForcingFunction::zero(1), alphas);
  CHECK(spec.dominates(ok, 3.0));

  std::vector<Eigen::VectorXd> big{v1(std::exp(-1.0) + 0.1), v1(0.0)};
  const Forcing bad(ForcingFunction::zero(1), big);
  CHECK(!spec.dominates(bad, 3.0));

  const Forcing cont(
      ForcingFunction::custom(1, [](double t) { return v1(0.9 * std::exp(-t)); }),
      {});
  CHECK(spec.dominates(cont, 3.0));
}

TEST_CASE("rate fit recovers a pure exponential to machine precision") {
  const auto fit = estimate_decay_rate(exp_samples(2.0, 1.0, 10.0, 201));
  CHECK(fit.rate == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rate fit reports zero decay for constant norms") {
  const auto fit = estimate_decay_rate(exp_samples(0.0, 0.7, 10.0, 101));
  CHECK(std::abs(fit.rate) < 1e-12);
  CHECK(fit.amplitude == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("rate fit on the halving staircase lands near ln 2") {
  const auto sc = demo::halving(10.0);
  const auto fit = estimate_decay_rate(fundamental_norm_samples(sc.system));
  CHECK(std::abs(fit.rate - std::log(2.0)) < 0.05 * std::log(2.0));
  CHECK(fit.amplitude >= 1.0);
}

TEST_CASE("rate fit input validation") {
  CHECK_THROWS_AS(estimate_decay_rate(exp_samples(1.0, 1.0, 1.0, 9)),
                  std::invalid_argument);
  auto dead = exp_samples(1.0, 1.0, 10.0, 21);
  for (auto& [t, v] : dead)
    if (t >= 5.0) v = 0.0;
  CHECK_THROWS_AS(estimate_decay_rate(dead), NumericalError);
}

TEST_CASE("fit-backed certificate construction") {
  RateFit fit;
  fit.rate = 0.5;
  fit.amplitude = 2.0;
  const auto cert = empirical_certificate(fit, CertificateKind::evolution);
  CHECK(cert.kind == CertificateKind::evolution);
  CHECK(cert.source == CertificateSource::empirical_fit);
  CHECK(cert.amplitude == 2.0);
  CHECK(cert.rate == 0.5);

  fit.rate = -0.1;
  CHECK_THROWS_AS(empirical_certificate(fit, CertificateKind::fundamental),
                  std::invalid_argument);
  fit.rate = 0.5;
  fit.amplitude = 0.9;  // operator norms start at ||I|| = 1
  CHECK_THROWS_AS(empirical_certificate(fit, CertificateKind::fundamental),
                  std::invalid_argument);
}

TEST_CASE("tail sup of the demo trajectories") {
  const auto h = demo::halving(10.0);
  const auto ht = solve_ivp(h.system, h.forcing, h.x0);
  CHECK(tail_sup(ht, 5.0) == 0.03125);  // 2^-5, exact dyadics throughout

  const auto c = demo::compensated(10.0);
  const auto ct = solve_ivp(c.system, c.forcing, c.x0);
  const double tail = tail_sup(ct, 5.0);
  CHECK(tail >= std::exp(-1.0));
  CHECK(tail == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(tail_sup(ht, 10.0), std::invalid_argument);
}

TEST_CASE("transfer hypotheses on a scalar sign-flipping sequence") {
  const ImpulsiveSystem sys(CoefficientOperator::constant(m1(0.0)),
                            JumpSequence({m1(2.0), m1(-1.0), m1(-3.0)}),
                            ImpulseSchedule({1.0, 2.0, 3.0}, 4.0));
  const auto hyp = measure_transfer_hypotheses(sys);
  CHECK(hyp.epsilon == 1.0);  // weakest window is the single factor -1
  CHECK(hyp.product_norm_cap == 6.0);
  CHECK(hyp.commuting);  // dimension 1
  CHECK(hyp.commutator_residual == 0.0);
}

TEST_CASE("transfer hypotheses on matrix jumps") {
  Eigen::MatrixXd a(2, 2);
  a << 0.0, 1.0, -1.0, 0.0;
  const ImpulsiveSystem scaled(
      CoefficientOperator::constant(a),
      JumpSequence::constant(0.5 * Eigen::MatrixXd::Identity(2, 2), 3),
      ImpulseSchedule({1.0, 2.0, 3.0}, 4.0));
  const auto hyp = measure_transfer_hypotheses(scaled);
  CHECK(hyp.epsilon == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(hyp.product_norm_cap == 1.0);  // floored: norm products stay below 1
  CHECK(hyp.commuting);                // scalar multiples commute with the flow
  CHECK(hyp.commutator_residual < 1e-8);

  Eigen::MatrixXd upper(2, 2), lower(2, 2);
  upper << 1.0, 1.0, 0.0, 1.0;
  lower << 1.0, 0.0, 1.0, 1.0;
  const ImpulsiveSystem shear(CoefficientOperator::constant(Eigen::MatrixXd::Zero(2, 2)),
                              JumpSequence({upper, lower}),
                              ImpulseSchedule({1.0, 2.0}, 3.0));
  const auto bad = measure_transfer_hypotheses(shear);
  CHECK(!bad.commuting);
  CHECK(bad.commutator_residual > 0.1);
}

TEST_CASE("certificate transfer in both directions on a neutral scalar system") {
  const auto sys = testing::scalar_uniform(1.0, 1.0, 1.0, 5.0);
  const auto hyp = measure_transfer_hypotheses(sys);
  CHECK(hyp.epsilon == 1.0);
  CHECK(hyp.product_norm_cap == 1.0);

  StabilityCertificate cert;
  cert.amplitude = 2.0;
  cert.rate = 1.0;
  const auto cont = continuous_certificate_from_impulsive(hyp, cert);
  CHECK(cont.amplitude == 2.0);
  CHECK(cont.rate == 1.0);
  CHECK(cont.source == CertificateSource::from_impulsive);

  const auto imp = impulsive_certificate_from_continuous(hyp, cert);
  CHECK(imp.amplitude == 2.0);
  CHECK(imp.rate == 1.0);
  CHECK(imp.source == CertificateSource::from_continuous);
}

TEST_CASE("transfer refuses long halving windows: products vanish") {
  const auto sc = demo::halving(31.0);
  const auto hyp = measure_transfer_hypotheses(sc.system);
  CHECK(hyp.epsilon == 0.0);  // 2^-31 falls below the reporting floor
  StabilityCertificate cert;
  cert.amplitude = 8.0;
  cert.rate = std::log(2.0);
  CHECK_THROWS_AS(continuous_certificate_from_impulsive(hyp, cert),
                  HypothesisViolated);
  // the opposite direction is still fine: norm products stay at 1
  CHECK(impulsive_certificate_from_continuous(hyp, cert).amplitude == 8.0);
}

TEST_CASE("transfer refuses long compensated windows: products explode") {
  const auto sc = demo::compensated(30.0);
  const auto hyp = measure_transfer_hypotheses(sc.system);
  CHECK(hyp.product_norm_cap > 1e12);  // e^30
  StabilityCertificate cert;
  cert.amplitude = 1.0;
  cert.rate = 1.0;
  CHECK_THROWS_AS(impulsive_certificate_from_continuous(hyp, cert),
                  HypothesisViolated);
  // dividing the jumps out still works: every window product is >= 1
  CHECK(continuous_certificate_from_impulsive(hyp, cert).amplitude == 1.0);
}

TEST_CASE("transfer to the impulsive side needs commuting jumps") {
  Eigen::MatrixXd upper(2, 2), lower(2, 2);
  upper << 1.0, 1.0, 0.0, 1.0;
  lower << 1.0, 0.0, 1.0, 1.0;
  const ImpulsiveSystem shear(CoefficientOperator::constant(Eigen::MatrixXd::Zero(2, 2)),
                              JumpSequence({upper, lower}),
                              ImpulseSchedule({1.0, 2.0}, 3.0));
  const auto hyp = measure_transfer_hypotheses(shear);
  StabilityCertificate cert;
  cert.amplitude = 1.0;
  cert.rate = 1.0;
  CHECK_THROWS_AS(impulsive_certificate_from_continuous(hyp, cert),
                  HypothesisViolated);
}

TEST_CASE("dominance check reports the worst ratio and where it happens") {
  StabilityCertificate cert;
  cert.amplitude = 2.0;
  cert.rate = 1.0;
  const std::vector<std::pair<double, double>> ok{{0.0, 1.0}, {1.0, 0.5}};
  const auto pass = check_dominance(cert, ok);
  CHECK(pass.pass);
  CHECK(pass.max_ratio == doctest::Approx(0.5 * std::exp(1.0) / 2.0).epsilon(1e-12));
  CHECK(pass.worst_time == 1.0);

  const std::vector<std::pair<double, double>> bad{{0.0, 3.0}, {1.0, 0.5}};
  const auto fail = check_dominance(cert, bad);
  CHECK(!fail.pass);
  CHECK(fail.max_ratio == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fail.worst_time == 0.0);

  CHECK_THROWS_AS(check_dominance(cert, {}), std::invalid_argument);
}

TEST_CASE("certificate enum names") {
  CHECK(to_string(CertificateKind::fundamental) == std::string("fundamental"));
  CHECK(to_string(CertificateKind::evolution) == std::string("evolution"));
  CHECK(to_string(CertificateSource::boundedness_fundamental) ==
        std::string("boundedness-fundamental"));
  CHECK(to_string(CertificateSource::boundedness_evolution) ==
        std::string("boundedness-evolution"));
  CHECK(to_string(CertificateSource::empirical_fit) == std::string("empirical-fit"));
  CHECK(to_string(CertificateSource::from_impulsive) == std::string("from-impulsive"));
  CHECK(to_string(CertificateSource::from_continuous) == std::string("from-continuous"));
}

}  // TEST_SUITE
