#include "ilab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ilab/errors.hpp"
#include "ilab/evolution.hpp"
#include "ilab/linalg.hpp"

namespace ilab {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double decay_rate_from_k(double k, double max_gap) {
  require(std::isfinite(k) && k > 1.0, "boundedness constant k must exceed 1");
  require(std::isfinite(max_gap) && max_gap > 0.0, "largest gap must be positive");
  return std::log(k / (k - 1.0)) / max_gap;
}

double k_amplification(double k) { return std::pow(k, 4) / ((k - 1.0) * (k - 1.0)); }

}  // namespace

const char* to_string(CertificateKind k) {
  return k == CertificateKind::fundamental ? "fundamental" : "evolution";
}

const char* to_string(CertificateSource s) {
  switch (s) {
    case CertificateSource::boundedness_fundamental: return "boundedness-fundamental";
    case CertificateSource::boundedness_evolution: return "boundedness-evolution";
    case CertificateSource::empirical_fit: return "empirical-fit";
    case CertificateSource::from_impulsive: return "from-impulsive";
    case CertificateSource::from_continuous: return "from-continuous";
  }
  return "?";
}

GronwallEnvelope gronwall_envelope(double coeff_integral_bound,
                                   double jump_norm_bound) {
  require(std::isfinite(coeff_integral_bound) && coeff_integral_bound >= 0.0,
          "integral bound must be >= 0");
  require(std::isfinite(jump_norm_bound) && jump_norm_bound > 0.0,
          "jump norm bound must be positive");
  GronwallEnvelope env;
  env.interior = std::exp(coeff_integral_bound);
  env.at_jump = jump_norm_bound * env.interior;
  return env;
}

StabilityCertificate fundamental_certificate(double k, double max_gap,
                                             double first_impulse_norm,
                                             double pre_first_weighted_sup) {
  require(std::isfinite(first_impulse_norm) && first_impulse_norm >= 0.0,
          "first impulse norm must be >= 0");
  require(std::isfinite(pre_first_weighted_sup) && pre_first_weighted_sup >= 0.0,
          "weighted sup must be >= 0");
  StabilityCertificate cert;
  cert.kind = CertificateKind::fundamental;
  cert.source = CertificateSource::boundedness_fundamental;
  cert.rate = decay_rate_from_k(k, max_gap);
  cert.amplitude =
      std::max(first_impulse_norm * k_amplification(k), pre_first_weighted_sup);
  return cert;
}

StabilityCertificate evolution_certificate(double k, double max_gap, double rate,
                                           double jump_norm_bound,
                                           double coeff_integral_bound) {
  require(std::isfinite(rate) && rate > 0.0, "decay rate must be positive");
  require(std::isfinite(jump_norm_bound) && jump_norm_bound > 0.0,
          "jump norm bound must be positive");
  require(std::isfinite(coeff_integral_bound) && coeff_integral_bound >= 0.0,
          "integral bound must be >= 0");
  decay_rate_from_k(k, max_gap);  // validates k and the gap
  const double em = std::exp(coeff_integral_bound);
  const double corner = std::exp(rate * max_gap + coeff_integral_bound);
  const double n2 = std::max({jump_norm_bound * em * k_amplification(k),
                              jump_norm_bound * corner, corner});
  StabilityCertificate cert;
  cert.kind = CertificateKind::evolution;
  cert.source = CertificateSource::boundedness_evolution;
  cert.rate = rate;
  cert.amplitude = n2 * n2;
  return cert;
}

StabilityCertificate derive_fundamental_certificate(const ImpulsiveSystem& system,
                                                    double k, double h_max) {
  require(!system.schedule().empty(), "certificate derivation needs impulses");
  const double sigma = system.schedule().max_gap();
  const double nu = decay_rate_from_k(k, sigma);
  const double tau1 = system.schedule().time(0);
  const int n = system.dimension();
  double weighted_sup = 1.0;  // t = 0 contributes e^0 ||I||
  Eigen::MatrixXd x_pre = detail::integrate_operator(
      system.coefficients(), 0.0, tau1, Eigen::MatrixXd::Identity(n, n), h_max,
      [&](double t, const Eigen::MatrixXd& y) {
        weighted_sup = std::max(weighted_sup, std::exp(nu * t) * operator_inf_norm(y));
      });
  const double x1_norm = operator_inf_norm(system.jumps().at(0) * x_pre);
  return fundamental_certificate(k, sigma, x1_norm, weighted_sup);
}

StabilityCertificate derive_evolution_certificate(const ImpulsiveSystem& system,
                                                  double k, double h_max) {
  (void)h_max;  // the bounds come from quadrature, not an RK4 sweep
  const SystemBounds bounds = measure_bounds(system);
  const double nu = decay_rate_from_k(k, bounds.max_gap);
  return evolution_certificate(k, bounds.max_gap, nu, bounds.jump_norm_bound,
                               bounds.coeff_integral_bound);
}

double response_bound(const StabilityCertificate& certificate, double min_gap,
                      double x0_norm, double alpha_sup, double f_sup) {
  require(std::isfinite(certificate.rate) && certificate.rate > 0.0,
          "certificate rate must be positive");
  require(std::isfinite(certificate.amplitude) && certificate.amplitude > 0.0,
          "certificate amplitude must be positive");
  require(std::isfinite(min_gap) && min_gap > 0.0, "smallest gap must be positive");
  require(x0_norm >= 0.0 && alpha_sup >= 0.0 && f_sup >= 0.0,
          "norms must be >= 0");
  const double n = certificate.amplitude, nu = certificate.rate;
  return n * x0_norm + n * alpha_sup / (1.0 - std::exp(-nu * min_gap)) +
         (n / nu) * f_sup;
}

bool DecayingForcingSpec::dominates(const Forcing& forcing, double horizon,
                                    int grid_points) const {
  require(std::isfinite(amplitude) && amplitude >= 0.0, "envelope amplitude must be >= 0");
  require(std::isfinite(rate) && rate > 0.0, "envelope rate must be positive");
  require(grid_points >= 2, "grid too small");
  const double slack = 1e-9;
  for (std::size_t i = 0; i < forcing.alpha_count(); ++i) {
    const double bound = amplitude * std::exp(-rate * static_cast<double>(i + 1));
    if (inf_norm(forcing.alpha(i)) > bound * (1.0 + slack) + slack) return false;
  }
  for (int j = 0; j < grid_points; ++j) {
    const double t = horizon * j / (grid_points - 1);
    const double bound = amplitude * std::exp(-rate * t);
    if (inf_norm(forcing.f().at(t)) > bound * (1.0 + slack) + slack) return false;
  }
  return true;
}

DecayEnvelope forced_decay_envelope(const StabilityCertificate& certificate,
                                    double min_gap, double max_gap,
                                    const DecayingForcingSpec& forcing_spec) {
  require(std::isfinite(certificate.rate) && certificate.rate > 0.0,
          "certificate rate must be positive");
  require(std::isfinite(min_gap) && min_gap > 0.0 && max_gap >= min_gap,
          "need 0 < min_gap <= max_gap");
  require(std::isfinite(forcing_spec.amplitude) && forcing_spec.amplitude >= 0.0,
          "forcing amplitude must be >= 0");
  const double n = certificate.amplitude, nu = certificate.rate;
  const double n1 = forcing_spec.amplitude, lambda = forcing_spec.rate;
  if (n1 == 0.0) return DecayEnvelope{n, nu};  // no forcing, homogeneous decay
  require(std::isfinite(lambda) && lambda > 0.0, "forcing rate must be positive");

  // Jump-sum term. Perturbed lambda only enters the near-resonant denominator.
  double l2 = lambda;
  if (std::abs(nu * min_gap - l2) <= 1e-9) l2 += 1e-6;
  const double n_jump =
      n * n1 * std::exp(nu * min_gap) / (std::exp(std::abs(nu * min_gap - l2)) - 1.0);
  const double rate_jump = lambda / max_gap;

  // Convolution term.
  double l3 = lambda;
  if (std::abs(nu - l3) <= 1e-9) l3 += 1e-6;
  const double n_conv = n * n1 / std::abs(nu - l3);
  const double rate_conv = std::min(nu, lambda);

  DecayEnvelope env;
  env.amplitude = std::max({n, n_jump, n_conv});
  env.rate = std::min({nu, rate_jump, rate_conv});
  return env;
}

RateFit estimate_decay_rate(
    const std::vector<std::pair<double, double>>& norm_samples) {
  require(norm_samples.size() >= 10, "rate fit needs at least 10 samples");
  double t_max = -std::numeric_limits<double>::infinity();
  for (const auto& [t, v] : norm_samples) {
    require(std::isfinite(t) && std::isfinite(v) && v >= 0.0,
            "rate fit needs finite samples with nonnegative norms");
    t_max = std::max(t_max, t);
  }
  require(t_max > 0.0, "rate fit needs a positive time span");

  const double window_start = t_max / 2.0;
  double st = 0.0, sy = 0.0;
  std::size_t m = 0;
  for (const auto& [t, v] : norm_samples) {
    if (t < window_start) continue;
    if (v <= 0.0)
      throw NumericalError("decay rate undefined: zero norm at t=" + std::to_string(t), t);
    st += t;
    sy += std::log(v);
    ++m;
  }
  require(m >= 2, "rate fit window has too few samples");
  const double mt = st / static_cast<double>(m), my = sy / static_cast<double>(m);
  double cov = 0.0, var = 0.0;
  for (const auto& [t, v] : norm_samples) {
    if (t < window_start) continue;
    cov += (t - mt) * (std::log(v) - my);
    var += (t - mt) * (t - mt);
  }
  if (!(var > 0.0))
    throw NumericalError("decay rate undefined: degenerate fit window");

  RateFit fit;
  fit.rate = -cov / var;
  fit.amplitude = 0.0;
  for (const auto& [t, v] : norm_samples)
    fit.amplitude = std::max(fit.amplitude, v * std::exp(fit.rate * t));
  return fit;
}

StabilityCertificate empirical_certificate(const RateFit& fit, CertificateKind kind) {
  require(std::isfinite(fit.rate) && fit.rate > 0.0,
          "fitted rate not positive; no decay certificate");
  require(std::isfinite(fit.amplitude) && fit.amplitude >= 1.0,
          "fitted amplitude below 1 is not an operator-norm envelope");
  StabilityCertificate cert;
  cert.kind = kind;
  cert.amplitude = fit.amplitude;
  cert.rate = fit.rate;
  cert.source = CertificateSource::empirical_fit;
  return cert;
}

double tail_sup(const Trajectory& trajectory, double t_min) {
  const double horizon = trajectory.times().back();
  require(t_min < horizon, "tail start must precede the horizon");
  double sup = 0.0;
  for (std::size_t i = 0; i < trajectory.size(); ++i)
    if (trajectory.time(i) >= t_min)
      sup = std::max(sup, inf_norm(trajectory.state(i)));
  return sup;
}

TransferHypotheses measure_transfer_hypotheses(const ImpulsiveSystem& system,
                                               double h_max) {
  const auto& jumps = system.jumps();
  const std::size_t m = jumps.size();
  require(m > 0, "transfer hypotheses need at least one impulse");
  TransferHypotheses hyp;

  // epsilon: windowed min of |prod B|, log-domain for scalars, direct
  // products with inverse-norm lower bounds otherwise.
  if (jumps.dimension() == 1) {
    double best = 0.0;  // log of the window product; empty window = 0
    double sum = 0.0, max_prefix = 0.0;
    bool dead = false;
    for (std::size_t i = 0; i < m; ++i) {
      const double b = std::abs(jumps.at(i)(0, 0));
      if (b == 0.0) {
        dead = true;
        break;
      }
      sum += std::log(b);
      best = std::min(best, sum - max_prefix);
      max_prefix = std::max(max_prefix, sum);
    }
    hyp.epsilon = dead ? 0.0 : std::exp(best);
  } else {
    double eps = 1.0;
    const int n = jumps.dimension();
    for (std::size_t i = 0; i < m && eps > 0.0; ++i) {
      Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
      for (std::size_t j = i; j < m; ++j) {
        p = jumps.at(j) * p;
        if (!p.allFinite()) {
          eps = 0.0;
          break;
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(p);
        const double rc = lu.rcond();
        if (!(rc > 0.0)) {
          eps = 0.0;
          break;
        }
        eps = std::min(eps, 1.0 / operator_inf_norm(lu.inverse()));
      }
    }
    hyp.epsilon = eps;
  }
  if (hyp.epsilon < kJumpProductFloor) hyp.epsilon = 0.0;

  // Q: windowed max of prod ||B||, log-domain (a zero-norm jump kills its
  // windows, which is correct: their product is 0).
  {
    double best = 0.0, sum = 0.0, min_prefix = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sum += std::log(operator_inf_norm(jumps.at(i)));
      best = std::max(best, sum - min_prefix);
      min_prefix = std::min(min_prefix, sum);
    }
    hyp.product_norm_cap = std::max(std::exp(best), 1.0);
  }

  // Commutation: trivially true for scalars, otherwise measured over jump
  // pairs and against the jump-free evolution on a coarse grid.
  if (jumps.dimension() <= 1) {
    hyp.commuting = true;
    hyp.commutator_residual = 0.0;
  } else {
    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        residual = std::max(residual, operator_inf_norm(jumps.at(i) * jumps.at(j) -
                                                        jumps.at(j) * jumps.at(i)));
    const NonImpulsiveEvolution g(system.coefficients(), h_max);
    const int grid = 5;
    for (int a = 0; a < grid; ++a)
      for (int b = 0; b < grid; ++b) {
        if (a == b) continue;
        const double t = system.horizon() * a / (grid - 1);
        const double s = system.horizon() * b / (grid - 1);
        const Eigen::MatrixXd gm = g.at(t, s);
        for (std::size_t i = 0; i < m; ++i)
          residual = std::max(residual, operator_inf_norm(jumps.at(i) * gm -
                                                          gm * jumps.at(i)));
      }
    hyp.commutator_residual = residual;
    hyp.commuting = residual < kCommutingTolerance;
  }
  return hyp;
}

StabilityCertificate continuous_certificate_from_impulsive(
    const TransferHypotheses& hypotheses, const StabilityCertificate& certificate) {
  require(std::isfinite(certificate.rate) && certificate.rate > 0.0,
          "certificate rate must be positive");
  if (!(hypotheses.epsilon > 0.0))
    throw HypothesisViolated(
        "jump products admit no positive lower bound; cannot divide out the jumps");
  StabilityCertificate out;
  out.kind = CertificateKind::fundamental;
  out.amplitude = certificate.amplitude / hypotheses.epsilon;
  out.rate = certificate.rate;
  out.source = CertificateSource::from_impulsive;
  return out;
}

StabilityCertificate impulsive_certificate_from_continuous(
    const TransferHypotheses& hypotheses, const StabilityCertificate& certificate) {
  require(std::isfinite(certificate.rate) && certificate.rate > 0.0,
          "certificate rate must be positive");
  if (!hypotheses.commuting)
    throw HypothesisViolated("jump operators do not commute (residual " +
                             std::to_string(hypotheses.commutator_residual) + ")");
  if (!(hypotheses.product_norm_cap <= kJumpProductCap))
    throw HypothesisViolated("jump norm products exceed the boundedness cap");
  StabilityCertificate out;
  out.kind = CertificateKind::fundamental;
  out.amplitude = certificate.amplitude * hypotheses.product_norm_cap;
  out.rate = certificate.rate;
  out.source = CertificateSource::from_continuous;
  return out;
}

DominanceCheck check_dominance(const StabilityCertificate& certificate,
                               const std::vector<std::pair<double, double>>& norm_samples,
                               double slack) {
  require(!norm_samples.empty(), "dominance check needs samples");
  require(std::isfinite(certificate.amplitude) && certificate.amplitude > 0.0,
          "certificate amplitude must be positive");
  DominanceCheck out;
  for (const auto& [t, v] : norm_samples) {
    const double ratio = v * std::exp(certificate.rate * t) / certificate.amplitude;
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.worst_time = t;
    }
  }
  out.pass = out.max_ratio <= 1.0 + slack;
  return out;
}

}  // namespace ilab
