#pragma once

#include <utility>
#include <vector>

#include "ilab/common.hpp"
#include "ilab/integrator.hpp"
#include "ilab/system.hpp"

namespace ilab {

enum class CertificateKind { fundamental, evolution };

enum class CertificateSource {
  boundedness_fundamental,  // from a boundedness constant, first-interval route
  boundedness_evolution,    // from a boundedness constant, integral-bound route
  empirical_fit,            // fitted from norm samples
  from_impulsive,           // transferred to the jump-free system
  from_continuous,          // transferred from the jump-free system
};

const char* to_string(CertificateKind k);
const char* to_string(CertificateSource s);

// Exponential decay claim ||.|| <= amplitude * e^{-rate * t}: about ||X(t)||
// for kind fundamental, about ||C(t,s)|| as a function of t-s for kind
// evolution.
struct StabilityCertificate {
  CertificateKind kind = CertificateKind::fundamental;
  double amplitude = 1.0;  // N
  double rate = 0.0;       // nu
  CertificateSource source = CertificateSource::empirical_fit;
};

// Envelope constants for ||C(t, tau_p)|| on one inter-impulse interval:
// e^M strictly inside, b e^M after crossing the next jump.
struct GronwallEnvelope {
  double interior = 1.0;
  double at_jump = 1.0;
};
GronwallEnvelope gronwall_envelope(double coeff_integral_bound,
                                   double jump_norm_bound);

// Certificate from a boundedness constant k (sup ||X|| under unit-bounded
// jump offsets) over the largest gap sigma:
//   rate      nu = ln(k/(k-1)) / sigma
//   amplitude N  = max(first_impulse_norm * k^4/(k-1)^2, pre_first_weighted_sup)
// where pre_first_weighted_sup = sup of e^{nu t} ||X(t)|| before the first
// impulse. The rate is strictly decreasing in both k and sigma.
StabilityCertificate fundamental_certificate(double k, double max_gap,
                                             double first_impulse_norm,
                                             double pre_first_weighted_sup);

// Same decay rate, amplitude from the integral-route constants alone:
//   N2 = max(b e^M k^4/(k-1)^2, b e^{nu sigma + M}, e^{nu sigma + M}),  N = N2^2
// Valid for the evolution operator, any starting time.
StabilityCertificate evolution_certificate(double k, double max_gap, double rate,
                                           double jump_norm_bound,
                                           double coeff_integral_bound);

// Measure the needed quantities from the system itself (one fundamental
// sweep) and apply the corresponding constructor. Requires impulses.
StabilityCertificate derive_fundamental_certificate(const ImpulsiveSystem& system,
                                                    double k,
                                                    double h_max = kDefaultStep);
StabilityCertificate derive_evolution_certificate(const ImpulsiveSystem& system,
                                                  double k,
                                                  double h_max = kDefaultStep);

// Uniform-in-time response bound for bounded forcing:
//   N ||x0|| + N sup||alpha|| / (1 - e^{-nu rho}) + (N/nu) sup||f||
// with rho the smallest gap.
double response_bound(const StabilityCertificate& certificate, double min_gap,
                      double x0_norm, double alpha_sup, double f_sup);

// Decaying forcing envelope: ||f(t)|| <= amplitude e^{-rate t} and
// ||alpha_n|| <= amplitude e^{-rate n} (n = 1-based impulse index).
struct DecayingForcingSpec {
  double amplitude = 0.0;  // N1
  double rate = 0.0;       // lambda
  // Check the envelope against actual forcing data: offsets exactly, the
  // continuous part on a uniform grid.
  bool dominates(const Forcing& forcing, double horizon,
                 int grid_points = 1025) const;
};

struct DecayEnvelope {
  double amplitude = 0.0;  // N0
  double rate = 0.0;       // nu0
};

// Envelope N0 e^{-nu0 t} for the forced response under a decaying forcing:
// max/min aggregation of the homogeneous term (N, nu), the jump-sum term
// (N N1 e^{nu rho}/(e^{|nu rho - lambda|}-1), lambda/sigma) and the
// convolution term (N N1/|nu - lambda|, min(nu, lambda)). Near-resonant
// denominators perturb lambda by 1e-6 locally. A zero-amplitude forcing spec
// returns the homogeneous pair unchanged.
DecayEnvelope forced_decay_envelope(const StabilityCertificate& certificate,
                                    double min_gap, double max_gap,
                                    const DecayingForcingSpec& forcing_spec);

// Fitted decay: rate from the least-squares slope of ln||.|| over the second
// half of the time span, amplitude = sup over all samples of norm * e^{rate t}.
struct RateFit {
  double rate = 0.0;       // nu_hat
  double amplitude = 0.0;  // N_hat
};
// Needs >= 10 samples; a zero norm inside the fit window raises NumericalError.
RateFit estimate_decay_rate(const std::vector<std::pair<double, double>>& norm_samples);

// Certificate from a fit of operator-norm data; requires rate > 0 and
// amplitude >= 1 (operator norms start at ||I|| = 1).
StabilityCertificate empirical_certificate(const RateFit& fit, CertificateKind kind);

// sup ||x(t)|| over samples with t >= t_min; t_min must precede the horizon.
double tail_sup(const Trajectory& trajectory, double t_min);

// Data for moving decay between the impulsive system and its jump-free part,
// measured over every impulse window i..j:
//   epsilon          smallest magnitude of prod B (reported as 0 when it
//                    falls below kJumpProductFloor), capped above by 1
//                    (empty product);
//   product_norm_cap largest prod ||B||, at least 1 (empty product);
//   commuting        jumps commute pairwise and with the jump-free evolution
//                    (always true in dimension 1);
//   commutator_residual  largest commutator norm observed.
struct TransferHypotheses {
  double epsilon = 0.0;
  double product_norm_cap = 1.0;
  bool commuting = false;
  double commutator_residual = 0.0;
};
TransferHypotheses measure_transfer_hypotheses(const ImpulsiveSystem& system,
                                               double h_max = kDefaultStep);

// Jump-free certificate (N/epsilon, nu) from an impulsive one. Throws
// HypothesisViolated when epsilon <= 0.
StabilityCertificate continuous_certificate_from_impulsive(
    const TransferHypotheses& hypotheses, const StabilityCertificate& certificate);

// Impulsive certificate (N * Q, nu) from a jump-free one. Throws
// HypothesisViolated when the jumps do not commute or Q exceeds
// kJumpProductCap.
StabilityCertificate impulsive_certificate_from_continuous(
    const TransferHypotheses& hypotheses, const StabilityCertificate& certificate);

// Largest norm * e^{rate t} / amplitude over the samples; pass when it stays
// within 1 + slack.
struct DominanceCheck {
  bool pass = false;
  double max_ratio = 0.0;
  double worst_time = 0.0;
};
DominanceCheck check_dominance(const StabilityCertificate& certificate,
                               const std::vector<std::pair<double, double>>& norm_samples,
                               double slack = kDominanceSlack);

}  // namespace ilab
