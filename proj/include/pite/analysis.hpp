#pragma once

#include "pite/engine.hpp"
#include "pite/hamiltonians.hpp"
#include "pite/schedules.hpp"

#include <vector>

namespace pite {

inline constexpr double euler_gamma = 0.57721566490153286061;

// Sine integral Si(x) = int_0^x sin(t)/t dt.  Requires x >= 0.
double si(double x);

// Cosine integral Ci(x) = euler_gamma + ln(x) - Cin(x).  Requires x > 0
// (logarithmic singularity at 0 -> std::domain_error).
double ci(double x);

// Entire companion Cin(x) = int_0^x (1 - cos(t))/t dt.  Requires x >= 0.
double cin(double x);

// Phase parameters of a linear schedule seen by one excitation energy:
// the step-k angle is a + b*k, so a + b = dlambda*s*dtau_min and
// a + b*K = dlambda*s*dtau_max.
struct LinearBoundParams {
    double a = 0.0; // offset:    dlambda*s*(dtau_min - (dtau_max-dtau_min)/(K-1))
    double b = 0.0; // increment: dlambda*s*(dtau_max-dtau_min)/(K-1)
    int K = 0;
};

LinearBoundParams linear_bound_params(double dlambda, double s, double dtau_min,
                                      double dtau_max, int K);

struct LogDampingBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool degenerate = false;      // b == 0; both bounds equal K*ln(cos^2 a)
    bool integral_caveat = false; // per-step phase b > pi/4: the sum-to-integral
                                  // replacement behind the bounds degrades
};

// Half-period counting bounds on (1/b) * int of ln cos^2 over the schedule's
// phase range.  Each covered half-period contributes -pi*ln2.
LogDampingBounds log_damping_bounds(const LinearBoundParams& p);

// Closed-form integral approximation of (1/K) sum_k cos^2(a + b*k):
// 1/2 + cos(2a + bK) * sin(bK) / (2bK), with the bK -> 0 limit cos^2(a).
double arithmetic_mean_linear(const LinearBoundParams& p);

// Phase parameters of an exponential schedule seen by one excitation energy.
struct ExpMeanParams {
    double alpha = 0.0;     // s*dlambda*dtau_max
    double beta = 0.0;      // s*dlambda*(dtau_max - dtau_min)
    double kappa = 0.0;     // kappa_bar * K
    double kappa_bar = 0.0;
};

ExpMeanParams exp_mean_params(double dlambda, double s, double dtau_min, double dtau_max,
                              int K, double kappa_bar);

struct ExpMeanResult {
    double mean = 0.0;
    double amplitude = 0.0; // hypot(delta_S, delta_C)
    double phase = 0.0;     // acos(delta_C / amplitude), in [0, pi]
};

// Closed-form integral approximation of the mean of cos^2 over an exponential
// schedule: mean = 1/2 + (delta_C*cos(2*alpha) + delta_S*sin(2*alpha))/2 with
// delta_S = kappa_bar*[Si(x_hi) - Si(x_lo)], delta_C = 1 - kappa_bar*[Cin(x_hi)
// - Cin(x_lo)], x_hi = 2*beta*e^{1/kappa}, x_lo = 2*beta*e^{1/kappa - 1/kappa_bar}.
// beta == 0 degenerates to (cos^2 alpha, 1, 0).
ExpMeanResult arithmetic_mean_exponential(const ExpMeanParams& p);

// Step-count estimate K = c * ln((1 - w1_sq) / (eps_tilde * w1_sq)):
// `limit` uses c = 1/(2 ln 2) (every excited factor at its half-period mean),
// `cos2_bound` uses c = 3/(2 ln 2) (the cruder cos^2 <= 1/4 window bound).
enum class StepsVariant { limit, cos2_bound };

double required_steps_raw(double w1_sq, double eps_tilde, StepsVariant variant);
long required_steps(double w1_sq, double eps_tilde, StepsVariant variant); // ceil, >= 0

// Total imaginary time to reach eps_tilde: `linear_exp` divides the log by
// 4*s*dlambda*ln2 (pass the minimum excitation energy); `constant` divides by
// 4*dlambda*ln2 with the *maximum* excitation energy and no s factor.
enum class TauVariant { linear_exp, constant };

double required_tau_schedule(double dlambda, double s, double w1_sq, double eps_tilde,
                             TauVariant variant);

// Error-minimizing dtau_max (s-free).  linear: 0.62*pi/(s*dlambda_min).
// exponential: the dtau_max whose final step equals 0.5*pi/(s*dlambda_min),
// inverting the final-step formula at dtau_min = 0; requires K >= 2 and
// kappa_bar > 0.
double optimal_dtau_max(double dlambda_min, double s, ScheduleKind kind, int K = 0,
                        double kappa_bar = 0.0);

struct ValidityViolation {
    int index = 0;      // position in the spectrum (0-based)
    double lambda = 0.0;
    double ratio = 0.0; // |sin(-dlambda*s*dtau + phi)| / gamma
};

// Excited states whose constant-schedule step factor fails to damp relative
// to the ground state: |f(dlambda)| >= gamma (checked with a 1e-12 margin so
// exact boundary cases are flagged).  The ground state itself always sits at
// ratio 1 and is not listed.
std::vector<ValidityViolation> validity_condition(const Spectrum& spec, double dtau,
                                                  const GammaParams& gp);

// Constant-schedule error bound at dtau = 1/(2*dlambda_max):
// ((1-w1_sq)/w1_sq) * max(1/2, |sin(-dlambda_min*s/(2*dlambda_max)+phi)/gamma|)^(2K).
double error_upper_bound_constant(double w1_sq, const GammaParams& gp, double dlambda_min,
                                  double dlambda_max, int K);

// d_pite * K / ((1 + eps_tilde) * w1_sq) with K = required_steps(limit).
double cost_estimate(double d_pite, double w1_sq, double eps_tilde);

struct MeanPair {
    double geometric = 0.0;
    double arithmetic = 0.0;
};

// Log-safe geometric and arithmetic means of damping samples in [0, 1].
MeanPair geometric_arithmetic_gap(const std::vector<double>& values);

// Positions on the dimensionless s*dtau_max axis where a single excitation
// energy's linear-schedule damping is stationary: the ascending solutions of
// tan(y) = y mapped through y / (2*dlambda), up to axis_limit.
std::vector<double> damping_minimum_centers(double dlambda, double axis_limit);

} // namespace pite
