#pragma once

#include "pite/hamiltonians.hpp"
#include "pite/schedules.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace pite {

// Probability weights |c_i|^2 over eigenstates, aligned with Spectrum order.
struct InitialWeights {
    std::vector<double> weights;
};

InitialWeights uniform_weights(std::size_t n);

// Throws std::invalid_argument unless all weights are >= -1e-12 and sum to 1
// within 1e-12 (and, when expected_size > 0, the count matches it).
void validate_weights(const InitialWeights& w, std::size_t expected_size = 0);

// gamma in (0,1) away from 1/sqrt(2), plus its derived constants.
struct GammaParams {
    double gamma = 0.0;
    double theta = 0.0; // sign_kappa * acos((gamma + sqrt(1-gamma^2)) / sqrt(2))
    double s = 0.0;     // gamma / sqrt(1 - gamma^2) = tan(phi)
    double phi = 0.0;   // asin(gamma), so sin(phi) = gamma
    int sign_kappa = 0; // sign of gamma - 1/sqrt(2)
};

// Derives theta, s, phi, sign_kappa.  Throws std::invalid_argument when gamma
// is outside (0,1) or within 1e-9 of 1/sqrt(2), the excluded singular point
// of the construction.
GammaParams gamma_params(double gamma);

// Per-step energy shift E_k = lambda1 - alpha*(phi - (pi/2)(2n+1))/(dtau_k*s).
// alpha=0 shifts to lambda1 only; alpha=1 centres the step factor's peak on
// the ground state.  lambda1 is normally the diagonalized ground energy, but
// a user-supplied estimate is accepted to model imperfect knowledge of it.
struct ShiftPolicy {
    double alpha = 1.0;
    int branch_n = 0;
    double lambda1 = 0.0;
};

struct ExactIteResult {
    std::vector<double> weights; // w_i * exp(-2*lambda_i*tau), renormalized
    double fidelity = 0.0;       // evolved ground-state weight
};

// Ideal nonunitary evolution for time tau applied to the weight distribution.
// fidelity = 1 / (1 + sum_{i>=2} (w_i/w_1) exp(-2*dlambda_i*tau)).
ExactIteResult exact_ite(const Spectrum& spec, const InitialWeights& w, double tau);

// Time needed for exact evolution of a two-level start to reach fidelity
// 1 - delta: tau = ln(((1-delta)/delta) * (w2_sq/w1_sq)) / (2*dlambda2).
double required_tau(double delta, double w1_sq, double w2_sq, double dlambda2);

// E_k per the ShiftPolicy formula above.  dtau_k must be positive.
double energy_shift(const ShiftPolicy& policy, const GammaParams& gp, double dtau_k);

// f = sin(-(lambda_i - E_k)*s*dtau_k + phi).  Under the full (alpha=1, n=0)
// shift this equals cos((lambda_i - lambda_1)*s*dtau_k).
double step_factor(double lambda_i, double E_k, double dtau_k, const GammaParams& gp);

struct RunResult {
    std::vector<double> log_damping;  // ln prod_k f_k^2 per eigenvalue; -inf allowed
    std::vector<double> damping;      // exp(log_damping); may underflow to 0
    std::vector<int> damping_sign;    // sign of prod_k f_k per eigenvalue (0 if a factor vanished)
    std::vector<double> step_success; // p_1..p_K (empty when not requested)
    double error_tilde = 0.0;         // (1/w_1) sum_{i>=2} w_i damping_i / damping_1
    double error = 0.0;               // 2(1 - 1/sqrt(1 + error_tilde))
    double error_state_norm = 0.0;    // direct distance to the ideal evolved state
    double total_success = 0.0;       // P_K
    double fidelity = 0.0;            // w_1 damping_1 / P_K
    double cumulative_tau = 0.0;      // closed-form sum of the schedule
};

// Damping products per eigenvalue are accumulated in log space by default;
// linear space exists for cross-checking and throws numeric_error once every
// weight has been damped below 1e-300.
enum class AccumulationMode { log_space, linear_space };

// Evolve the weight distribution through the whole schedule.  Pure function;
// deterministic for fixed inputs.  with_step_success=false skips the p_k
// sequence (the expensive part of sweep workloads).
RunResult run_pite(const Spectrum& spec, const InitialWeights& w, const Schedule& sched,
                   const GammaParams& gp, const ShiftPolicy& policy,
                   AccumulationMode mode = AccumulationMode::log_space,
                   bool with_step_success = true);

struct MonotonicityReport {
    bool applicable = false;  // only constant schedules carry the guarantee
    bool monotone = false;
    int first_violation = 0;  // 1-based step k with p_k < p_{k-1} - 1e-12; 0 if none
    double magnitude = 0.0;   // p_{k-1} - p_k at the violation
};

// Check that per-step success probabilities never decrease.  Results from
// non-constant schedules are reported not-applicable, not failed.
MonotonicityReport success_monotonicity_check(const RunResult& result, const Schedule& sched);

// P_K as a function of the shift interpolation alpha (branch n = 0, lambda1
// taken from the spectrum).  Every alpha must lie in [0, 1].
std::vector<std::pair<double, double>> alpha_sweep(const Spectrum& spec, const InitialWeights& w,
                                                   const Schedule& sched, const GammaParams& gp,
                                                   const std::vector<double>& alphas);

} // namespace pite
