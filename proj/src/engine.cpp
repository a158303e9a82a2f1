#include "pite/engine.hpp"

#include "pite/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pite {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double logsumexp(const std::vector<double>& v) {
    double m = neg_inf;
    for (double x : v)
        if (x > m) m = x;
    if (m == neg_inf) return neg_inf;
    double acc = 0.0;
    for (double x : v)
        if (x != neg_inf) acc += std::exp(x - m);
    return m + std::log(acc);
}

} // namespace

InitialWeights uniform_weights(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_weights: need at least one state");
    InitialWeights w;
    w.weights.assign(n, 1.0 / static_cast<double>(n));
    return w;
}

void validate_weights(const InitialWeights& w, std::size_t expected_size) {
    if (w.weights.empty()) throw std::invalid_argument("weights: empty");
    if (expected_size > 0 && w.weights.size() != expected_size)
        throw std::invalid_argument("weights: got " + std::to_string(w.weights.size()) +
                                    " entries, expected " + std::to_string(expected_size));
    double sum = 0.0;
    for (double x : w.weights) {
        if (!(x >= -1e-12))
            throw std::invalid_argument("weights: negative entry " + std::to_string(x));
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("weights: sum is " + std::to_string(sum) + ", expected 1");
}

GammaParams gamma_params(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma_params: gamma must lie in (0, 1)");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (std::abs(gamma - inv_sqrt2) <= 1e-9)
        throw std::invalid_argument(
            "gamma_params: gamma too close to 1/sqrt(2), the excluded singular point");

    GammaParams gp;
    gp.gamma = gamma;
    gp.s = gamma / std::sqrt((1.0 - gamma) * (1.0 + gamma));
    gp.phi = std::asin(gamma);
    gp.sign_kappa = gamma > inv_sqrt2 ? 1 : -1;
    gp.theta = gp.sign_kappa *
               std::acos(std::min(1.0, (gamma + std::sqrt((1.0 - gamma) * (1.0 + gamma))) /
                                           std::sqrt(2.0)));
    return gp;
}

ExactIteResult exact_ite(const Spectrum& spec, const InitialWeights& w, double tau) {
    const std::size_t N = spec.size();
    if (N == 0) throw std::invalid_argument("exact_ite: empty spectrum");
    validate_weights(w, N);
    if (!(tau >= 0.0)) throw std::invalid_argument("exact_ite: tau must be >= 0");
    if (w.weights[0] <= 0.0 && std::isinf(tau))
        throw std::invalid_argument(
            "exact_ite: ground weight is zero; the infinite-time limit is degenerate");

    const double l1 = spec.eigenvalues[0];
    ExactIteResult res;
    res.weights.resize(N);
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double dl = spec.eigenvalues[i] - l1;
        const double u = w.weights[i] * (dl == 0.0 ? 1.0 : std::exp(-2.0 * dl * tau));
        res.weights[i] = u;
        sum += u;
    }
    if (sum <= 0.0)
        throw numeric_error("exact_ite: evolved weights underflowed to zero at tau = " +
                            std::to_string(tau));
    for (double& x : res.weights) x /= sum;
    res.fidelity = res.weights[0];
    return res;
}

double required_tau(double delta, double w1_sq, double w2_sq, double dlambda2) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("required_tau: delta must lie in (0, 1)");
    if (!(w1_sq > 0.0 && w2_sq > 0.0))
        throw std::invalid_argument("required_tau: weights must be positive");
    if (!(dlambda2 > 0.0))
        throw std::invalid_argument("required_tau: excitation gap must be positive");
    return std::log((1.0 - delta) / delta * (w2_sq / w1_sq)) / (2.0 * dlambda2);
}

double energy_shift(const ShiftPolicy& policy, const GammaParams& gp, double dtau_k) {
    if (!(dtau_k > 0.0)) throw std::invalid_argument("energy_shift: dtau_k must be positive");
    const double branch = gp.phi - (pi / 2.0) * (2.0 * policy.branch_n + 1.0);
    return policy.lambda1 - policy.alpha * branch / (dtau_k * gp.s);
}

double step_factor(double lambda_i, double E_k, double dtau_k, const GammaParams& gp) {
    return std::sin(-(lambda_i - E_k) * gp.s * dtau_k + gp.phi);
}

RunResult run_pite(const Spectrum& spec, const InitialWeights& w, const Schedule& sched,
                   const GammaParams& gp, const ShiftPolicy& policy, AccumulationMode mode,
                   bool with_step_success) {
    const std::size_t N = spec.size();
    if (N == 0) throw std::invalid_argument("run_pite: empty spectrum");
    validate_weights(w, N);
    if (sched.K < 1 || sched.steps.size() != static_cast<std::size_t>(sched.K))
        throw std::invalid_argument("run_pite: schedule has no steps or inconsistent K");

    RunResult res;
    res.cumulative_tau = sched.cumulative_tau();
    res.damping_sign.assign(N, 1);
    if (with_step_success) res.step_success.reserve(static_cast<std::size_t>(sched.K));

    std::vector<double> lnw(N);
    for (std::size_t i = 0; i < N; ++i)
        lnw[i] = w.weights[i] > 0.0 ? std::log(w.weights[i]) : neg_inf;

    // A zero-length step has a well-defined limit: the 1/dtau part of the
    // shift cancels inside the phase, leaving sin(phi - alpha*branch).
    const double branch = gp.phi - (pi / 2.0) * (2.0 * policy.branch_n + 1.0);
    const double f_zero_step = std::sin(gp.phi - policy.alpha * branch);

    std::vector<double> acc(N, 0.0); // log-space: ln prod f^2
    std::vector<double> lin(N, 1.0); // linear-space: prod f^2
    std::vector<double> term(N);     // scratch for per-step log P_k

    double lnP_prev = 0.0;
    double P_prev = 1.0;
    for (int k = 0; k < sched.K; ++k) {
        const double dtau = sched.steps[static_cast<std::size_t>(k)];
        const bool shifted = dtau > 0.0;
        const double E = shifted ? energy_shift(policy, gp, dtau) : 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double f =
                shifted ? step_factor(spec.eigenvalues[i], E, dtau, gp) : f_zero_step;
            if (f < 0.0)
                res.damping_sign[i] = -res.damping_sign[i];
            else if (f == 0.0)
                res.damping_sign[i] = 0;
            if (mode == AccumulationMode::log_space)
                acc[i] += 2.0 * std::log(std::abs(f)); // log(0) -> -inf, by design
            else
                lin[i] *= f * f;
        }
        if (mode == AccumulationMode::linear_space) {
            double worst = 0.0;
            for (std::size_t i = 0; i < N; ++i)
                worst = std::max(worst, w.weights[i] * lin[i]);
            if (worst < 1e-300)
                throw numeric_error(
                    "run_pite: every weight damped below 1e-300 at step " + std::to_string(k + 1) +
                    " in linear-space accumulation; use log-space accumulation (the default)");
        }
        if (with_step_success) {
            if (mode == AccumulationMode::log_space) {
                for (std::size_t i = 0; i < N; ++i) term[i] = lnw[i] + acc[i];
                const double lnP = logsumexp(term);
                res.step_success.push_back(lnP == neg_inf && lnP_prev == neg_inf
                                               ? 0.0
                                               : std::exp(lnP - lnP_prev));
                lnP_prev = lnP;
            } else {
                double P = 0.0;
                for (std::size_t i = 0; i < N; ++i) P += w.weights[i] * lin[i];
                res.step_success.push_back(P_prev > 0.0 ? P / P_prev : 0.0);
                P_prev = P;
            }
        }
    }

    if (mode == AccumulationMode::linear_space)
        for (std::size_t i = 0; i < N; ++i) acc[i] = std::log(lin[i]);

    res.log_damping = acc;
    res.damping.resize(N);
    for (std::size_t i = 0; i < N; ++i) res.damping[i] = std::exp(acc[i]);

    for (std::size_t i = 0; i < N; ++i) term[i] = lnw[i] + acc[i];
    const double lnP = logsumexp(term);
    res.total_success = std::exp(lnP);

    const double a1 = lnw[0] + acc[0];
    if (N == 1) {
        res.error_tilde = 0.0;
    } else {
        double m = neg_inf;
        for (std::size_t i = 1; i < N; ++i)
            if (term[i] > m) m = term[i];
        if (m == neg_inf) {
            res.error_tilde = 0.0; // nothing survives outside the ground state
        } else if (a1 == neg_inf) {
            res.error_tilde = std::numeric_limits<double>::infinity();
        } else {
            double sum = 0.0;
            for (std::size_t i = 1; i < N; ++i)
                if (term[i] != neg_inf) sum += std::exp(term[i] - m);
            res.error_tilde = std::exp(m + std::log(sum) - a1);
        }
    }
    res.error = 2.0 * (1.0 - 1.0 / std::sqrt(1.0 + res.error_tilde));
    res.fidelity = (a1 == neg_inf || lnP == neg_inf) ? 0.0 : std::exp(a1 - lnP);

    // Direct distance between the normalized evolved state and the ideal
    // target exp(-H*tau)|psi0> at the same cumulative time.  Signs of the
    // per-eigenvalue factor products matter here.
    {
        const double tau = res.cumulative_tau;
        const double l1 = spec.eigenvalues[0];
        double max_acc = neg_inf;
        for (std::size_t i = 0; i < N; ++i)
            if (w.weights[i] > 0.0 && acc[i] > max_acc) max_acc = acc[i];
        const double M = max_acc / 2.0;
        if (max_acc == neg_inf) {
            res.error_state_norm = 2.0; // evolved state vanished entirely
        } else {
            double num = 0.0, den_exact = 0.0, den_run = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                if (w.weights[i] <= 0.0) continue;
                const double dl = spec.eigenvalues[i] - l1;
                const double e1 = dl == 0.0 ? 1.0 : std::exp(-dl * tau);
                const double r = acc[i] == neg_inf
                                     ? 0.0
                                     : res.damping_sign[i] * std::exp(acc[i] / 2.0 - M);
                num += w.weights[i] * e1 * r;
                den_exact += w.weights[i] * e1 * e1;
                den_run += w.weights[i] * r * r;
            }
            res.error_state_norm =
                den_exact > 0.0 && den_run > 0.0
                    ? 2.0 * (1.0 - num / (std::sqrt(den_exact) * std::sqrt(den_run)))
                    : 2.0;
        }
    }

    return res;
}

MonotonicityReport success_monotonicity_check(const RunResult& result, const Schedule& sched) {
    MonotonicityReport rep;
    rep.applicable = sched.kind == ScheduleKind::constant;
    if (!rep.applicable) return rep;
    if (result.step_success.empty())
        throw std::invalid_argument(
            "success_monotonicity_check: result lacks per-step success probabilities");
    rep.monotone = true;
    for (std::size_t k = 1; k < result.step_success.size(); ++k) {
        if (result.step_success[k] < result.step_success[k - 1] - 1e-12) {
            rep.monotone = false;
            rep.first_violation = static_cast<int>(k + 1);
            rep.magnitude = result.step_success[k - 1] - result.step_success[k];
            break;
        }
    }
    return rep;
}

std::vector<std::pair<double, double>> alpha_sweep(const Spectrum& spec, const InitialWeights& w,
                                                   const Schedule& sched, const GammaParams& gp,
                                                   const std::vector<double>& alphas) {
    if (spec.size() == 0) throw std::invalid_argument("alpha_sweep: empty spectrum");
    for (double a : alphas)
        if (!(a >= 0.0 && a <= 1.0))
            throw std::invalid_argument("alpha_sweep: alpha " + std::to_string(a) +
                                        " outside [0, 1]");
    std::vector<std::pair<double, double>> out;
    out.reserve(alphas.size());
    for (double a : alphas) {
        ShiftPolicy policy{a, 0, spec.eigenvalues[0]};
        const RunResult r =
            run_pite(spec, w, sched, gp, policy, AccumulationMode::log_space, false);
        out.emplace_back(a, r.total_success);
    }
    return out;
}

} // namespace pite
