#include "pite/analysis.hpp"

#include "pite/errors.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace pite {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double series_asymptotic_crossover = 4.0;

// Maclaurin sums, accurate and cancellation-free for x <= the crossover.
double si_series(double x) {
    double term = x, sum = x; // term = (-1)^m x^{2m+1}/(2m+1)!
    for (int m = 1; m < 80; ++m) {
        term *= -x * x / ((2.0 * m) * (2.0 * m + 1.0));
        const double add = term / (2.0 * m + 1.0);
        sum += add;
        // <= so underflowed-to-zero terms (tiny x) count as converged
        if (std::abs(add) <= 1e-18 * std::abs(sum)) return sum;
    }
    throw numeric_error("si: series did not converge at x = " + std::to_string(x));
}

double cin_series(double x) {
    double term = x * x / 2.0, sum = term / 2.0; // term = (-1)^{m+1} x^{2m}/(2m)!
    for (int m = 2; m < 80; ++m) {
        term *= -x * x / ((2.0 * m - 1.0) * (2.0 * m));
        const double add = term / (2.0 * m);
        sum += add;
        if (std::abs(add) <= 1e-18 * std::abs(sum)) return sum;
    }
    throw numeric_error("cin: series did not converge at x = " + std::to_string(x));
}

// Lentz-style continued fraction for E1(ix); Ci(x) = -Re, Si(x) = pi/2 + Im.
std::complex<double> e1_of_ix(double x) {
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;
    std::complex<double> b(1.0, x);
    std::complex<double> c(1.0 / tiny, 0.0);
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 2; i <= 400; ++i) {
        const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const std::complex<double> del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) <= eps)
            return h * std::complex<double>(std::cos(x), -std::sin(x));
    }
    throw numeric_error("si/ci: continued fraction did not converge at x = " +
                        std::to_string(x));
}

} // namespace

double si(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("si: requires x >= 0");
    if (x == 0.0) return 0.0;
    if (x <= series_asymptotic_crossover) return si_series(x);
    return pi / 2.0 + e1_of_ix(x).imag();
}

double ci(double x) {
    if (!(x > 0.0)) throw std::domain_error("ci: logarithmic singularity at x <= 0");
    if (x <= series_asymptotic_crossover) return euler_gamma + std::log(x) - cin_series(x);
    return -e1_of_ix(x).real();
}

double cin(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("cin: requires x >= 0");
    if (x == 0.0) return 0.0;
    if (x <= series_asymptotic_crossover) return cin_series(x);
    return euler_gamma + std::log(x) - ci(x);
}

LinearBoundParams linear_bound_params(double dlambda, double s, double dtau_min,
                                      double dtau_max, int K) {
    if (!(dlambda >= 0.0)) throw std::invalid_argument("linear_bound_params: dlambda < 0");
    if (!(s > 0.0)) throw std::invalid_argument("linear_bound_params: s must be positive");
    if (!(dtau_min >= 0.0 && dtau_max >= dtau_min))
        throw std::invalid_argument("linear_bound_params: need 0 <= dtau_min <= dtau_max");
    if (K < 2) throw std::invalid_argument("linear_bound_params: need K >= 2");
    const double inc = (dtau_max - dtau_min) / (K - 1);
    LinearBoundParams p;
    p.a = dlambda * s * (dtau_min - inc);
    p.b = dlambda * s * inc;
    p.K = K;
    return p;
}

LogDampingBounds log_damping_bounds(const LinearBoundParams& p) {
    if (!(p.b >= 0.0)) throw std::invalid_argument("log_damping_bounds: b must be >= 0");
    if (p.K < 1) throw std::invalid_argument("log_damping_bounds: need K >= 1");
    LogDampingBounds out;
    out.integral_caveat = p.b > pi / 4.0;
    if (p.b == 0.0) {
        out.degenerate = true;
        const double c = std::cos(p.a);
        out.lower = out.upper = p.K * std::log(c * c);
        return out;
    }
    const double half_period_area = -(pi / 2.0) * std::log(2.0) * 2.0; // int of ln cos^2
    const double lo_edge = p.a / (pi / 2.0);
    const double hi_edge = (p.a + p.b * p.K) / (pi / 2.0);
    out.lower = half_period_area / p.b * (std::ceil(hi_edge) - std::floor(lo_edge));
    out.upper = half_period_area / p.b * (std::floor(hi_edge) - std::ceil(lo_edge));
    return out;
}

double arithmetic_mean_linear(const LinearBoundParams& p) {
    if (p.K < 1) throw std::invalid_argument("arithmetic_mean_linear: need K >= 1");
    const double x = p.b * p.K;
    const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
    return 0.5 + 0.5 * std::cos(2.0 * p.a + x) * sinc;
}

ExpMeanParams exp_mean_params(double dlambda, double s, double dtau_min, double dtau_max,
                              int K, double kappa_bar) {
    if (!(dlambda >= 0.0)) throw std::invalid_argument("exp_mean_params: dlambda < 0");
    if (!(s > 0.0)) throw std::invalid_argument("exp_mean_params: s must be positive");
    if (!(dtau_min >= 0.0 && dtau_max >= dtau_min))
        throw std::invalid_argument("exp_mean_params: need 0 <= dtau_min <= dtau_max");
    if (K < 1) throw std::invalid_argument("exp_mean_params: need K >= 1");
    if (!(kappa_bar > 0.0)) throw std::invalid_argument("exp_mean_params: kappa_bar <= 0");
    ExpMeanParams p;
    p.alpha = s * dlambda * dtau_max;
    p.beta = s * dlambda * (dtau_max - dtau_min);
    p.kappa_bar = kappa_bar;
    p.kappa = kappa_bar * K;
    return p;
}

ExpMeanResult arithmetic_mean_exponential(const ExpMeanParams& p) {
    if (!(p.beta >= 0.0))
        throw std::invalid_argument("arithmetic_mean_exponential: beta must be >= 0");
    if (!(p.kappa_bar > 0.0 && p.kappa > 0.0))
        throw std::invalid_argument("arithmetic_mean_exponential: kappa parameters must be positive");
    ExpMeanResult out;
    if (p.beta == 0.0) { // zero-range schedule: every step sits at dtau_max
        const double c = std::cos(p.alpha);
        out.mean = c * c;
        out.amplitude = 1.0;
        out.phase = 0.0;
        return out;
    }
    if (1.0 / p.kappa > 700.0)
        throw std::invalid_argument(
            "arithmetic_mean_exponential: kappa too small; e^{1/kappa} overflows");
    const double x_hi = 2.0 * p.beta * std::exp(1.0 / p.kappa);
    const double x_lo = 2.0 * p.beta * std::exp(1.0 / p.kappa - 1.0 / p.kappa_bar);
    const double delta_s = p.kappa_bar * (si(x_hi) - si(x_lo));
    const double delta_c = 1.0 - p.kappa_bar * (cin(x_hi) - cin(x_lo));
    out.mean = 0.5 + 0.5 * (delta_c * std::cos(2.0 * p.alpha) + delta_s * std::sin(2.0 * p.alpha));
    out.amplitude = std::hypot(delta_s, delta_c);
    out.phase = out.amplitude > 0.0
                    ? std::acos(std::min(1.0, std::max(-1.0, delta_c / out.amplitude)))
                    : 0.0;
    return out;
}

double required_steps_raw(double w1_sq, double eps_tilde, StepsVariant variant) {
    if (!(w1_sq > 0.0)) throw std::invalid_argument("required_steps: w1_sq must be positive");
    if (w1_sq >= 1.0) return 0.0; // already a pure target state
    if (!(eps_tilde > 0.0))
        throw std::invalid_argument("required_steps: eps_tilde must be positive");
    const double c =
        (variant == StepsVariant::limit ? 1.0 : 3.0) / (2.0 * std::log(2.0));
    return c * std::log((1.0 - w1_sq) / (eps_tilde * w1_sq));
}

long required_steps(double w1_sq, double eps_tilde, StepsVariant variant) {
    const double raw = required_steps_raw(w1_sq, eps_tilde, variant);
    return raw <= 0.0 ? 0L : static_cast<long>(std::ceil(raw));
}

double required_tau_schedule(double dlambda, double s, double w1_sq, double eps_tilde,
                             TauVariant variant) {
    if (!(dlambda > 0.0))
        throw std::invalid_argument("required_tau_schedule: excitation energy must be positive");
    if (!(w1_sq > 0.0 && w1_sq < 1.0))
        throw std::invalid_argument("required_tau_schedule: w1_sq must lie in (0, 1)");
    if (!(eps_tilde > 0.0))
        throw std::invalid_argument("required_tau_schedule: eps_tilde must be positive");
    double denom = 4.0 * dlambda * std::log(2.0);
    if (variant == TauVariant::linear_exp) {
        if (!(s > 0.0)) throw std::invalid_argument("required_tau_schedule: s must be positive");
        denom *= s;
    }
    const double tau = std::log((1.0 - w1_sq) / (eps_tilde * w1_sq)) / denom;
    return tau > 0.0 ? tau : 0.0;
}

double optimal_dtau_max(double dlambda_min, double s, ScheduleKind kind, int K,
                        double kappa_bar) {
    if (!(dlambda_min > 0.0))
        throw std::invalid_argument("optimal_dtau_max: dlambda_min must be positive");
    if (!(s > 0.0)) throw std::invalid_argument("optimal_dtau_max: s must be positive");
    switch (kind) {
    case ScheduleKind::linear:
        return 0.62 * pi / (s * dlambda_min);
    case ScheduleKind::exponential: {
        if (K < 2 || !(kappa_bar > 0.0))
            throw std::invalid_argument(
                "optimal_dtau_max: exponential variant needs K >= 2 and kappa_bar > 0");
        const double final_fraction = -std::expm1((1.0 / K - 1.0) / kappa_bar);
        return 0.5 * pi / (s * dlambda_min) / final_fraction;
    }
    default:
        throw std::invalid_argument("optimal_dtau_max: no optimum defined for a constant schedule");
    }
}

std::vector<ValidityViolation> validity_condition(const Spectrum& spec, double dtau,
                                                  const GammaParams& gp) {
    if (spec.size() == 0) throw std::invalid_argument("validity_condition: empty spectrum");
    if (!(dtau >= 0.0)) throw std::invalid_argument("validity_condition: dtau must be >= 0");
    std::vector<ValidityViolation> out;
    const double l1 = spec.eigenvalues[0];
    for (std::size_t i = 1; i < spec.size(); ++i) {
        const double dl = spec.eigenvalues[i] - l1;
        const double ratio = std::abs(std::sin(-dl * gp.s * dtau + gp.phi)) / gp.gamma;
        if (ratio >= 1.0 - 1e-12)
            out.push_back({static_cast<int>(i), spec.eigenvalues[i], ratio});
    }
    return out;
}

double error_upper_bound_constant(double w1_sq, const GammaParams& gp, double dlambda_min,
                                  double dlambda_max, int K) {
    if (!(w1_sq > 0.0 && w1_sq < 1.0))
        throw std::invalid_argument("error_upper_bound_constant: w1_sq must lie in (0, 1)");
    if (!(dlambda_max > 0.0))
        throw std::invalid_argument("error_upper_bound_constant: dlambda_max must be positive");
    if (!(dlambda_min >= 0.0 && dlambda_min <= dlambda_max))
        throw std::invalid_argument(
            "error_upper_bound_constant: need 0 <= dlambda_min <= dlambda_max");
    if (K < 0) throw std::invalid_argument("error_upper_bound_constant: K must be >= 0");
    const double f_min =
        std::sin(-dlambda_min * gp.s / (2.0 * dlambda_max) + gp.phi) / gp.gamma;
    const double base = std::max(0.5, std::abs(f_min));
    return (1.0 - w1_sq) / w1_sq * std::pow(base, 2.0 * K);
}

double cost_estimate(double d_pite, double w1_sq, double eps_tilde) {
    if (!(d_pite > 0.0)) throw std::invalid_argument("cost_estimate: d_pite must be positive");
    if (!(w1_sq > 0.0 && w1_sq <= 1.0))
        throw std::invalid_argument("cost_estimate: w1_sq must lie in (0, 1]");
    if (!(eps_tilde > 0.0)) throw std::invalid_argument("cost_estimate: eps_tilde must be positive");
    const long K = required_steps(w1_sq, eps_tilde, StepsVariant::limit);
    return d_pite * static_cast<double>(K) / ((1.0 + eps_tilde) * w1_sq);
}

std::vector<double> damping_minimum_centers(double dlambda, double axis_limit) {
    if (!(dlambda > 0.0))
        throw std::invalid_argument("damping_minimum_centers: dlambda must be positive");
    if (!(axis_limit > 0.0))
        throw std::invalid_argument("damping_minimum_centers: axis_limit must be positive");
    std::vector<double> out;
    // The j-th root of tan(y) = y lies in (j*pi, j*pi + pi/2), where
    // h(y) = sin(y) - y*cos(y) changes sign.
    auto h = [](double y) { return std::sin(y) - y * std::cos(y); };
    for (int j = 1;; ++j) {
        double lo = j * pi, hi = j * pi + pi / 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((h(mid) > 0.0) == (h(lo) > 0.0))
                lo = mid;
            else
                hi = mid;
        }
        const double center = 0.5 * (lo + hi) / (2.0 * dlambda);
        if (center > axis_limit) break;
        out.push_back(center);
    }
    return out;
}

MeanPair geometric_arithmetic_gap(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("geometric_arithmetic_gap: empty input");
    double log_sum = 0.0, sum = 0.0;
    bool has_zero = false;
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("geometric_arithmetic_gap: value " + std::to_string(v) +
                                        " outside [0, 1]");
        sum += v;
        if (v == 0.0)
            has_zero = true;
        else
            log_sum += std::log(v);
    }
    MeanPair out;
    const double n = static_cast<double>(values.size());
    out.arithmetic = sum / n;
    out.geometric = has_zero ? 0.0 : std::exp(log_sum / n);
    return out;
}

} // namespace pite
