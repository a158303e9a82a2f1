#include "pite/schedules.hpp"

#include <cmath>
#include <stdexcept>

namespace pite {

double Schedule::cumulative_tau() const {
    switch (kind) {
    case ScheduleKind::constant:
        return static_cast<double>(K) * dtau_max;
    case ScheduleKind::linear:
        return static_cast<double>(K) * (dtau_max + dtau_min) / 2.0;
    case ScheduleKind::exponential: {
        if (K == 1) return dtau_min;
        // sum = K*max - (max-min) * (1 - e^{-1/kbar}) / (1 - e^{-1/(kbar*K)});
        // expm1 keeps the ratio stable when kappa_bar*K is large.
        const double ratio = std::expm1(-1.0 / kappa_bar) / std::expm1(-1.0 / (kappa_bar * K));
        return static_cast<double>(K) * dtau_max - (dtau_max - dtau_min) * ratio;
    }
    }
    return 0.0;
}

Schedule constant_schedule(double dtau, int K) {
    if (dtau < 0.0) throw std::invalid_argument("constant_schedule: dtau must be >= 0");
    if (K < 1) throw std::invalid_argument("constant_schedule: K must be >= 1");
    Schedule s;
    s.kind = ScheduleKind::constant;
    s.dtau_min = dtau;
    s.dtau_max = dtau;
    s.K = K;
    s.steps.assign(static_cast<std::size_t>(K), dtau);
    return s;
}

Schedule linear_schedule(double dtau_min, double dtau_max, int K) {
    if (dtau_min < 0.0 || dtau_max < dtau_min)
        throw std::invalid_argument("linear_schedule: need 0 <= dtau_min <= dtau_max");
    if (K < 2) throw std::invalid_argument("linear_schedule: K must be >= 2");
    Schedule s;
    s.kind = ScheduleKind::linear;
    s.dtau_min = dtau_min;
    s.dtau_max = dtau_max;
    s.K = K;
    s.steps.resize(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k)
        s.steps[static_cast<std::size_t>(k - 1)] =
            (static_cast<double>(k - 1) / (K - 1)) * (dtau_max - dtau_min) + dtau_min;
    return s;
}

Schedule exponential_schedule(double dtau_min, double dtau_max, int K, double kappa_bar) {
    if (dtau_min < 0.0 || dtau_max < dtau_min)
        throw std::invalid_argument("exponential_schedule: need 0 <= dtau_min <= dtau_max");
    if (K < 1) throw std::invalid_argument("exponential_schedule: K must be >= 1");
    if (!(kappa_bar > 0.0)) throw std::invalid_argument("exponential_schedule: kappa_bar must be > 0");
    Schedule s;
    s.kind = ScheduleKind::exponential;
    s.dtau_min = dtau_min;
    s.dtau_max = dtau_max;
    s.K = K;
    s.kappa_bar = kappa_bar;
    const double kappa = kappa_bar * K;
    s.steps.resize(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k)
        s.steps[static_cast<std::size_t>(k - 1)] =
            -std::expm1(-(k - 1.0) / kappa) * (dtau_max - dtau_min) + dtau_min;
    return s;
}

} // namespace pite
