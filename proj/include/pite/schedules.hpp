#pragma once

#include <vector>

namespace pite {

enum class ScheduleKind { constant, linear, exponential };

// A finite sequence of imaginary-time step sizes dtau_1..dtau_K.  Steps are
// stored without the s factor; the dimensionless product s*dtau is formed by
// the engine.
struct Schedule {
    ScheduleKind kind = ScheduleKind::constant;
    std::vector<double> steps;
    double dtau_min = 0.0;
    double dtau_max = 0.0;
    int K = 0;
    double kappa_bar = 0.0; // exponential ramp speed, kappa/K; 0 otherwise

    // Closed-form total imaginary time (not a loop over steps).
    double cumulative_tau() const;
    double final_step() const { return steps.empty() ? 0.0 : steps.back(); }
};

// K identical steps.
Schedule constant_schedule(double dtau, int K);

// dtau_k = (k-1)/(K-1) * (dtau_max - dtau_min) + dtau_min, k = 1..K.
Schedule linear_schedule(double dtau_min, double dtau_max, int K);

// dtau_k = (1 - exp(-(k-1)/kappa)) * (dtau_max - dtau_min) + dtau_min with
// kappa = kappa_bar * K.  The final step stops short of dtau_max:
// dtau_K = dtau_max - exp((1/K - 1)/kappa_bar) * (dtau_max - dtau_min).
Schedule exponential_schedule(double dtau_min, double dtau_max, int K, double kappa_bar);

} // namespace pite
