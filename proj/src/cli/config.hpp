#pragma once

#include "pite/schedules.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pite::cli {

struct HamiltonianConfig {
    enum class Kind { heisenberg, double_well, spectrum_file };
    Kind kind = Kind::heisenberg;
    // heisenberg
    int n = 0;
    double J = 1.0;
    double h = 0.0;
    // double_well
    int n_qubits = 0;
    double L = 0.0, d = 0.0, delta = 0.0, V0 = 0.0;
    // spectrum_file
    std::string path;
};

struct InitialStateConfig {
    enum class Kind { uniform, weights_file };
    Kind kind = Kind::uniform;
    bool explicit_block = false; // present in the config (vs defaulted)
    std::string path;
};

// Step sizes are configured as the dimensionless products s*dtau; the runner
// divides by s.  s_dtau_max accepts "auto" (schedule-specific optimum from
// the spectrum's excitation gap) and "<x>pi" strings; a constant schedule
// takes its step value from s_dtau_max.
struct ScheduleConfig {
    ScheduleKind kind = ScheduleKind::linear;
    double s_dtau_min = 0.0;
    double s_dtau_max = 0.0;
    bool s_dtau_max_auto = false;
    int K = 0;
    double kappa_bar = 0.0;
    bool has_kappa_bar = false;
};

struct SweepConfig {
    std::string param; // s_dtau_max | s_dtau_min | K | alpha | kappa_bar
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log_spacing = false;
};

struct RunConfig {
    HamiltonianConfig hamiltonian;
    InitialStateConfig initial_state;
    ScheduleConfig schedule;
    double gamma = 0.9;
    double alpha = 1.0;
    int branch_n = 0;
    std::optional<SweepConfig> sweep;
    std::uint64_t seed = 0;
    std::string output;
};

// Parse and validate a JSON config.  Unknown keys are hard errors, range
// violations name the offending field, and files referenced by the config
// must exist at parse time.  Throws config_error.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

// "0.25pi" -> 0.25*pi, "1.5" -> 1.5.  Throws config_error naming `where`.
double parse_pi_literal(const std::string& text, const std::string& where);

} // namespace pite::cli
