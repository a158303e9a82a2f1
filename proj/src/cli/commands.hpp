#pragma once

#include "config.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pite::cli {

// Flags shared by every subcommand.  --output and --seed override the config
// file's values; an empty output path sends the primary artifact to stdout.
struct CommonOptions {
    std::string config_path;
    std::string output_path;
    std::optional<std::uint64_t> seed;
    int threads = 0; // 0: PITE_LAB_THREADS, then hardware concurrency
};

int resolve_threads(int requested);

int cmd_spectrum(const CommonOptions& opt, const std::string& dos_path, double bin_width);
int cmd_run(const CommonOptions& opt, bool include_damping);
int cmd_sweep(const CommonOptions& opt, const std::string& format, const std::string& window_text);
int cmd_bounds(const CommonOptions& opt);
int cmd_circuit_check(const CommonOptions& opt);
int cmd_sample(const CommonOptions& opt, long long shots);
int cmd_cost(const CommonOptions& opt, std::optional<double> w1_sq, double eps_tilde,
             double d_pite);

} // namespace pite::cli
