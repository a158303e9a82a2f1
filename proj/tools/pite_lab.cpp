#include "../src/cli/commands.hpp"

#include "pite/errors.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct SubOpts {
    pite::cli::CommonOptions common;
    std::uint64_t seed_buf = 0;
    CLI::App* sub = nullptr;
};

void add_common(CLI::App* sub, SubOpts& o, bool config_required) {
    o.sub = sub;
    auto* cfg = sub->add_option("--config", o.common.config_path, "JSON config file");
    if (config_required) cfg->required();
    sub->add_option("--output", o.common.output_path,
                    "output path; overrides the config's, empty means stdout");
    sub->add_option("--seed", o.seed_buf, "RNG seed; overrides the config's");
    sub->add_option("--threads", o.common.threads,
                    "worker threads; default PITE_LAB_THREADS, then hardware concurrency")
        ->check(CLI::PositiveNumber);
}

void finish_common(SubOpts& o) {
    if (o.sub->count("--seed")) o.common.seed = o.seed_buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for probabilistic imaginary-time evolution"};
    app.require_subcommand(1);

    SubOpts spectrum_o, run_o, sweep_o, bounds_o, circuit_o, sample_o, cost_o;

    CLI::App* spectrum = app.add_subcommand("spectrum", "diagonalize and emit eigenvalues + DOS");
    add_common(spectrum, spectrum_o, true);
    std::string dos_path;
    double bin_width = 1.0;
    spectrum->add_option("--dos", dos_path, "also write a density-of-states histogram CSV here");
    spectrum->add_option("--bin-width", bin_width, "DOS bin width")->check(CLI::PositiveNumber);

    CLI::App* run = app.add_subcommand("run", "single evolution; JSON result");
    add_common(run, run_o, true);
    bool include_damping = false;
    run->add_flag("--damping", include_damping, "include the per-eigenvalue damping array");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep; CSV/JSON rows");
    add_common(sweep, sweep_o, true);
    std::string format = "csv";
    std::string window_text;
    sweep->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--window", window_text,
                      "report mean/std of ln_error_tilde within +-window of each "
                      "damping-minimum center, e.g. 0.25pi");

    CLI::App* bounds = app.add_subcommand(
        "bounds", "closed-form damping bounds and means over the sweep grid");
    add_common(bounds, bounds_o, true);

    CLI::App* circuit = app.add_subcommand(
        "circuit-check", "verify the gate-built step against its closed form");
    add_common(circuit, circuit_o, true);

    CLI::App* sample = app.add_subcommand("sample", "stochastic postselection trajectories");
    add_common(sample, sample_o, true);
    long long shots = 1000;
    sample->add_option("--shots", shots, "number of trajectories")->check(CLI::PositiveNumber);

    CLI::App* cost = app.add_subcommand("cost", "step-count and repetition-cost estimates");
    add_common(cost, cost_o, false);
    double w1_sq_buf = 0.0;
    double eps_tilde = 1e-2;
    double d_pite = 1.0;
    CLI::Option* w1_opt = cost->add_option("--w1-sq", w1_sq_buf, "initial ground-state weight");
    cost->add_option("--eps-tilde", eps_tilde, "target squared-ratio error");
    cost->add_option("--d-pite", d_pite, "circuit depth per step");

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) {
            finish_common(spectrum_o);
            return pite::cli::cmd_spectrum(spectrum_o.common, dos_path, bin_width);
        }
        if (run->parsed()) {
            finish_common(run_o);
            return pite::cli::cmd_run(run_o.common, include_damping);
        }
        if (sweep->parsed()) {
            finish_common(sweep_o);
            return pite::cli::cmd_sweep(sweep_o.common, format, window_text);
        }
        if (bounds->parsed()) {
            finish_common(bounds_o);
            return pite::cli::cmd_bounds(bounds_o.common);
        }
        if (circuit->parsed()) {
            finish_common(circuit_o);
            return pite::cli::cmd_circuit_check(circuit_o.common);
        }
        if (sample->parsed()) {
            finish_common(sample_o);
            return pite::cli::cmd_sample(sample_o.common, shots);
        }
        if (cost->parsed()) {
            finish_common(cost_o);
            std::optional<double> w1_sq;
            if (w1_opt->count()) w1_sq = w1_sq_buf;
            return pite::cli::cmd_cost(cost_o.common, w1_sq, eps_tilde, d_pite);
        }
        std::cerr << "pite-lab: no subcommand\n";
        return 1;
    } catch (const pite::config_error& e) {
        std::cerr << "pite-lab: " << e.what() << "\n";
        return 2;
    } catch (const pite::io_error& e) {
        std::cerr << "pite-lab: " << e.what() << "\n";
        return 4;
    } catch (const pite::numeric_error& e) {
        std::cerr << "pite-lab: " << e.what() << "\n";
        return 3;
    } catch (const pite::internal_error& e) {
        std::cerr << "pite-lab: " << e.what() << "\n";
        return 3;
    } catch (const pite::resource_limit_error& e) {
        std::cerr << "pite-lab: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "pite-lab: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "pite-lab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "pite-lab: " << e.what() << "\n";
        return 1;
    }
}
