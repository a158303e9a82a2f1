#include "commands.hpp"

#include "pite/analysis.hpp"
#include "pite/circuit.hpp"
#include "pite/engine.hpp"
#include "pite/errors.hpp"
#include "pite/hamiltonians.hpp"
#include "pite/io.hpp"
#include "pite/schedules.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace pite::cli {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------- assembly

Eigen::MatrixXd build_matrix(const HamiltonianConfig& hc) {
    switch (hc.kind) {
    case HamiltonianConfig::Kind::heisenberg:
        return build_heisenberg_chain(hc.n, hc.J, hc.h);
    case HamiltonianConfig::Kind::double_well:
        return build_double_well(hc.n_qubits, hc.L, hc.d, hc.delta, hc.V0);
    default:
        throw config_error("a spectrum-file Hamiltonian has no matrix representation");
    }
}

Schedule make_schedule(ScheduleKind kind, double s_dtau_min, double s_dtau_max, int K,
                       double kappa_bar, double s) {
    switch (kind) {
    case ScheduleKind::constant:
        return constant_schedule(s_dtau_max / s, K);
    case ScheduleKind::linear:
        return linear_schedule(s_dtau_min / s, s_dtau_max / s, K);
    default:
        return exponential_schedule(s_dtau_min / s, s_dtau_max / s, K, kappa_bar);
    }
}

// A fully resolved experiment: spectrum, weights, schedule (s-free steps),
// shift policy anchored at the true ground energy.
struct Problem {
    Spectrum spectrum;
    InitialWeights weights;
    GammaParams gp;
    ShiftPolicy policy;
    Schedule schedule;
    ScheduleKind kind = ScheduleKind::linear;
    int K = 0;
    double s_dtau_min = 0.0;
    double s_dtau_max = 0.0;
    double kappa_bar = 0.0;
    bool has_kappa_bar = false;
};

Problem assemble(const RunConfig& cfg) {
    Problem pb;
    pb.gp = gamma_params(cfg.gamma);

    std::optional<InitialWeights> file_weights;
    if (cfg.hamiltonian.kind == HamiltonianConfig::Kind::spectrum_file) {
        SpectrumFile sf = read_spectrum_file(cfg.hamiltonian.path);
        pb.spectrum = std::move(sf.spectrum);
        file_weights = std::move(sf.weights);
    } else {
        pb.spectrum = diagonalize(build_matrix(cfg.hamiltonian), /*with_vectors=*/false);
    }
    const std::size_t N = pb.spectrum.size();

    if (cfg.initial_state.kind == InitialStateConfig::Kind::weights_file)
        pb.weights = read_weights_file(cfg.initial_state.path, N);
    else if (!cfg.initial_state.explicit_block && file_weights)
        pb.weights = std::move(*file_weights);
    else
        pb.weights = uniform_weights(N);
    validate_weights(pb.weights, N);

    pb.kind = cfg.schedule.kind;
    pb.K = cfg.schedule.K;
    pb.s_dtau_min = cfg.schedule.s_dtau_min;
    pb.kappa_bar = cfg.schedule.kappa_bar;
    pb.has_kappa_bar = cfg.schedule.has_kappa_bar;
    if (cfg.schedule.s_dtau_max_auto)
        pb.s_dtau_max =
            pb.gp.s * optimal_dtau_max(pb.spectrum.gap(), pb.gp.s, pb.kind, pb.K, pb.kappa_bar);
    else
        pb.s_dtau_max = cfg.schedule.s_dtau_max;
    if (pb.kind == ScheduleKind::constant) pb.s_dtau_min = pb.s_dtau_max;
    pb.schedule = make_schedule(pb.kind, pb.s_dtau_min, pb.s_dtau_max, pb.K, pb.kappa_bar, pb.gp.s);

    pb.policy.alpha = cfg.alpha;
    pb.policy.branch_n = cfg.branch_n;
    pb.policy.lambda1 = pb.spectrum.eigenvalues.front();
    return pb;
}

// ---------------------------------------------------------------- emission

void emit_text(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        write_text_file(path, text);
}

std::string output_path_of(const CommonOptions& opt, const RunConfig& cfg) {
    return opt.output_path.empty() ? cfg.output : opt.output_path;
}

// JSON scalar: finite doubles as bare 17-digit numbers, non-finite as the
// quoted sentinels "inf" / "-inf" / "nan".
std::string json_number(double x) {
    if (std::isfinite(x)) return format_double(x);
    return "\"" + format_double(x) + "\"";
}

std::string json_array(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += json_number(xs[i]);
    }
    return out + "]";
}

// ---------------------------------------------------------------- sweep

// ln eps_tilde straight from the log-space damping products, immune to the
// exp/log round trip underflowing for strongly damped runs.
double ln_error_tilde_of(const RunResult& res, const std::vector<double>& w) {
    const double den = w[0] > 0.0 ? std::log(w[0]) + res.log_damping[0] : neg_inf;
    double m = neg_inf;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] > 0.0) m = std::max(m, std::log(w[i]) + res.log_damping[i]);
    double num = neg_inf;
    if (m > neg_inf) {
        double sum = 0.0;
        for (std::size_t i = 1; i < w.size(); ++i)
            if (w[i] > 0.0) sum += std::exp(std::log(w[i]) + res.log_damping[i] - m);
        num = m + std::log(sum);
    }
    if (num == neg_inf) return den == neg_inf ? quiet_nan : neg_inf;
    if (den == neg_inf) return std::numeric_limits<double>::infinity();
    return num - den;
}

struct SweepRowData {
    double value = 0.0;
    int K = 0;
    double s_dtau_min = 0.0;
    double s_dtau_max = 0.0;
    bool has_kappa_bar = false;
    double kappa_bar = 0.0;
    double ln_error_tilde = quiet_nan;
    double error = quiet_nan;
    double total_success = quiet_nan;
    double fidelity = quiet_nan;
    double cumulative_tau = quiet_nan;
    bool failed = false;
};

// Grid rule: points right-edge divisions of [from, to], i.e. the k-th value
// is from + k*(to-from)/points (log spacing: from*(to/from)^(k/points)),
// k = 1..points.  `from` itself is not a grid point, `to` always is.
std::vector<double> sweep_grid(const SweepConfig& sw) {
    std::vector<double> grid(static_cast<std::size_t>(sw.points));
    for (int k = 1; k <= sw.points; ++k) {
        const double frac = static_cast<double>(k) / sw.points;
        grid[static_cast<std::size_t>(k - 1)] =
            sw.log_spacing ? sw.from * std::pow(sw.to / sw.from, frac)
                           : sw.from + (sw.to - sw.from) * frac;
    }
    return grid;
}

SweepRowData evaluate_point(const Problem& base, const std::string& param, double value) {
    SweepRowData r;
    r.value = value;
    double smin = base.s_dtau_min;
    double smax = base.s_dtau_max;
    double kb = base.kappa_bar;
    double alpha = base.policy.alpha;
    int K = base.K;
    if (param == "s_dtau_max") {
        smax = value;
        if (base.kind == ScheduleKind::constant) smin = value;
    } else if (param == "s_dtau_min") {
        smin = value;
        if (base.kind == ScheduleKind::constant) smax = value;
    } else if (param == "K") {
        K = static_cast<int>(std::llround(value));
        r.value = static_cast<double>(K);
    } else if (param == "alpha") {
        alpha = value;
    } else { // kappa_bar
        kb = value;
    }
    r.K = K;
    r.s_dtau_min = smin;
    r.s_dtau_max = smax;
    r.has_kappa_bar = base.kind == ScheduleKind::exponential;
    r.kappa_bar = kb;
    try {
        const Schedule sched = make_schedule(base.kind, smin, smax, K, kb, base.gp.s);
        ShiftPolicy pol = base.policy;
        pol.alpha = alpha;
        const RunResult res = run_pite(base.spectrum, base.weights, sched, base.gp, pol,
                                       AccumulationMode::log_space, /*with_step_success=*/false);
        r.ln_error_tilde = ln_error_tilde_of(res, base.weights.weights);
        r.error = res.error;
        r.total_success = res.total_success;
        r.fidelity = res.fidelity;
        r.cumulative_tau = res.cumulative_tau;
    } catch (const std::exception&) {
        r.failed = true; // row keeps its nan result columns, sweep continues
    }
    return r;
}

std::vector<SweepRowData> run_sweep(const Problem& base, const SweepConfig& sw, int threads) {
    const std::vector<double> grid = sweep_grid(sw);
    std::vector<SweepRowData> rows(grid.size());
    const int T = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
    if (T == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            rows[i] = evaluate_point(base, sw.param, grid[i]);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t)
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1))
                rows[i] = evaluate_point(base, sw.param, grid[i]);
        });
    for (auto& th : workers) th.join();
    return rows;
}

std::string sweep_csv(const std::vector<SweepRowData>& rows, const std::string& param) {
    if (rows.empty()) throw std::invalid_argument("sweep emission: no rows");
    std::string out = "param,value,K,s_dtau_min,s_dtau_max,kappa_bar,ln_error_tilde,error,"
                      "total_success_prob,fidelity,cumulative_tau\n";
    for (const SweepRowData& r : rows) {
        out += param + "," + format_double(r.value) + "," + std::to_string(r.K) + "," +
               format_double(r.s_dtau_min) + "," + format_double(r.s_dtau_max) + "," +
               (r.has_kappa_bar ? format_double(r.kappa_bar) : "") + "," +
               format_double(r.ln_error_tilde) + "," + format_double(r.error) + "," +
               format_double(r.total_success) + "," + format_double(r.fidelity) + "," +
               format_double(r.cumulative_tau) + "\n";
    }
    return out;
}

std::string sweep_json(const std::vector<SweepRowData>& rows, const std::string& param) {
    if (rows.empty()) throw std::invalid_argument("sweep emission: no rows");
    std::string out = "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRowData& r = rows[i];
        out += "  {\"param\": \"" + param + "\", \"value\": " + json_number(r.value) +
               ", \"K\": " + std::to_string(r.K) +
               ", \"s_dtau_min\": " + json_number(r.s_dtau_min) +
               ", \"s_dtau_max\": " + json_number(r.s_dtau_max);
        if (r.has_kappa_bar) out += ", \"kappa_bar\": " + json_number(r.kappa_bar);
        out += ", \"ln_error_tilde\": " + json_number(r.ln_error_tilde) +
               ", \"error\": " + json_number(r.error) +
               ", \"total_success_prob\": " + json_number(r.total_success) +
               ", \"fidelity\": " + json_number(r.fidelity) +
               ", \"cumulative_tau\": " + json_number(r.cumulative_tau) + "}";
        out += i + 1 < rows.size() ? ",\n" : "\n";
    }
    return out + "]\n";
}

// Mean/std (n-1 denominator) of ln eps_tilde over grid points within +-window
// of each damping-minimum center; emitted as a small CSV on stdout.
std::string window_stats(const std::vector<SweepRowData>& rows, const Problem& base,
                         double window) {
    double axis_max = 0.0;
    for (const SweepRowData& r : rows) axis_max = std::max(axis_max, r.value);
    const std::vector<double> centers = damping_minimum_centers(base.spectrum.gap(), axis_max);
    std::string out = "center,window,mean_ln_error_tilde,std_ln_error_tilde,points\n";
    for (const double c : centers) {
        std::vector<double> vals;
        for (const SweepRowData& r : rows)
            if (!r.failed && std::isfinite(r.ln_error_tilde) && std::abs(r.value - c) <= window)
                vals.push_back(r.ln_error_tilde);
        double mean = quiet_nan;
        double sd = quiet_nan;
        if (!vals.empty()) {
            double sum = 0.0;
            for (const double v : vals) sum += v;
            mean = sum / static_cast<double>(vals.size());
            if (vals.size() > 1) {
                double ss = 0.0;
                for (const double v : vals) ss += (v - mean) * (v - mean);
                sd = std::sqrt(ss / static_cast<double>(vals.size() - 1));
            }
        }
        out += format_double(c) + "," + format_double(window) + "," + format_double(mean) + "," +
               format_double(sd) + "," + std::to_string(vals.size()) + "\n";
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------- commands

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PITE_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw config_error("PITE_LAB_THREADS must be a positive integer, got '" +
                               std::string(env) + "'");
        return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

int cmd_spectrum(const CommonOptions& opt, const std::string& dos_path, double bin_width) {
    const RunConfig cfg = load_config_file(opt.config_path);
    const Problem pb = assemble(cfg);
    const std::string path = output_path_of(opt, cfg);
    emit_text(path, spectrum_file_text(pb.spectrum, pb.weights));
    if (!dos_path.empty()) {
        const DosHistogram dos = dos_histogram(pb.spectrum, bin_width);
        std::string text = "bin_left,bin_right,count,density\n";
        for (std::size_t i = 0; i < dos.counts.size(); ++i)
            text += format_double(dos.bin_edges[i]) + "," + format_double(dos.bin_edges[i + 1]) +
                    "," + std::to_string(dos.counts[i]) + "," + format_double(dos.density[i]) +
                    "\n";
        write_text_file(dos_path, text);
    }
    if (!path.empty()) {
        std::cout << "states = " << pb.spectrum.size() << "\n";
        std::cout << "lambda_min = " << format_double(pb.spectrum.eigenvalues.front()) << "\n";
        std::cout << "lambda_max = " << format_double(pb.spectrum.eigenvalues.back()) << "\n";
        if (pb.spectrum.size() > 1)
            std::cout << "gap = " << format_double(pb.spectrum.gap()) << "\n";
        std::cout << "spread = " << format_double(pb.spectrum.spread()) << "\n";
    }
    return 0;
}

int cmd_run(const CommonOptions& opt, bool include_damping) {
    const RunConfig cfg = load_config_file(opt.config_path);
    const Problem pb = assemble(cfg);
    const RunResult res = run_pite(pb.spectrum, pb.weights, pb.schedule, pb.gp, pb.policy,
                                   AccumulationMode::log_space, /*with_step_success=*/true);
    std::string out = "{\n";
    out += "  \"error_tilde\": " + json_number(res.error_tilde) + ",\n";
    out += "  \"error\": " + json_number(res.error) + ",\n";
    out += "  \"error_state_norm\": " + json_number(res.error_state_norm) + ",\n";
    out += "  \"total_success_prob\": " + json_number(res.total_success) + ",\n";
    out += "  \"fidelity\": " + json_number(res.fidelity) + ",\n";
    out += "  \"cumulative_tau\": " + json_number(res.cumulative_tau) + ",\n";
    out += "  \"step_success\": " + json_array(res.step_success);
    if (include_damping) out += ",\n  \"damping\": " + json_array(res.damping);
    out += "\n}\n";
    emit_text(output_path_of(opt, cfg), out);
    return 0;
}

int cmd_sweep(const CommonOptions& opt, const std::string& format,
              const std::string& window_text) {
    const RunConfig cfg = load_config_file(opt.config_path);
    if (!cfg.sweep) throw config_error("sweep: the config has no sweep block");
    if (format != "csv" && format != "json")
        throw config_error("sweep: --format must be csv or json, got '" + format + "'");
    double window = 0.0;
    if (!window_text.empty()) {
        if (cfg.sweep->param != "s_dtau_max" && cfg.sweep->param != "s_dtau_min")
            throw config_error("sweep: --window applies only to step-size sweeps");
        window = parse_pi_literal(window_text, "--window");
        if (!(window > 0.0)) throw config_error("sweep: --window must be positive");
    }
    const Problem pb = assemble(cfg);
    const std::vector<SweepRowData> rows = run_sweep(pb, *cfg.sweep, resolve_threads(opt.threads));
    const std::string text =
        format == "csv" ? sweep_csv(rows, cfg.sweep->param) : sweep_json(rows, cfg.sweep->param);
    emit_text(output_path_of(opt, cfg), text);
    if (!window_text.empty()) std::cout << window_stats(rows, pb, window);
    return 0;
}

int cmd_bounds(const CommonOptions& opt) {
    const RunConfig cfg = load_config_file(opt.config_path);
    if (!cfg.sweep || cfg.sweep->param != "s_dtau_max")
        throw config_error("bounds: the config needs a sweep block over s_dtau_max "
                           "(its grid becomes the dlambda_s_dtau_max axis)");
    const int K = cfg.schedule.K;
    if (K < 2) throw config_error("bounds: schedule.K must be >= 2");
    const double x_min = cfg.schedule.s_dtau_min;
    const double kappa_bar = cfg.schedule.has_kappa_bar ? cfg.schedule.kappa_bar : 1.0;

    std::string out = "dlambda_s_dtau_max, lower_bound, upper_bound, arith_mean_linear, "
                      "arith_mean_exp, amplitude, phase\n";
    long caveats = 0;
    const std::vector<double> grid = sweep_grid(*cfg.sweep);
    for (const double x : grid) {
        double lo = quiet_nan, hi = quiet_nan, ml = quiet_nan;
        double me = quiet_nan, amp = quiet_nan, ph = quiet_nan;
        try {
            const LinearBoundParams p = linear_bound_params(1.0, 1.0, x_min, x, K);
            const LogDampingBounds b = log_damping_bounds(p);
            lo = b.lower;
            hi = b.upper;
            ml = arithmetic_mean_linear(p);
            if (b.integral_caveat) ++caveats;
            const ExpMeanResult em =
                arithmetic_mean_exponential(exp_mean_params(1.0, 1.0, x_min, x, K, kappa_bar));
            me = em.mean;
            amp = em.amplitude;
            ph = em.phase;
        } catch (const std::exception&) {
            // out-of-domain grid point: row keeps nan columns
        }
        out += format_double(x) + ", " + format_double(lo) + ", " + format_double(hi) + ", " +
               format_double(ml) + ", " + format_double(me) + ", " + format_double(amp) + ", " +
               format_double(ph) + "\n";
    }
    emit_text(output_path_of(opt, cfg), out);
    std::cout << "integral_caveat_rows = " << caveats << " of " << grid.size() << "\n";
    return 0;
}

int cmd_circuit_check(const CommonOptions& opt) {
    const RunConfig cfg = load_config_file(opt.config_path);
    if (cfg.hamiltonian.kind == HamiltonianConfig::Kind::spectrum_file)
        throw config_error("circuit-check: needs a matrix Hamiltonian (heisenberg or "
                           "double_well), not a spectrum file");
    const Eigen::MatrixXd H = build_matrix(cfg.hamiltonian);
    const Problem pb = assemble(cfg);
    const double dtau = pb.schedule.final_step();
    if (!(dtau > 0.0)) throw config_error("circuit-check: the schedule's final step must be > 0");
    const double E = energy_shift(pb.policy, pb.gp, dtau);

    StepUnitary su;
    try {
        su = build_approx_step_circuit(H, dtau, pb.gp, E);
    } catch (const internal_error& e) {
        std::cout << "circuit-check: FAIL\n" << e.what() << "\n";
        return 3;
    }
    const Eigen::Index dim = su.matrix.rows();
    const double unit_dev = (su.matrix.adjoint() * su.matrix -
                             Eigen::MatrixXcd::Identity(dim, dim))
                                .cwiseAbs()
                                .maxCoeff();

    const Spectrum sp = diagonalize(H, /*with_vectors=*/true);
    Eigen::VectorXd f(sp.size());
    for (std::size_t i = 0; i < sp.size(); ++i)
        f[static_cast<Eigen::Index>(i)] = step_factor(sp.eigenvalues[i], E, dtau, pb.gp);
    const Eigen::MatrixXcd target =
        (sp.eigenvectors * f.asDiagonal() * sp.eigenvectors.transpose()).cast<std::complex<double>>();
    const double block_dev = (su.block_00 - target).cwiseAbs().maxCoeff();

    std::cout << "s_dtau = " << format_double(pb.gp.s * dtau) << "\n";
    std::cout << "energy_shift = " << format_double(E) << "\n";
    std::cout << "max_block_deviation = " << format_double(block_dev) << "\n";
    std::cout << "max_unitarity_deviation = " << format_double(unit_dev) << "\n";
    const bool pass = block_dev <= 1e-10 && unit_dev <= 1e-10;
    std::cout << "circuit-check: " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 3;
}

int cmd_sample(const CommonOptions& opt, long long shots) {
    const RunConfig cfg = load_config_file(opt.config_path);
    const Problem pb = assemble(cfg);
    const std::uint64_t seed = opt.seed ? *opt.seed : cfg.seed;
    const TrajectoryStats st =
        sample_trajectories(pb.spectrum, pb.weights, pb.schedule, pb.gp, pb.policy, shots, seed);
    std::string out = "shot,succeeded,steps_survived\n";
    for (const ShotRecord& rec : st.records)
        out += std::to_string(rec.shot) + "," + (rec.succeeded ? "1" : "0") + "," +
               std::to_string(rec.steps_survived) + "\n";
    emit_text(output_path_of(opt, cfg), out);

    const RunResult res = run_pite(pb.spectrum, pb.weights, pb.schedule, pb.gp, pb.policy,
                                   AccumulationMode::log_space, /*with_step_success=*/false);
    std::cout << "shots = " << st.shots << "\n";
    std::cout << "successes = " << st.successes << "\n";
    std::cout << "success_frequency = " << format_double(st.success_frequency) << "\n";
    std::cout << "mean_attempts = " << format_double(st.mean_attempts) << "\n";
    std::cout << "engine_success_prob = " << format_double(res.total_success) << "\n";
    std::cout << "seed = " << st.seed << "\n";
    return 0;
}

int cmd_cost(const CommonOptions& opt, std::optional<double> w1_sq, double eps_tilde,
             double d_pite) {
    double w1 = 0.0;
    if (w1_sq) {
        w1 = *w1_sq;
    } else {
        if (opt.config_path.empty())
            throw config_error("cost: provide --w1-sq or a --config whose initial state sets it");
        const RunConfig cfg = load_config_file(opt.config_path);
        w1 = assemble(cfg).weights.weights.front();
    }
    if (!(w1 > 0.0 && w1 <= 1.0)) throw config_error("cost: w1_sq must lie in (0, 1]");
    if (!(eps_tilde > 0.0)) throw config_error("cost: eps_tilde must be positive");
    if (!(d_pite > 0.0)) throw config_error("cost: d_pite must be positive");
    std::cout << "w1_sq = " << format_double(w1) << "\n";
    std::cout << "eps_tilde = " << format_double(eps_tilde) << "\n";
    std::cout << "d_pite = " << format_double(d_pite) << "\n";
    std::cout << "K = " << required_steps(w1, eps_tilde, StepsVariant::limit) << "\n";
    std::cout << "K_cos2_bound = " << required_steps(w1, eps_tilde, StepsVariant::cos2_bound)
              << "\n";
    std::cout << "cost = " << format_double(cost_estimate(d_pite, w1, eps_tilde)) << "\n";
    return 0;
}

} // namespace pite::cli
