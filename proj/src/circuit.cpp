#include "pite/circuit.hpp"

#include "pite/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace pite {

namespace {

constexpr double pi = 3.14159265358979323846;
using Cplx = std::complex<double>;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

int register_qubits_of(Eigen::Index total_dim, const char* what) {
    if (total_dim < 2 || (total_dim & (total_dim - 1)) != 0)
        throw std::invalid_argument(std::string(what) + ": dimension must be a power of two >= 2");
    int bits = 0;
    while ((Eigen::Index{1} << bits) < total_dim) ++bits;
    return bits - 1; // one qubit is the ancilla
}

} // namespace

int StateVector::register_qubits() const {
    return register_qubits_of(amplitudes.size(), "StateVector");
}

StateVector make_state_with_ancilla_zero(const Eigen::VectorXcd& register_state) {
    const Eigen::Index N = register_state.size();
    if (N < 1 || (N & (N - 1)) != 0)
        throw std::invalid_argument("make_state_with_ancilla_zero: register dimension must be a power of two");
    StateVector sv;
    sv.amplitudes = Eigen::VectorXcd::Zero(2 * N);
    sv.amplitudes.head(N) = register_state;
    const double norm = sv.amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-12)
        throw std::invalid_argument("make_state_with_ancilla_zero: register state is not normalized");
    return sv;
}

StepUnitary build_exact_block_unitary(const Spectrum& spec, double tau) {
    if (!spec.has_eigenvectors())
        throw std::invalid_argument("build_exact_block_unitary: eigenvectors required");
    if (!(tau >= 0.0)) throw std::invalid_argument("build_exact_block_unitary: tau must be >= 0");
    const Eigen::Index N = spec.eigenvectors.rows();

    Eigen::VectorXd m(N), r(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const double mi = std::exp(-spec.eigenvalues[static_cast<std::size_t>(i)] * tau);
        if (mi > 1.0 + 1e-12)
            throw std::invalid_argument(
                "build_exact_block_unitary: exp(-lambda*tau) = " + std::to_string(mi) +
                " exceeds 1; shift the spectrum so lambda_1 >= 0");
        m[i] = mi;
        r[i] = std::sqrt(std::max(0.0, 1.0 - mi * mi));
    }
    const Eigen::MatrixXd& V = spec.eigenvectors;
    const Eigen::MatrixXd M = V * m.asDiagonal() * V.transpose();
    const Eigen::MatrixXd R = V * r.asDiagonal() * V.transpose();

    StepUnitary u;
    u.matrix.resize(2 * N, 2 * N);
    u.matrix.topLeftCorner(N, N) = M.cast<Cplx>();
    u.matrix.topRightCorner(N, N) = R.cast<Cplx>();
    u.matrix.bottomLeftCorner(N, N) = R.cast<Cplx>();
    u.matrix.bottomRightCorner(N, N) = (-M).cast<Cplx>();
    u.block_00 = M.cast<Cplx>();
    return u;
}

StepUnitary build_approx_step_circuit(const Eigen::MatrixXd& H, double dtau,
                                      const GammaParams& gp, double E, int max_qubits) {
    if (!(dtau >= 0.0))
        throw std::invalid_argument("build_approx_step_circuit: dtau must be >= 0");
    const Eigen::Index N = H.rows();
    const int n = register_qubits_of(2 * N, "build_approx_step_circuit");
    if (n > max_qubits)
        throw resource_limit_error("build_approx_step_circuit: " + std::to_string(n) +
                                   " register qubits exceeds the cap of " +
                                   std::to_string(max_qubits));
    const Spectrum spec = diagonalize(H, true);
    const Eigen::MatrixXd& V = spec.eigenvectors;

    // Controlled real-time evolution: forward exp(-i*s*dtau*H) on ancilla |0>,
    // backward on |1>, both exact spectral exponentials.
    Eigen::VectorXcd fwd(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const double angle = -gp.s * dtau * spec.eigenvalues[static_cast<std::size_t>(i)];
        fwd[i] = Cplx(std::cos(angle), std::sin(angle));
    }
    const Eigen::MatrixXcd Vc = V.cast<Cplx>();
    const Eigen::MatrixXcd U_fwd = Vc * fwd.asDiagonal() * Vc.adjoint();
    const Eigen::MatrixXcd U_bwd = Vc * fwd.conjugate().asDiagonal() * Vc.adjoint();

    // Ancilla single-qubit gates.  W = (1/sqrt2)[[1, -i], [1, i]]; the phase
    // rotation P(theta') = diag(e^{i(theta'-pi/4)}, e^{-i(theta'-pi/4)}) is the
    // product R_z(-2*theta') R_z(pi/2), with theta' = theta + s*dtau*E folding
    // the energy shift into the rotation angle.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd W;
    W << Cplx(inv_sqrt2, 0.0), Cplx(0.0, -inv_sqrt2), Cplx(inv_sqrt2, 0.0), Cplx(0.0, inv_sqrt2);
    const double theta_prime = gp.theta + gp.s * dtau * E;
    const Cplx p0 = std::polar(1.0, theta_prime - pi / 4.0);
    const Cplx p1 = std::polar(1.0, -(theta_prime - pi / 4.0));

    // Assemble (W^dag (x) I) (P (x) I) (|0><0| (x) U_fwd + |1><1| (x) U_bwd) (W (x) I)
    // blockwise: the controlled pair is block-diagonal, and single-qubit
    // ancilla gates act as 2x2 matrices over the register blocks.
    const Eigen::Matrix2cd Wd = W.adjoint();
    Eigen::Matrix2cd left; // (W^dag * P) as ancilla operator
    left << Wd(0, 0) * p0, Wd(0, 1) * p1, Wd(1, 0) * p0, Wd(1, 1) * p1;

    StepUnitary u;
    u.matrix.resize(2 * N, 2 * N);
    u.matrix.topLeftCorner(N, N) = left(0, 0) * W(0, 0) * U_fwd + left(0, 1) * W(1, 0) * U_bwd;
    u.matrix.topRightCorner(N, N) = left(0, 0) * W(0, 1) * U_fwd + left(0, 1) * W(1, 1) * U_bwd;
    u.matrix.bottomLeftCorner(N, N) = left(1, 0) * W(0, 0) * U_fwd + left(1, 1) * W(1, 0) * U_bwd;
    u.matrix.bottomRightCorner(N, N) = left(1, 0) * W(0, 1) * U_fwd + left(1, 1) * W(1, 1) * U_bwd;
    u.block_00 = u.matrix.topLeftCorner(N, N);

    // Self-check: in the eigenbasis the ancilla-|0> block must be exactly
    // diag(f(lambda_i)).
    const Eigen::MatrixXcd D = Vc.adjoint() * u.block_00 * Vc;
    for (Eigen::Index i = 0; i < N; ++i) {
        const double lam = spec.eigenvalues[static_cast<std::size_t>(i)];
        const double f = std::sin(-(lam - E) * gp.s * dtau + gp.phi);
        if (std::abs(D(i, i) - Cplx(f, 0.0)) > 1e-10)
            throw internal_error(
                "build_approx_step_circuit: gate-order self-test failed at eigenvalue " +
                std::to_string(lam) + " (index " + std::to_string(i) + "): block gives " +
                std::to_string(D(i, i).real()) + ", expected " + std::to_string(f));
    }
    double off = 0.0;
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j)
            if (i != j) off = std::max(off, std::abs(D(i, j)));
    if (off > 1e-10)
        throw internal_error(
            "build_approx_step_circuit: gate-order self-test failed: ancilla-|0> block is not "
            "diagonal in the eigenbasis (max off-diagonal " +
            std::to_string(off) + ")");
    return u;
}

std::pair<StateVector, double> apply_postselect(const StateVector& state, const StepUnitary& U) {
    const Eigen::Index dim = state.amplitudes.size();
    if (U.matrix.rows() != dim || U.matrix.cols() != dim)
        throw std::invalid_argument("apply_postselect: state and unitary dimensions differ");
    if (std::abs(state.amplitudes.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("apply_postselect: state is not normalized");

    const Eigen::VectorXcd out = U.matrix * state.amplitudes;
    const Eigen::Index N = dim / 2;
    const double p0 = out.head(N).squaredNorm();
    if (p0 < 1e-300)
        throw numeric_error("apply_postselect: ancilla-|0> probability underflowed; "
                            "postselection impossible");
    StateVector next;
    next.amplitudes = Eigen::VectorXcd::Zero(dim);
    next.amplitudes.head(N) = out.head(N) / std::sqrt(p0);
    return {next, p0};
}

TrajectoryStats sample_trajectories(const Spectrum& spec, const InitialWeights& w,
                                    const Schedule& sched, const GammaParams& gp,
                                    const ShiftPolicy& policy, long long shots,
                                    std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample_trajectories: shots must be >= 1");
    const std::size_t N = spec.size();
    if (N == 0) throw std::invalid_argument("sample_trajectories: empty spectrum");
    validate_weights(w, N);
    if (sched.K < 1 || sched.steps.size() != static_cast<std::size_t>(sched.K))
        throw std::invalid_argument("sample_trajectories: schedule has no steps or inconsistent K");

    // Shared per-step squared factors; shots only differ in their dice.
    const double branch = gp.phi - (pi / 2.0) * (2.0 * policy.branch_n + 1.0);
    const double f_zero_step = std::sin(gp.phi - policy.alpha * branch);
    std::vector<double> fsq(static_cast<std::size_t>(sched.K) * N);
    for (int k = 0; k < sched.K; ++k) {
        const double dtau = sched.steps[static_cast<std::size_t>(k)];
        const bool shifted = dtau > 0.0;
        const double E = shifted ? energy_shift(policy, gp, dtau) : 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double f =
                shifted ? step_factor(spec.eigenvalues[i], E, dtau, gp) : f_zero_step;
            fsq[static_cast<std::size_t>(k) * N + i] = f * f;
        }
    }

    TrajectoryStats stats;
    stats.shots = shots;
    stats.seed = seed;
    stats.records.reserve(static_cast<std::size_t>(shots));
    std::vector<double> u(N);
    const std::uint64_t base = splitmix64(seed);
    for (long long shot = 0; shot < shots; ++shot) {
        std::mt19937_64 rng(splitmix64(base ^ static_cast<std::uint64_t>(shot)));
        for (std::size_t i = 0; i < N; ++i) u[i] = w.weights[i];
        double total = 1.0;
        ShotRecord rec;
        rec.shot = shot;
        rec.succeeded = true;
        rec.steps_survived = sched.K;
        for (int k = 0; k < sched.K; ++k) {
            double next_total = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                u[i] *= fsq[static_cast<std::size_t>(k) * N + i];
                next_total += u[i];
            }
            const double p = total > 0.0 ? next_total / total : 0.0;
            if (uniform01(rng()) >= p) {
                rec.succeeded = false;
                rec.steps_survived = k;
                break;
            }
            total = next_total;
        }
        if (rec.succeeded) ++stats.successes;
        stats.records.push_back(rec);
    }
    stats.success_frequency = static_cast<double>(stats.successes) / static_cast<double>(shots);
    stats.mean_attempts = stats.successes > 0
                              ? static_cast<double>(shots) / static_cast<double>(stats.successes)
                              : std::numeric_limits<double>::infinity();
    return stats;
}

} // namespace pite
