#include "doctest.h"

#include "pite/circuit.hpp"
#include "pite/engine.hpp"
#include "pite/errors.hpp"
#include "pite/schedules.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

using namespace pite;
using Cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Eigen::MatrixXd B(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) B(r, c) = u(rng);
    return 0.5 * (B + B.transpose());
}

double unitarity_deviation(const Eigen::MatrixXcd& U) {
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(U.rows(), U.cols());
    return (U.adjoint() * U - I).cwiseAbs().maxCoeff();
}

// Register state after projecting the ancilla onto |0>, as plain amplitudes.
Eigen::VectorXcd register_part(const StateVector& sv) {
    return sv.amplitudes.head(sv.amplitudes.size() / 2);
}

}  // namespace

TEST_CASE("exact block embedding at tau = 0 is the reflection [[I,0],[0,-I]]") {
    std::mt19937_64 rng(101);
    Spectrum spec = diagonalize(random_symmetric(rng, 4), true);
    StepUnitary u = build_exact_block_unitary(spec, 0.0);
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(8, 8);
    for (int i = 0; i < 4; ++i) {
        want(i, i) = Cplx(1.0, 0.0);
        want(4 + i, 4 + i) = Cplx(-1.0, 0.0);
    }
    CHECK((u.matrix - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact block embedding reproduces the matrix exponential") {
    // single qubit, diagonal: block is diag(1, e^{-tau})
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2, 2);
    H(1, 1) = 1.0;
    StepUnitary u = build_exact_block_unitary(diagonalize(H), 1.0);
    CHECK(std::abs(u.block_00(0, 0) - Cplx(1.0, 0.0)) < 1e-13);
    CHECK(std::abs(u.block_00(1, 1) - Cplx(std::exp(-1.0), 0.0)) < 1e-13);
    CHECK(std::abs(u.block_00(0, 1)) < 1e-13);

    // random two-qubit case against an independent Pade exponential
    std::mt19937_64 rng(103);
    Eigen::MatrixXd H2 = random_symmetric(rng, 4);
    Spectrum spec = diagonalize(H2);
    const double shift = -spec.eigenvalues.front() + 0.1; // make lambda_1 >= 0
    Eigen::MatrixXd Hp = H2 + shift * Eigen::MatrixXd::Identity(4, 4);
    Spectrum specp = diagonalize(Hp);
    const double tau = 0.8;
    StepUnitary u2 = build_exact_block_unitary(specp, tau);
    Eigen::MatrixXcd target = oracle::expm(-tau * Hp.cast<Cplx>());
    CHECK((u2.block_00 - target).cwiseAbs().maxCoeff() < 1e-12);

    // block structure and unitarity of the full embedding
    const auto& M = u2.matrix;
    CHECK((M.topRightCorner(4, 4) - M.bottomLeftCorner(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((M.bottomRightCorner(4, 4) + M.topLeftCorner(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(unitarity_deviation(M) < 1e-12);
}

TEST_CASE("exact embedding rejects growth and missing eigenvectors") {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2, 2);
    H(0, 0) = -0.5; // negative eigenvalue: exp(-lambda*tau) > 1
    CHECK_THROWS_AS((void)build_exact_block_unitary(diagonalize(H), 1.0),
                    std::invalid_argument);
    Spectrum no_vectors = diagonalize(H, false);
    CHECK_THROWS_AS((void)build_exact_block_unitary(no_vectors, 0.5), std::invalid_argument);
}

TEST_CASE("gate-built step at dtau = 0 collapses to gamma times identity") {
    std::mt19937_64 rng(107);
    Eigen::MatrixXd H = random_symmetric(rng, 8);
    GammaParams gp = gamma_params(0.9);
    StepUnitary u = build_approx_step_circuit(H, 0.0, gp, 0.0);
    Eigen::MatrixXcd want = 0.9 * Eigen::MatrixXcd::Identity(8, 8);
    CHECK((u.block_00 - want).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(unitarity_deviation(u.matrix) < 1e-12);
}

TEST_CASE("gate-built step reproduces the step factor spectrally") {
    GammaParams gp = gamma_params(0.9);

    // single qubit under the full shift: diag(1, cos(dlambda*s*dtau))
    Eigen::MatrixXd H1 = Eigen::MatrixXd::Zero(2, 2);
    H1(1, 1) = 0.8;
    const double dtau = 0.3;
    double E = energy_shift(ShiftPolicy{1.0, 0, 0.0}, gp, dtau);
    StepUnitary u1 = build_approx_step_circuit(H1, dtau, gp, E);
    CHECK(std::abs(u1.block_00(0, 0) - Cplx(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(u1.block_00(1, 1) - Cplx(std::cos(0.8 * gp.s * dtau), 0.0)) < 1e-12);
    CHECK(std::abs(u1.block_00(0, 1)) < 1e-12);

    // random three-qubit draws: block == V f(lambda) V^T for random shifts
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> un(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXd H = random_symmetric(rng, 8, 2.0);
        GammaParams g = gamma_params(t % 2 ? 0.9 : 0.55);
        double dt = un(rng);
        Spectrum spec = diagonalize(H);
        double Ek = spec.eigenvalues.front() - 2.0 + 4.0 * un(rng);
        StepUnitary u = build_approx_step_circuit(H, dt, g, Ek);

        Eigen::VectorXd f(8);
        for (int i = 0; i < 8; ++i) f[i] = step_factor(spec.eigenvalues[i], Ek, dt, g);
        Eigen::MatrixXcd target =
            (spec.eigenvectors * f.asDiagonal() * spec.eigenvectors.transpose()).cast<Cplx>();
        CHECK((u.block_00 - target).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(unitarity_deviation(u.matrix) < 1e-10);

        // Hermitian block for Hermitian input
        CHECK((u.block_00 - u.block_00.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("gate-built step is first-order accurate in the step size") {
    std::mt19937_64 rng(113);
    Eigen::MatrixXd H = random_symmetric(rng, 4);
    Spectrum spec = diagonalize(H, false);
    const double l1 = spec.eigenvalues.front();
    GammaParams gp = gamma_params(0.9);

    // compare against gamma * exp(-(H - lambda_1) * dtau); the defect shrinks
    // like dtau^2, so halving the step quarters it
    std::vector<double> errs;
    Eigen::MatrixXcd Hc = (H - l1 * Eigen::MatrixXd::Identity(4, 4)).cast<Cplx>();
    for (double dt : {0.2, 0.1, 0.05, 0.025}) {
        StepUnitary u = build_approx_step_circuit(H, dt, gp, l1);
        Eigen::MatrixXcd target = 0.9 * oracle::expm(-dt * Hc);
        errs.push_back((u.block_00 - target).cwiseAbs().maxCoeff());
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        double ratio = errs[i] / errs[i + 1];
        CHECK(ratio > 3.2);
        CHECK(ratio < 4.8);
    }
}

TEST_CASE("oversized registers are rejected before any work") {
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(8, 8);
    GammaParams gp = gamma_params(0.9);
    CHECK_THROWS_AS((void)build_approx_step_circuit(H, 0.1, gp, 0.0, 2), resource_limit_error);
    Eigen::MatrixXd odd = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS((void)build_approx_step_circuit(odd, 0.1, gp, 0.0), std::invalid_argument);
}

TEST_CASE("ancilla wrapping and validation") {
    Eigen::VectorXcd reg(4);
    reg << Cplx(0.5, 0), Cplx(0.5, 0), Cplx(0.5, 0), Cplx(0.5, 0);
    StateVector sv = make_state_with_ancilla_zero(reg);
    CHECK(sv.register_qubits() == 2);
    CHECK(sv.amplitudes.size() == 8);
    CHECK(std::abs(sv.amplitudes[0] - Cplx(0.5, 0)) < 1e-15);
    CHECK(std::abs(sv.amplitudes[4]) == 0.0); // ancilla-|1> half starts empty

    Eigen::VectorXcd bad_len(3);
    bad_len << Cplx(1, 0), Cplx(0, 0), Cplx(0, 0);
    CHECK_THROWS_AS((void)make_state_with_ancilla_zero(bad_len), std::invalid_argument);
    Eigen::VectorXcd unnorm(2);
    unnorm << Cplx(1, 0), Cplx(1, 0);
    CHECK_THROWS_AS((void)make_state_with_ancilla_zero(unnorm), std::invalid_argument);
}

TEST_CASE("postselection probability matches the evolved norm") {
    std::mt19937_64 rng(127);
    Eigen::MatrixXd H = random_symmetric(rng, 4);
    Spectrum spec = diagonalize(H);
    const double shift = -spec.eigenvalues.front() + 0.05;
    Eigen::MatrixXd Hp = H + shift * Eigen::MatrixXd::Identity(4, 4);
    Spectrum specp = diagonalize(Hp);

    Eigen::VectorXcd psi(4);
    psi << Cplx(0.5, 0), Cplx(0.5, 0), Cplx(0.5, 0), Cplx(0.5, 0);
    StateVector sv = make_state_with_ancilla_zero(psi);

    // tau = 0: the embedding is trivial and postselection always succeeds
    StepUnitary id = build_exact_block_unitary(specp, 0.0);
    auto [sv0, p_id] = apply_postselect(sv, id);
    CHECK(p_id == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((register_part(sv0) - psi).cwiseAbs().maxCoeff() < 1e-12);

    // generic tau: p0 = <psi| exp(-2 H tau) |psi>
    const double tau = 0.7;
    StepUnitary u = build_exact_block_unitary(specp, tau);
    auto [sv1, p0] = apply_postselect(sv, u);
    Eigen::MatrixXcd E2 = oracle::expm(-2.0 * tau * Hp.cast<Cplx>());
    Cplx want = psi.adjoint() * E2 * psi;
    CHECK(p0 == doctest::Approx(want.real()).epsilon(1e-12));
    CHECK(std::abs(register_part(sv1).norm() - 1.0) < 1e-12);
}

TEST_CASE("postselection reports underflow on a vanishing ancilla block") {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2, 2);
    H(0, 0) = 0.0;
    H(1, 1) = 2.0;
    Spectrum spec = diagonalize(H);
    StepUnitary u = build_exact_block_unitary(spec, 400.0);
    Eigen::VectorXcd excited(2);
    excited << Cplx(0, 0), Cplx(1, 0);
    StateVector sv = make_state_with_ancilla_zero(excited);
    CHECK_THROWS_AS((void)apply_postselect(sv, u), numeric_error);
}

TEST_CASE("a postselected gate trajectory matches the eigenbasis engine") {
    std::mt19937_64 rng(131);
    Eigen::MatrixXd H = random_symmetric(rng, 8, 1.5);
    Spectrum spec = diagonalize(H);
    GammaParams gp = gamma_params(0.9);
    Schedule sched = linear_schedule(0.05, 0.4, 10);
    ShiftPolicy policy{1.0, 0, spec.eigenvalues.front()};

    // uniform register state; its eigenbasis weights feed the engine
    Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(8, Cplx(1.0 / std::sqrt(8.0), 0.0));
    Eigen::VectorXd coeff = (spec.eigenvectors.transpose() * psi.real()).eval();
    InitialWeights w;
    w.weights.resize(8);
    for (int i = 0; i < 8; ++i) w.weights[i] = coeff[i] * coeff[i];
    double norm = 0.0;
    for (double x : w.weights) norm += x;
    for (double& x : w.weights) x /= norm;

    StateVector sv = make_state_with_ancilla_zero(psi);
    double p_total = 1.0;
    for (double dt : sched.steps) {
        double E = energy_shift(policy, gp, dt);
        StepUnitary u = build_approx_step_circuit(H, dt, gp, E);
        auto [next, p] = apply_postselect(sv, u);
        sv = next;
        p_total *= p;
    }

    RunResult r = run_pite(spec, w, sched, gp, policy, AccumulationMode::log_space, false);
    CHECK(p_total == doctest::Approx(r.total_success).epsilon(1e-10));

    // final register state carries the engine's renormalized weights
    Eigen::VectorXcd reg = register_part(sv);
    for (int i = 0; i < 8; ++i) {
        Cplx amp = spec.eigenvectors.col(i).cast<Cplx>().dot(reg);
        double weight = std::norm(amp);
        double engine_weight = w.weights[i] * r.damping[i] / r.total_success;
        CHECK(weight == doctest::Approx(engine_weight).epsilon(1e-8).scale(1e-12));
    }
}

TEST_CASE("trajectory sampling statistics") {
    GammaParams gp = gamma_params(0.9);

    // a lossless run succeeds on every shot
    Spectrum single;
    single.eigenvalues = {0.4};
    InitialWeights one;
    one.weights = {1.0};
    Schedule sched = constant_schedule(0.2, 8);
    TrajectoryStats lossless =
        sample_trajectories(single, one, sched, gp, ShiftPolicy{1.0, 0, 0.4}, 500, 1);
    CHECK(lossless.successes == 500);
    CHECK(lossless.success_frequency == 1.0);
    CHECK(lossless.mean_attempts == 1.0);
    for (const auto& rec : lossless.records) {
        CHECK(rec.succeeded);
        CHECK(rec.steps_survived == 8);
    }

    // two-level system: success frequency within 3 sigma of the engine's P_K
    Spectrum two;
    two.eigenvalues = {0.0, 1.0};
    InitialWeights half;
    half.weights = {0.5, 0.5};
    Schedule sched2 = constant_schedule(0.3, 6);
    ShiftPolicy policy{1.0, 0, 0.0};
    RunResult r = run_pite(two, half, sched2, gp, policy, AccumulationMode::log_space, false);
    const long long shots = 100000;
    TrajectoryStats stats = sample_trajectories(two, half, sched2, gp, policy, shots, 42);
    double p = r.total_success;
    double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    CHECK(std::abs(stats.success_frequency - p) < 3.0 * sigma);
    CHECK(stats.mean_attempts ==
          doctest::Approx(static_cast<double>(shots) / stats.successes).epsilon(1e-12));
    CHECK(stats.seed == 42);

    // identical seeds give identical records
    TrajectoryStats again = sample_trajectories(two, half, sched2, gp, policy, 2000, 42);
    for (int i = 0; i < 2000; ++i) {
        CHECK(stats.records[i].succeeded == again.records[i].succeeded);
        CHECK(stats.records[i].steps_survived == again.records[i].steps_survived);
    }
    // and a different seed gives a different trajectory set
    TrajectoryStats other = sample_trajectories(two, half, sched2, gp, policy, 2000, 43);
    int diffs = 0;
    for (int i = 0; i < 2000; ++i)
        if (other.records[i].succeeded != again.records[i].succeeded) ++diffs;
    CHECK(diffs > 0);

    CHECK_THROWS_AS(
        (void)sample_trajectories(two, half, sched2, gp, policy, 0, 1),
        std::invalid_argument);
}
