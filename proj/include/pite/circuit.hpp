#pragma once

#include "pite/engine.hpp"
#include "pite/hamiltonians.hpp"
#include "pite/schedules.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace pite {

// Full register-plus-ancilla state.  The ancilla is the most significant
// qubit: amplitude index = a * 2^n + r, so indices [0, 2^n) form the
// ancilla-|0> block.
struct StateVector {
    Eigen::VectorXcd amplitudes;

    int register_qubits() const; // n; amplitudes has length 2^{n+1}
};

// Wrap a register state |psi> as |0>_ancilla (x) |psi>.
StateVector make_state_with_ancilla_zero(const Eigen::VectorXcd& register_state);

// One block-encoded evolution step on n+1 qubits.
struct StepUnitary {
    Eigen::MatrixXcd matrix;   // 2^{n+1} x 2^{n+1}
    Eigen::MatrixXcd block_00; // 2^n x 2^n operator applied when the ancilla
                               // stays |0>
};

// Exact embedding of M = exp(-H*tau): U = [[M, R], [R, -M]] with
// R = sqrt(1 - M^2), both built spectrally from the eigendecomposition.
// Requires eigenvectors and every exp(-lambda*tau) <= 1 + 1e-12 (shift the
// spectrum so lambda_1 >= 0 first).
StepUnitary build_exact_block_unitary(const Spectrum& spec, double tau);

// Gate-sequence construction of one first-order step: ancilla W rotations
// around an ancilla-controlled real-time evolution pair (forward
// exp(-i*s*dtau*H) when the ancilla is |0>, backward when |1>) and an ancilla
// phase rotation whose angle absorbs the energy shift E.  The resulting
// ancilla-|0> block equals f(H) = sin(-(H - E)*s*dtau + phi); the builder
// self-checks this spectrally and throws internal_error naming the first
// deviating eigenvalue on mismatch.
StepUnitary build_approx_step_circuit(const Eigen::MatrixXd& H, double dtau,
                                      const GammaParams& gp, double E,
                                      int max_qubits = default_max_qubits);

// Apply one step and postselect the ancilla on |0>: returns the renormalized
// register state (re-wrapped with a fresh |0> ancilla) and the success
// probability p0.  Throws numeric_error if p0 underflows below 1e-300.
std::pair<StateVector, double> apply_postselect(const StateVector& state, const StepUnitary& U);

struct ShotRecord {
    long long shot = 0;
    bool succeeded = false;
    int steps_survived = 0; // K when succeeded, else the last surviving step count
};

struct TrajectoryStats {
    long long shots = 0;
    long long successes = 0;
    double success_frequency = 0.0; // successes / shots
    double mean_attempts = 0.0;     // shots / successes; inf when nothing succeeded
    std::uint64_t seed = 0;
    std::vector<ShotRecord> records;
};

// Stochastic ancilla-measurement trajectories in the eigenbasis.  Each shot
// draws its own generator from (seed, shot), so results are deterministic and
// independent of evaluation order.  Restarting on failure makes the mean
// attempt count approach 1/P_K.
TrajectoryStats sample_trajectories(const Spectrum& spec, const InitialWeights& w,
                                    const Schedule& sched, const GammaParams& gp,
                                    const ShiftPolicy& policy, long long shots,
                                    std::uint64_t seed);

} // namespace pite
