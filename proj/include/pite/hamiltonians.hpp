#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace pite {

inline constexpr int default_max_qubits = 14;

// Ascending eigenvalues of a real-symmetric Hamiltonian, with optional
// eigenvectors (columns, aligned with eigenvalue order).
struct Spectrum {
    std::vector<double> eigenvalues;
    Eigen::MatrixXd eigenvectors; // 0x0 when not requested

    bool has_eigenvectors() const { return eigenvectors.size() != 0; }
    std::size_t size() const { return eigenvalues.size(); }
    // lambda_2 - lambda_1, the smallest excitation energy.
    double gap() const;
    // lambda_N - lambda_1.
    double spread() const;
};

struct DosHistogram {
    std::vector<double> bin_edges; // ascending, size counts.size()+1
    std::vector<long long> counts;
    std::vector<double> density; // counts / (N * bin_width)
};

// Closed chain of n sites: H = J * sum_<jk> sigma_j . sigma_k + h * sum_j sigma_j^z,
// built from Pauli matrices (eigenvalues +-1).  Periodic nearest neighbours;
// each undirected edge counted once (n=2 has a single bond).
Eigen::MatrixXd build_heisenberg_chain(int n, double J, double h,
                                       int max_qubits = default_max_qubits);

// Single particle on a periodic grid of 2^n_qubits points covering [0, L),
// x_j = j * L / 2^n_qubits, with an asymmetric double-well potential:
// quadratic walls outside the wells and cosine bumps between them, joined
// continuously at (L-d)/2, L/2 and (L+d)/2.  Kinetic term is the exact
// plane-wave (spectral) second derivative, hbar = m = 1.
Eigen::MatrixXd build_double_well(int n_qubits, double L, double d, double delta,
                                  double V0, int max_qubits = default_max_qubits);

// Dense symmetric eigendecomposition, eigenvalues ascending.  Eigenvector
// signs are canonicalized (first non-negligible component positive) so
// repeated runs are bit-identical.
Spectrum diagonalize(const Eigen::MatrixXd& H, bool with_vectors = true);

// Histogram of eigenvalue counts over [lambda_1, lambda_N] in fixed-width bins.
DosHistogram dos_histogram(const Spectrum& spec, double bin_width);

} // namespace pite
