#include "pite/hamiltonians.hpp"

#include "pite/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace pite {

namespace {

constexpr double pi = 3.14159265358979323846;

void check_qubit_budget(int n, int max_qubits, const char* what) {
    if (n > max_qubits)
        throw resource_limit_error(std::string(what) + ": " + std::to_string(n) +
                                   " qubits exceeds the dense-solver cap of " +
                                   std::to_string(max_qubits));
}

} // namespace

double Spectrum::gap() const {
    if (eigenvalues.size() < 2) throw std::invalid_argument("Spectrum::gap: need at least two levels");
    return eigenvalues[1] - eigenvalues[0];
}

double Spectrum::spread() const {
    if (eigenvalues.empty()) throw std::invalid_argument("Spectrum::spread: empty spectrum");
    return eigenvalues.back() - eigenvalues.front();
}

Eigen::MatrixXd build_heisenberg_chain(int n, double J, double h, int max_qubits) {
    if (n < 2) throw std::invalid_argument("build_heisenberg_chain: need at least 2 sites");
    check_qubit_budget(n, max_qubits, "build_heisenberg_chain");

    const long N = 1L << n;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
    const int n_edges = (n == 2) ? 1 : n; // ring, but a 2-site ring is a single bond

    for (long b = 0; b < N; ++b) {
        double diag = 0.0;
        for (int e = 0; e < n_edges; ++e) {
            const int j = e;
            const int k = (e + 1) % n;
            const int bj = (b >> j) & 1;
            const int bk = (b >> k) & 1;
            diag += J * (bj == bk ? 1.0 : -1.0); // sigma^z sigma^z
            if (bj != bk) {
                // sigma^x sigma^x + sigma^y sigma^y flips the unequal pair
                const long b2 = b ^ ((1L << j) | (1L << k));
                H(b2, b) += 2.0 * J;
            }
        }
        for (int j = 0; j < n; ++j) diag += h * (2.0 * ((b >> j) & 1) - 1.0);
        H(b, b) += diag;
    }
    return H;
}

Eigen::MatrixXd build_double_well(int n_qubits, double L, double d, double delta,
                                  double V0, int max_qubits) {
    if (n_qubits < 3) throw std::invalid_argument("build_double_well: need n_qubits >= 3");
    check_qubit_budget(n_qubits, max_qubits, "build_double_well");
    if (!(L > d && d > 0.0)) throw std::invalid_argument("build_double_well: need L > d > 0");
    if (V0 < 0.0) throw std::invalid_argument("build_double_well: need V0 >= 0");

    const long N = 1L << n_qubits;
    const double dx = L / static_cast<double>(N);

    auto left_wall = [&](double x) { double t = x - L / 2 + d / 2; return t * t / 2 + delta; };
    auto left_bump = [&](double x) { return V0 / 2 * (1.0 + std::cos(2 * pi / d * (x - L / 2))) + delta; };
    auto right_bump = [&](double x) { return (V0 + delta) / 2 * (1.0 + std::cos(2 * pi / d * (x - L / 2))); };
    auto right_wall = [&](double x) { double t = x - L / 2 - d / 2; return t * t / 2; };

    auto V = [&](double x) {
        if (x <= (L - d) / 2) return left_wall(x);
        if (x <= L / 2) return left_bump(x);
        if (x <= (L + d) / 2) return right_bump(x);
        return right_wall(x);
    };

    // The four pieces must join continuously; a mismatch means the formulas
    // above were edited inconsistently.
    const double scale = std::max({1.0, std::abs(V0), std::abs(delta)});
    if (std::abs(left_wall((L - d) / 2) - left_bump((L - d) / 2)) > 1e-12 * scale ||
        std::abs(left_bump(L / 2) - right_bump(L / 2)) > 1e-12 * scale ||
        std::abs(right_bump((L + d) / 2) - right_wall((L + d) / 2)) > 1e-12 * scale)
        throw internal_error("build_double_well: potential pieces do not join continuously");

    // Exact periodic second derivative on the plane-wave basis, as a real
    // symmetric Toeplitz-circulant matrix: T_{jl} depends on (j-l) mod N.
    std::vector<double> t(static_cast<std::size_t>(N), 0.0);
    for (long r = 0; r < N; ++r) {
        double acc = 0.0;
        for (long m = -N / 2; m < N / 2; ++m) {
            const double km = 2 * pi * static_cast<double>(m) / L;
            acc += (km * km / 2) * std::cos(km * static_cast<double>(r) * dx);
        }
        t[static_cast<std::size_t>(r)] = acc / static_cast<double>(N);
    }

    Eigen::MatrixXd H(N, N);
    for (long j = 0; j < N; ++j)
        for (long l = 0; l < N; ++l) H(j, l) = t[static_cast<std::size_t>((j - l + N) % N)];
    // Symmetrize away the last bits of rounding noise from cos().
    H = ((H + H.transpose()) / 2).eval();
    for (long j = 0; j < N; ++j) H(j, j) += V(static_cast<double>(j) * dx);
    return H;
}

Spectrum diagonalize(const Eigen::MatrixXd& H, bool with_vectors) {
    if (H.rows() != H.cols() || H.rows() == 0)
        throw std::invalid_argument("diagonalize: matrix must be square and non-empty");
    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("diagonalize: matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        H, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numeric_error("diagonalize: eigensolver did not converge (dimension " +
                            std::to_string(H.rows()) + ", max |entry| " +
                            std::to_string(H.cwiseAbs().maxCoeff()) + ")");

    Spectrum spec;
    const auto& ev = solver.eigenvalues();
    spec.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    if (with_vectors) {
        spec.eigenvectors = solver.eigenvectors();
        for (Eigen::Index c = 0; c < spec.eigenvectors.cols(); ++c) {
            for (Eigen::Index r = 0; r < spec.eigenvectors.rows(); ++r) {
                const double v = spec.eigenvectors(r, c);
                if (std::abs(v) > 1e-12) {
                    if (v < 0) spec.eigenvectors.col(c) *= -1.0;
                    break;
                }
            }
        }
    }
    return spec;
}

DosHistogram dos_histogram(const Spectrum& spec, double bin_width) {
    if (spec.eigenvalues.empty()) throw std::invalid_argument("dos_histogram: empty spectrum");
    if (!(bin_width > 0.0)) throw std::invalid_argument("dos_histogram: bin_width must be > 0");

    const double lo = spec.eigenvalues.front();
    const double hi = spec.eigenvalues.back();
    const long long n_bins = std::max(1LL, static_cast<long long>(std::ceil((hi - lo) / bin_width - 1e-12)));

    DosHistogram h;
    h.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
    for (long long b = 0; b <= n_bins; ++b)
        h.bin_edges[static_cast<std::size_t>(b)] = lo + bin_width * static_cast<double>(b);
    h.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (double ev : spec.eigenvalues) {
        long long b = static_cast<long long>(std::floor((ev - lo) / bin_width));
        if (b >= n_bins) b = n_bins - 1; // top edge is inclusive
        if (b < 0) b = 0;
        ++h.counts[static_cast<std::size_t>(b)];
    }
    const double norm = static_cast<double>(spec.eigenvalues.size()) * bin_width;
    h.density.resize(h.counts.size());
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        h.density[b] = static_cast<double>(h.counts[b]) / norm;
    return h;
}

} // namespace pite
