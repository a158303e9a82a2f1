#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "pite/engine.hpp"
#include "pite/hamiltonians.hpp"

namespace testutil {

// Ascending, well-separated eigenvalues with a random offset.
inline pite::Spectrum random_spectrum(std::mt19937_64& rng, int n,
                                      double min_gap = 0.05,
                                      double max_gap = 1.0) {
    std::uniform_real_distribution<double> offset(-3.0, 3.0);
    std::uniform_real_distribution<double> gap(min_gap, max_gap);
    pite::Spectrum spec;
    spec.eigenvalues.resize(n);
    double v = offset(rng);
    for (int i = 0; i < n; ++i) {
        spec.eigenvalues[i] = v;
        v += gap(rng);
    }
    return spec;
}

inline pite::InitialWeights random_weights(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    pite::InitialWeights w;
    w.weights.resize(n);
    double total = 0.0;
    for (auto& x : w.weights) {
        x = u(rng);
        total += x;
    }
    for (auto& x : w.weights) x /= total;
    return w;
}

// Unique scratch directory for a test, removed when the guard dies.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        auto base = std::filesystem::temp_directory_path();
        path_ = base / ("pite_test_" + tag + "_" +
                        std::to_string(counter.fetch_add(1)) + "_" +
                        std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const {
        return path_ / name;
    }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testutil
