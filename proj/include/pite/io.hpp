#pragma once

#include "pite/engine.hpp"
#include "pite/hamiltonians.hpp"

#include <cstddef>
#include <string>

namespace pite {

// Deterministic decimal form with 17 significant digits, enough to
// round-trip any double exactly.  Non-finite values render as "inf",
// "-inf", "nan".
std::string format_double(double x);

struct SpectrumFile {
    Spectrum spectrum; // eigenvalues only
    InitialWeights weights;
};

// CSV with header `index,eigenvalue,weight` (1-based indices, ascending
// eigenvalues).  Weights are renormalized to sum 1 on ingest.
SpectrumFile read_spectrum_file(const std::string& path);
std::string spectrum_file_text(const Spectrum& spec, const InitialWeights& w);
void write_spectrum_file(const std::string& path, const Spectrum& spec, const InitialWeights& w);

// Either one weight per line or the spectrum-file CSV (its weight column is
// used).  Values are renormalized to sum 1.
InitialWeights read_weights_file(const std::string& path, std::size_t expected_size);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace pite
