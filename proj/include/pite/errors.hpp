#pragma once

#include <stdexcept>
#include <string>

namespace pite {

// User-facing configuration problems (bad keys, bad ranges, missing files named
// in a config). CLI maps these to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hard numeric failures: eigensolver breakdown, underflow in linear-space
// accumulation, impossible postselection. CLI maps these to exit code 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File-system failures on read/write. CLI maps these to exit code 4.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A builder self-check failed; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Requested problem size exceeds the dense-solver cap.
struct resource_limit_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace pite
