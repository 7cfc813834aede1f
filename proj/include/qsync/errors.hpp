#pragma once

#include <stdexcept>
#include <string>

namespace qsync {

// Bath parameters hit a pole of the Matsubara coefficients.
struct DegenerateBath : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Initial condition is not a valid density matrix.
struct InvalidInitialState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A matrix handed to a measure is not Hermitian / unit trace / positive enough.
struct InvalidDensityMatrix : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Integration produced NaN or Inf entries (step size too large).
struct NonFiniteState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tongue width requested on a row whose reference cell has zero synchronization.
struct ZeroReference : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration file or override rejected; message carries file:line context.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qsync
