#pragma once

#include <stdexcept>
#include <string>

namespace ionstark {

// Error taxonomy maps onto CLI exit codes:
//   ValidationError -> 1   bad inputs: data files, flags, argument domains
//   RegimeError     -> 2   the requested plan/regime cannot be satisfied
//   NumericError    -> 3   formula domain violated or a solver failed
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
    using Error::Error;
};

// Unknown species name and similar lookups.
struct NotFoundError : ValidationError {
    using ValidationError::ValidationError;
};

struct RegimeError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

// Requested laser frequency within the far-off-resonance guard band of a line.
struct NearResonanceError : NumericError {
    using NumericError::NumericError;
};

// psi = 0 (magic wavelength): required_power has no solution.
struct SingularInversionError : NumericError {
    using NumericError::NumericError;
};

}  // namespace ionstark
