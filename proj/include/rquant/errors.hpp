#pragma once

#include <stdexcept>
#include <string>

namespace rquant {

// Error taxonomy mirrored by the CLI exit codes: usage 2, data 3, numeric 4.

/// Bad arguments or flag combinations.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid input data: malformed files, points off their manifold,
/// manifold mismatches, weights that do not sum to one.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure: convergence loss, eigenvalue underflow, infeasible plan.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Log map requested at the cut locus (e.g. sphere antipode). Recoverable
/// inside the online quantizer, which skips the step and counts the event.
struct CutLocusError : NumericError {
    using NumericError::NumericError;
};

} // namespace rquant
