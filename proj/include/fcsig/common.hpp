#pragma once

#include <stdexcept>

namespace fcsig {

// Caller-supplied data violates a precondition: mismatched grids, bad sizes,
// parameters out of range.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The requested statistic cannot be formed from this data, e.g. a zero
// variance estimate under a compact kernel or a zero standardization
// denominator.
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: eigensolver did not converge, spectrum negative beyond
// roundoff tolerance.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The data does not support the requested rank (near-zero eigenvalue in the
// requested range).
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fcsig
