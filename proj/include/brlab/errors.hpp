#pragma once

#include <stdexcept>
#include <string>

namespace brlab {

// An operation was called outside its admissible range (bad exponent,
// unresolvable scale, support too large, ...). The CLI maps this to exit 2.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The adaptive stopping-time constant could not certify |E| <= |Q|/2.
// The CLI maps this to exit 3.
class ThresholdFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace brlab
