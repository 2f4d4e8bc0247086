// errors.hpp: exception types shared by all modules

#pragma once

#include <stdexcept>
#include <string>

namespace weylchsh {

// Rejected input: out-of-range parameter, malformed state, unknown label.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation that could not meet its tolerance or hit an impossible value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace weylchsh
