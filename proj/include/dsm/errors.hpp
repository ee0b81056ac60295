#pragma once

#include <stdexcept>
#include <string>

namespace dsm {

/// Bad input: invalid parameter, malformed configuration, precondition violation.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Computation cannot proceed: all-zero data, all-zero map, undefined SNR.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File-system failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dsm
