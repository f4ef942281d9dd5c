// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mpm {

/// Input does not satisfy an operation's documented precondition
/// (wrong shape, not monotone, magnitude cap exceeded, ...).
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public PreconditionError {
  public:
    using PreconditionError::PreconditionError;
};

/// An internal consistency check failed; this always indicates a bug.
class InvariantError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace mpm

namespace mpm {

/// Malformed instance file or unreadable path.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace mpm
