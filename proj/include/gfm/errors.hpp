#pragma once

#include <stdexcept>
#include <string>

namespace gfm {

/// Invalid group/norm/experiment configuration (bad kind, unsupported dimension, bad p/q).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented preconditions.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Input lies outside the numerically validated range (e.g. Wigner spins above 64).
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

}  // namespace gfm
