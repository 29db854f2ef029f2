#pragma once

#include <stdexcept>
#include <string>

namespace lpres {

/// Invalid numeric parameter (grid size, time sign, empty sweep list).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operands that do not belong together (grid or representation mismatch).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A configuration the discretization cannot resolve.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario file or command line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lpres
