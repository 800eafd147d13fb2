#pragma once

#include <stdexcept>
#include <string>

namespace sylnet {

/// Shape or index violation in the block algebra. Always a hard failure,
/// never a silent broadcast.
class dimension_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Contract violation at construction time (disconnected graph, bad
/// partition, invalid config).
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Random instance generation exhausted its resample budget.
class generation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative oracle failed to reach its tolerance within budget.
class oracle_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values appeared during time integration.
class divergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed on-disk format.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sylnet
