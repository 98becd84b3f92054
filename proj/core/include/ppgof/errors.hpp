#pragma once

#include <stdexcept>
#include <string>

namespace ppgof {

/// Malformed arguments, configs or files. Maps to CLI exit code 2.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An operation was called before a required state was built
/// (e.g. querying a recursive intensity without its event cache).
struct InvalidState : std::logic_error {
    using std::logic_error::logic_error;
};

/// Numerical failures. Map to CLI exit code 3.
struct SimulationBlowup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ppgof
