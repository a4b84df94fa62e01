// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sijscc {

// Wrong wiring: channel counts, head counts, invalid hyperparameters.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Tensor dimensions that violate an operation's contract.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Inputs that are structurally valid but too small / empty to process.
struct DegenerateInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Dataset roots with no usable images.
struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller handed the channel a non-normalized signal.
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite loss or gradients during training; carries the failing step.
struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& what, long step_idx)
        : std::runtime_error(what + " (step " + std::to_string(step_idx) + ")"), step(step_idx) {}
    long step;
};

// Unreadable or incompatible checkpoint / symbol files.
struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sijscc
