// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace vfl {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A precondition on an input value was violated (empty vector, odd sample
/// count, label outside {-1,+1}, ...).
struct InvalidInputError : Error {
    using Error::Error;
};

/// Two ciphertext operands are incompatible (key or length mismatch).
struct OperandMismatchError : Error {
    using Error::Error;
};

/// decrypt() was called with a key that did not produce the ciphertext.
/// Signals a protocol wiring bug, never a data problem.
struct WrongKeyError : Error {
    using Error::Error;
};

/// An operation would push a ciphertext past its multiplicative depth budget.
/// The encryption parameters are too small for the requested computation.
struct BudgetExhaustedError : Error {
    using Error::Error;
};

/// Least-squares fit could not be solved (singular system, too few points).
struct FitFailureError : Error {
    using Error::Error;
};

/// Bad command-line / experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

/// Filesystem or parse failure, with file/row diagnostics in the message.
struct IoError : Error {
    using Error::Error;
};

}  // namespace vfl
