// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDEG_ERRORS_HPP
#define QDEG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdeg {

// Base class for all qdeg exceptions; catch this to map any library
// failure to a diagnostic without a stack trace.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input validation failures (user data / arguments).
struct ShapeMismatch final : Error {
  using Error::Error;
};
struct CompletenessViolation final : Error {
  using Error::Error;
};
struct NotCompletelyPositive final : Error {
  using Error::Error;
};
struct NotTracePreserving final : Error {
  using Error::Error;
};
struct DomainError final : Error {
  using Error::Error;
};
struct DimensionMetadataMissing final : Error {
  using Error::Error;
};
struct IoError final : Error {
  using Error::Error;
};

// Solver-side failures.
struct NumericalFailure final : Error {
  using Error::Error;
};
struct InfeasibleProblem final : Error {
  using Error::Error;
};

}  // namespace qdeg

#endif  // QDEG_ERRORS_HPP
