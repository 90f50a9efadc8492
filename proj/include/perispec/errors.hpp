#pragma once

#include <stdexcept>
#include <string>

namespace perispec {

// Base of all library errors. Two families matter to callers: validation
// errors (bad inputs, bad files, violated preconditions) and numerical
// failures (a computation that could not be completed reliably).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

// specfun
struct InvalidParameter : ValidationError { using ValidationError::ValidationError; };
struct PoleError : ValidationError { using ValidationError::ValidationError; };
struct NonConvergence : NumericalError { using NumericalError::NumericalError; };

// multipliers
struct PrecisionLoss : NumericalError { using NumericalError::NumericalError; };
struct ConsistencyError : NumericalError { using NumericalError::NumericalError; };
struct DomainError : ValidationError { using ValidationError::ValidationError; };

// quadrature
struct QuadratureFailure : NumericalError { using NumericalError::NumericalError; };

// fields
struct AliasError : ValidationError { using ValidationError::ValidationError; };
struct InsufficientData : ValidationError { using ValidationError::ValidationError; };

// solvers
struct NonzeroMeanForcing : ValidationError { using ValidationError::ValidationError; };
struct SingularMode : NumericalError { using NumericalError::NumericalError; };
struct WrongProblemKind : ValidationError { using ValidationError::ValidationError; };

// cli / io
struct ConfigError : ValidationError { using ValidationError::ValidationError; };

}  // namespace perispec
