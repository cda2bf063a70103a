#pragma once

#include <stdexcept>
#include <string>

namespace crn {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input-side errors: bad files, bad flags, malformed text. CLI exit code 1.
struct UsageError : Error {
    using Error::Error;
};

/// Errors raised by analysis preconditions or unattainable requests. CLI exit code 2.
struct DomainError : Error {
    using Error::Error;
};

struct SyntaxError : UsageError {
    int line, column;
    SyntaxError(const std::string& msg, int line_, int column_)
        : UsageError(msg + " (line " + std::to_string(line_) + ", column " +
                     std::to_string(column_) + ")"),
          line(line_), column(column_) {}
};

struct DuplicateRateLabel : UsageError { using UsageError::UsageError; };
struct NegativeStoichiometry : UsageError { using UsageError::UsageError; };
struct UnknownLabel : UsageError { using UsageError::UsageError; };
struct NonpositiveRate : UsageError { using UsageError::UsageError; };
struct InvalidNetwork : UsageError { using UsageError::UsageError; };

struct DimensionMismatch : DomainError { using DomainError::DomainError; };
struct MissingVariableValue : DomainError { using DomainError::DomainError; };
struct ExactDivisionFailure : DomainError { using DomainError::DomainError; };
struct SingularSymbolicSystem : DomainError { using DomainError::DomainError; };
struct NotLinearInChosenVariables : DomainError { using DomainError::DomainError; };
struct EliminationFailed : DomainError { using DomainError::DomainError; };
struct NotComplexBalanced : DomainError { using DomainError::DomainError; };
struct ClassEmpty : DomainError { using DomainError::DomainError; };
struct EmptyClass : DomainError { using DomainError::DomainError; };
struct NoConvergence : DomainError { using DomainError::DomainError; };
struct NonpositiveInput : DomainError { using DomainError::DomainError; };
struct ZeroPolynomial : DomainError { using DomainError::DomainError; };
struct StepUnderflow : DomainError { using DomainError::DomainError; };
struct WitnessSearchFailed : DomainError { using DomainError::DomainError; };
struct TermCapExceeded : DomainError { using DomainError::DomainError; };

} // namespace crn
