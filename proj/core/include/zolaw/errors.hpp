#pragma once

#include <stdexcept>

namespace zolaw {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver or derived-structure size limit hit.
struct CapExceeded : EvalError {
    using EvalError::EvalError;
};

// Edge formula evaluated reflexive or asymmetric where the quantifier
// definitions require antireflexive and symmetric.
struct SemanticsViolation : EvalError {
    using EvalError::EvalError;
};

// Equality formula of Qeq/Qtu is not reflexive/symmetric/transitive on the
// kept domain.
struct EquivalenceViolation : EvalError {
    using EvalError::EvalError;
};

// Edge formula distinguishes equivalent representatives.
struct WellDefinednessViolation : EvalError {
    using EvalError::EvalError;
};

struct UnboundVariable : EvalError {
    using EvalError::EvalError;
};

} // namespace zolaw
