#pragma once

#include <stdexcept>
#include <string>

namespace statgames {

// Game parameters violate their invariants (counts out of range, bad gamma, ...).
struct InvalidSpec : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mathematical precondition of an operation not met (argument outside domain).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A rate argument fell outside the open unit interval.
struct InvalidFraction : std::domain_error {
    using std::domain_error::domain_error;
};

// A probability vector does not sum to one within tolerance.
struct NotNormalized : std::domain_error {
    using std::domain_error::domain_error;
};

// Operation requires the two scenario supports to coincide.
struct SupportMismatch : std::domain_error {
    using std::domain_error::domain_error;
};

// An iterative solver exhausted its budget before reaching the target tolerance.
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested enumeration would exceed the configured size guards.
struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A claimed equilibrium failed verification against the utility matrix.
struct Refuted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The Newton error-bound guard could not be established at the current iterate.
struct GuardNotMet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The fixed-point map is not a contraction for this game (disjoint supports).
struct NotContractive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kernel evaluated too close to a pole of the Gamma/Beta factors.
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

// Divergence evaluated where the second argument has zero mass but the first does not.
struct SupportViolation : std::domain_error {
    using std::domain_error::domain_error;
};

// A degenerate equilibrium (boundary mixing weight) prevents the requested limit.
struct Degenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace statgames
