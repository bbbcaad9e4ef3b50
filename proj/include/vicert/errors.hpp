#pragma once

#include <stdexcept>
#include <string>

namespace vicert {

// Base class for every library failure, so callers can separate domain errors
// from std:: machinery failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input vector is (projectively) zero.
struct ZeroVector : Error {
    using Error::Error;
};

// Two inputs are parallel / linearly dependent where independence is required.
struct DegenerateInput : Error {
    using Error::Error;
};

// map_pair / lemma1_for: the two anchor pairs do not have the same overlap.
struct OverlapMismatch : Error {
    using Error::Error;
};

// Gadget constructor called outside its stated parameter range.
struct PreconditionViolated : Error {
    using Error::Error;
};

// Scalar function evaluated outside its domain.
struct DomainError : Error {
    using Error::Error;
};

// Seed or query references an observable id/label the diagram does not have.
struct UnknownObservable : Error {
    using Error::Error;
};

// A gadget's forcing contract failed to verify on its own diagram, or an
// internal consistency check failed. Always a bug or a tolerance regression,
// never a user error.
struct ContractViolation : Error {
    using Error::Error;
};

// localize(): |<psi|phi>| is (within tolerance) 0 or 1, so the target is value
// DEFINITE — a distinct outcome, not a construction failure.
struct DegenerateOverlap : Error {
    double overlap;
    bool near_one;  // true: P_phi == P_psi, forced 1; false: orthogonal, forced 0
    DegenerateOverlap(double overlap_, bool near_one_)
        : Error(near_one_ ? "overlap ~ 1: target is the seed observable, v = 1 is forced"
                          : "overlap ~ 0: target is orthogonal to the seed, v = 0 is forced"),
          overlap(overlap_),
          near_one(near_one_) {}
};

// Malformed textual input (scalar grammar, JSON schema).
struct ParseError : Error {
    using Error::Error;
};

// Exact arithmetic left the representable range (int64 numerators).
struct ArithmeticOverflow : Error {
    using Error::Error;
};

}  // namespace vicert
