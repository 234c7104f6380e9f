#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coalgmin {

/// Base class of every error thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input violates a structural invariant (bad labels, bad weight sign, ...).
struct validation_error : error {
    using error::error;

    /// Pins the complaint to one named state of the offending document.
    validation_error(const std::string& state, const std::string& reason)
        : error("state \"" + state + "\": " + reason) {}
};

/// A map expected to be surjective is not.
struct not_surjective : error {
    using error::error;
};

/// A map expected to be injective is not.
struct not_injective : error {
    using error::error;
};

/// The square handed to the diagonal fill-in does not commute.
struct square_does_not_commute : error {
    using error::error;
};

/// Injections passed to an intersection do not share a codomain.
struct mixed_codomains : error {
    using error::error;
};

/// Partitions passed to a join do not share a carrier.
struct mixed_carriers : error {
    using error::error;
};

/// Maps or structures over incompatible carriers.
struct carrier_mismatch : error {
    using error::error;
};

/// Two coalgebras built for different signature functors.
struct spec_mismatch : error {
    using error::error;
};

/// A value refers to a state index outside its carrier.
struct state_out_of_range : error {
    using error::error;
};

/// The map of a homomorphism record failed verification.
struct not_a_homomorphism : error {
    using error::error;
};

/// An operation is only defined for a different functor kind.
struct wrong_functor : error {
    using error::error;
};

/// A brute-force oracle was asked to enumerate beyond its size bound.
struct too_large : error {
    using error::error;
};

/// An operation requiring a complete unravelling got a truncated one.
struct incomplete_unravelling : error {
    using error::error;
};

/// Malformed input text; carries the position of the offending token.
struct parse_error : error {
    std::size_t line;
    std::size_t column;

    parse_error(std::size_t line_, std::size_t column_, const std::string& reason)
        : error("parse error at " + std::to_string(line_) + ":" + std::to_string(column_) +
                ": " + reason),
          line(line_),
          column(column_) {}
};

/// A broken internal invariant; callers report these as bugs, not bad input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

namespace detail {

inline void require(bool condition, const char* what) {
    if (!condition)
        throw internal_error(what);
}

} // namespace detail

} // namespace coalgmin
