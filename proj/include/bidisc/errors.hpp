#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bidisc {

// Malformed input text; offset() is the byte position of the offending character.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what + " (at byte " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_ = 0;
};

// A value violated a domain constraint (point outside the disc, nonpositive radius, ...).
class RangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluation hit a denominator below the pole threshold.
class PoleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sampled sequence did not stabilize well enough to trust the estimate.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An orbit or probe finished its budget without reaching a classifiable state.
class IndeterminateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Slice probes split between interior fixed points and boundary Wolff points.
class InconsistentSlices : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The composed dilatation coefficients failed the product identity check.
class ProductIdentityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Newton continuation along a fixed-point curve stalled.
class ContinuationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The map failed the self-map audit and was rejected.
class AuditFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bidisc
