#pragma once

#include <stdexcept>
#include <string>

namespace maxsum {

/// Malformed input: non-finite coordinates, coincident foci, bad matchings.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration refused because the instance is too large.
class OracleLimitExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A numerical contract did not hold at the configured tolerance.
class ToleranceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace maxsum
