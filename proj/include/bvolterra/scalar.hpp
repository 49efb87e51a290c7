#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace bvolterra {

/// Exact rational, always canonical (lowest terms, positive denominator).
using Scalar = mpq_class;

/// Parses "p/q" or "p" with optional leading sign. Throws ParseError on
/// malformed text or a zero denominator.
Scalar parse_scalar(std::string_view text);

/// Canonical text form: "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Scalar& value);

inline bool is_zero(const Scalar& value) { return sgn(value) == 0; }

}  // namespace bvolterra
