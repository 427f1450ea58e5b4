#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace facmech {

// All model arithmetic is exact. Rat keeps a canonical reduced form with a
// positive denominator, so == and < compare true values; no verdict in this
// library ever depends on floating point.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat rat(long long num, long long den = 1) { return Rat(num, den); }

// Accepts "num/den", an integer, or an exact decimal such as "0.25".
// Returns nullopt on malformed input or a zero denominator.
std::optional<Rat> parse_rational(const std::string& text);

// Serializes as "num/den" with the denominator always present ("3/2", "2/1").
std::string to_fraction_string(const Rat& value);

double to_double(const Rat& value);

Rat abs_diff(const Rat& a, const Rat& b);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace facmech
