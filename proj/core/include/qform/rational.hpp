#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace qform {

/// Exact rational scalar. All solver-facing state is kept in this type so
/// that boundary membership and event times are decidable, not approximate.
using Rat = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rat>;

/// Parses "3", "-0.5", "1e-3", "2.5e2" or "p/q" into an exact rational.
/// Throws std::invalid_argument on malformed input.
Rat parse_rational(std::string_view text);

double to_double(const Rat& value);

/// "num/den" (or just "num" for integers).
std::string fraction_string(const Rat& value);

/// Decimal approximation with enough digits to round-trip a double.
std::string decimal_string(const Rat& value);

std::vector<double> to_doubles(const RatVec& values);

}  // namespace qform
