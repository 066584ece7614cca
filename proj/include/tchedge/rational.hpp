#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace tchedge {

// Every scalar in the engine is an exact rational. GMP keeps arithmetic
// canonical (lowest terms, positive denominator) and fast enough for desk
// scale.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

/// Parses "p/q", "p", or a finite decimal such as "-0.125", exactly.
/// Throws InputError on anything else (including q == 0).
Rat parse_rat(std::string_view text);

/// Canonical text form: "p/q", or just "p" when the denominator is 1.
std::string rat_to_string(const Rat& value);

/// Parses a comma-separated vector of rationals, e.g. "1/6,0".
std::vector<Rat> parse_rat_vector(std::string_view text);

std::string vector_to_string(const std::vector<Rat>& values);

}  // namespace tchedge
