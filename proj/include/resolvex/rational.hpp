#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace resolvex {

// Exact rational, always normalized (lowest terms, positive denominator).
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Accepts "p/q", "p" and optional sign. Throws Error(Syntax) on bad input.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form; integers render as "p/1".
std::string to_string(const Rational& r);

double to_double(const Rational& r);

// Best rational approximation with denominator <= max_den (continued fractions).
Rational rationalize(double x, long long max_den);

}  // namespace resolvex
