#pragma once

#include <gmpxx.h>

#include <string>

namespace inducibility {

using BigInt = mpz_class;
using Rational = mpq_class;

// Binomial coefficient C(n, k); zero for k < 0 or k > n.
BigInt binomial(long n, long k);
BigInt binomial(const BigInt& n, long k);

// Reduced fraction a/b. Throws std::invalid_argument for b == 0.
Rational make_rational(const BigInt& num, const BigInt& den);

// Decimal rendering of a rational, rounded half-to-even to `digits` places
// after the point, trailing zeros trimmed (e.g. 0.248640 -> "0.24864").
std::string decimal_string(const Rational& value, int digits);

}  // namespace inducibility
