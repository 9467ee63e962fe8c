#pragma once

// Exact rational scalars. All coefficient sequences live here: arithmetic is
// GMP mpq, so no rounding can occur anywhere in the exact layer. Values are
// kept canonical (coprime numerator/denominator, denominator > 0), which makes
// operator== a genuine equality test.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace eseries {

using Rational = mpq_class;
using Integer = mpz_class;

// n! as an exact integer.
Integer factorial(unsigned long n);

// Parses "p", "-p" or "p/q" (decimal digits) into canonical form.
// Throws std::invalid_argument on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

// Serializes canonically: "p" when the denominator is 1, else "p/q".
std::string to_string(const Rational& q);

inline bool is_canonical(const Rational& q) {
    if (sgn(q.get_den()) <= 0) return false;
    Integer g;
    mpz_gcd(g.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return g == 1;
}

}  // namespace eseries
