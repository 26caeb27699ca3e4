#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace minap {

using Integer = mpz_class;
using Rational = mpq_class;

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
Integer ipow(const Integer& base, unsigned long exp);

// Least nonnegative residue; modulus 0 means no reduction.
Integer mod_floor(const Integer& a, const Integer& m);

bool is_prime(const Integer& n);

// Prime factorization by trial division, primes ascending.
std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n);

// Largest e with p^e | n (n != 0).
unsigned valuation(const Integer& n, const Integer& p);

// Returns e when n = p^e with e >= 0, nullopt otherwise.
std::optional<unsigned> log_exact(const Integer& n, const Integer& p);

// Fractional part in [0, 1), canonicalized.
Rational frac(const Rational& q);

std::optional<std::int64_t> to_i64(const Integer& n);
std::int64_t to_i64_checked(const Integer& n);

std::string to_string(const Integer& n);
std::string to_string(const Rational& q);

// Parse "a" or "a/b" exactly.
Rational parse_rational(const std::string& text);

}  // namespace minap
