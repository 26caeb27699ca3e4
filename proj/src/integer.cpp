#include "minap/integer.hpp"

#include <limits>

#include "minap/error.hpp"

namespace minap {

Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer ipow(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

Integer mod_floor(const Integer& a, const Integer& m) {
  if (m == 0) return a;
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (r < 0) r += abs(m);
  return r;
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n) {
  std::vector<std::pair<Integer, unsigned>> out;
  Integer m = abs(n);
  if (m < 2) return out;
  for (Integer p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

unsigned valuation(const Integer& n, const Integer& p) {
  if (n == 0) throw Error(ErrorCode::OutOfRange, "valuation of zero");
  unsigned e = 0;
  Integer m = n;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  return e;
}

std::optional<unsigned> log_exact(const Integer& n, const Integer& p) {
  if (n < 1 || p < 2) return std::nullopt;
  unsigned e = 0;
  Integer m = n;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  if (m != 1) return std::nullopt;
  return e;
}

Rational frac(const Rational& q) {
  Integer num = q.get_num();
  Integer den = q.get_den();
  Rational r(mod_floor(num, den), den);
  r.canonicalize();
  return r;
}

std::optional<std::int64_t> to_i64(const Integer& n) {
  if (!n.fits_slong_p()) return std::nullopt;
  return static_cast<std::int64_t>(n.get_si());
}

std::int64_t to_i64_checked(const Integer& n) {
  auto v = to_i64(n);
  if (!v) throw Error(ErrorCode::OutOfRange, "integer does not fit in 64 bits: " + n.get_str());
  return *v;
}

std::string to_string(const Integer& n) { return n.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0) {
    throw Error(ErrorCode::InvalidSpec, "not a rational number: '" + text + "'");
  }
  if (q.get_den() == 0) throw Error(ErrorCode::InvalidSpec, "zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

}  // namespace minap
