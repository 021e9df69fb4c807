#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uext/error.hpp"

namespace uext {

/// Exact integer used for every matrix entry and group invariant.
using Integer = boost::multiprecision::cpp_int;

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

/// Remainder in [0, m) for m > 0. A modulus of 0 means "no reduction".
inline Integer reduce(const Integer& a, const Integer& m) {
  if (m == 0) return a;
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

/// Nearest-integer quotient a / b (b != 0); keeps elimination remainders small.
inline Integer round_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  Integer r = a - q * b;
  if (2 * abs(r) > abs(b)) {
    if ((r < 0) == (b < 0))
      ++q;
    else
      --q;
  }
  return q;
}

struct Bezout {
  Integer g, s, t;  // s*a + t*b == g >= 0
};

inline Bezout extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

inline std::string to_decimal(const Integer& a) { return a.str(); }

inline Integer parse_decimal(std::string_view text) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) throw InvalidArgument("empty integer literal");
  for (std::size_t k = i; k < text.size(); ++k) {
    if (text[k] < '0' || text[k] > '9')
      throw InvalidArgument("invalid integer literal '" + std::string(text) + "'");
  }
  return Integer(std::string(text));
}

inline Integer ipow(const Integer& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  if (n < 1000000) {
    for (Integer d = 3; d * d <= n; d += 2)
      if (n % d == 0) return false;
    return true;
  }
  std::mt19937_64 gen(0x5eed);
  return boost::multiprecision::miller_rabin_test(n, 32, gen);
}

/// p-adic valuation of a nonzero integer.
inline unsigned valuation(Integer n, const Integer& p) {
  unsigned v = 0;
  n = abs(n);
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

struct PrimePower {
  Integer prime;
  unsigned exponent;
};

/// Factorization by trial division. Cofactors above the trial bound must be
/// prime, otherwise the number is rejected as too hard to split.
inline std::vector<PrimePower> factorize(Integer n) {
  if (n <= 0) throw InvalidArgument("factorize expects a positive integer");
  std::vector<PrimePower> out;
  const Integer bound = 10000000;
  for (Integer d = 2; d * d <= n && d <= bound; d += (d == 2 ? 1 : 2)) {
    if (n % d != 0) continue;
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.push_back({d, e});
  }
  if (n > 1) {
    if (!is_prime(n))
      throw UnsupportedInstance("cannot factor " + to_decimal(n) + " by trial division");
    out.push_back({n, 1});
  }
  return out;
}

inline std::size_t to_size(const Integer& a) {
  if (a < 0 || a > Integer(std::numeric_limits<std::size_t>::max()))
    throw UnsupportedInstance("integer " + to_decimal(a) + " does not fit a machine size");
  return static_cast<std::size_t>(a);
}

}  // namespace uext
