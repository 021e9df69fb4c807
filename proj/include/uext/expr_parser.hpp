#pragma once

// Group expressions such as "Z(8)+Z(2)^3", "Z(3^inf)+U(3)", "W", "Z^2+Z(6)".
//
//   expr  := term ("+" term)* | "0"
//   term  := atom ("^" mult)?
//   atom  := "Z(" p "^" k ")" | "Z(" p "^inf)" | "Z(" n ")" | "U(" p ")" | "W" | "Z"
//   mult  := nat | "inf"
//
// Whitespace between tokens is ignored. The parser only produces raw terms;
// torsion and finite-group front ends decide which atoms they accept.

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uext/error.hpp"
#include "uext/group.hpp"
#include "uext/integer.hpp"

namespace uext {

struct RawTerm {
  enum class Kind { cyclic, prime_power, prufer, unbounded, all_primes, free };
  Kind kind;
  Integer n;        // modulus for cyclic, prime otherwise
  Integer k = 1;    // exponent for prime_power
  bool mult_inf = false;
  Integer mult = 1;
  std::size_t offset = 0;
};

namespace detail {

class ExprLexer {
 public:
  explicit ExprLexer(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool at_end() {
    skip_ws();
    return i_ >= s_.size();
  }
  std::size_t pos() {
    skip_ws();
    return i_;
  }
  bool accept(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  bool accept_word(std::string_view w) {
    skip_ws();
    if (s_.substr(i_, w.size()) == w) {
      i_ += w.size();
      return true;
    }
    return false;
  }
  void expect(char c) {
    std::size_t at = pos();
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", at);
  }
  Integer natural() {
    std::size_t at = pos();
    std::size_t j = i_;
    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    if (j == i_) throw ParseError("expected a natural number", at);
    Integer v = parse_decimal(s_.substr(i_, j - i_));
    i_ = j;
    return v;
  }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

inline void require_prime(const Integer& p, std::size_t at) {
  if (!is_prime(p)) throw ParseError("'" + to_decimal(p) + "' is not prime", at);
}

inline RawTerm parse_atom(ExprLexer& lx) {
  RawTerm t;
  t.offset = lx.pos();
  if (lx.accept('W')) {
    t.kind = RawTerm::Kind::all_primes;
    return t;
  }
  if (lx.accept('U')) {
    lx.expect('(');
    std::size_t at = lx.pos();
    t.n = lx.natural();
    require_prime(t.n, at);
    lx.expect(')');
    t.kind = RawTerm::Kind::unbounded;
    return t;
  }
  if (!lx.accept('Z')) throw ParseError("expected an atom (Z, Z(..), U(..) or W)", t.offset);
  if (!lx.accept('(')) {
    t.kind = RawTerm::Kind::free;
    return t;
  }
  std::size_t at = lx.pos();
  t.n = lx.natural();
  if (lx.accept('^')) {
    require_prime(t.n, at);
    if (lx.accept_word("inf")) {
      t.kind = RawTerm::Kind::prufer;
    } else {
      std::size_t kat = lx.pos();
      t.k = lx.natural();
      if (t.k == 0) throw ParseError("exponent must be at least 1", kat);
      t.kind = RawTerm::Kind::prime_power;
    }
  } else {
    if (t.n == 0) throw ParseError("cyclic order must be positive", at);
    t.kind = RawTerm::Kind::cyclic;
  }
  lx.expect(')');
  return t;
}

}  // namespace detail

inline std::vector<RawTerm> parse_terms(std::string_view text) {
  detail::ExprLexer lx(text);
  std::vector<RawTerm> out;
  if (lx.at_end()) throw ParseError("empty expression", lx.pos());
  if (lx.peek() == '0') {
    lx.accept('0');
    if (!lx.at_end()) throw ParseError("unexpected input after '0'", lx.pos());
    return out;
  }
  for (;;) {
    RawTerm t = detail::parse_atom(lx);
    if (lx.accept('^')) {
      if (lx.accept_word("inf")) {
        t.mult_inf = true;
      } else {
        std::size_t at = lx.pos();
        t.mult = lx.natural();
        if (t.mult == 0) throw ParseError("multiplicity must be at least 1", at);
      }
    }
    out.push_back(std::move(t));
    if (lx.at_end()) break;
    if (!lx.accept('+')) throw ParseError("expected '+' or end of input", lx.pos());
  }
  return out;
}

/// Finite-group front end: free parts allowed, infinite atoms rejected.
inline FinGenAb parse_group(std::string_view text) {
  std::size_t rank = 0;
  std::vector<Integer> moduli;
  for (const auto& t : parse_terms(text)) {
    if (t.mult_inf) throw ParseError("infinite multiplicity in a finitely generated group", t.offset);
    if (t.mult > 4096) throw UnsupportedInstance("multiplicity too large for an explicit group");
    std::size_t m = to_size(t.mult);
    switch (t.kind) {
      case RawTerm::Kind::free: rank += m; break;
      case RawTerm::Kind::cyclic:
        for (std::size_t i = 0; i < m; ++i) moduli.push_back(t.n);
        break;
      case RawTerm::Kind::prime_power:
        for (std::size_t i = 0; i < m; ++i) moduli.push_back(ipow(t.n, static_cast<unsigned>(t.k)));
        break;
      default: throw ParseError("not a finitely generated group", t.offset);
    }
  }
  FinGenAb torsion = canonicalize_cyclic_sum(moduli, false).group;
  return FinGenAb(rank, torsion.factors());
}

}  // namespace uext
