#pragma once

// Symbolic torsion abelian groups and their classification with respect to
// co-Ext^1-universality in the class of all torsion groups (T_Z) and of
// p-groups (T_p).
//
// Boundedness depends only on exponents, never on cardinals, so "inf"
// stands for any infinite cardinal and no cardinal arithmetic is done.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uext/error.hpp"
#include "uext/expr_parser.hpp"
#include "uext/integer.hpp"

namespace uext {

/// A cardinal that is either a positive integer or "inf".
struct Multiplicity {
  bool inf = false;
  Integer n = 1;

  static Multiplicity infinite() { return {true, 0}; }
  Multiplicity& operator+=(const Multiplicity& o) {
    if (inf || o.inf) {
      inf = true;
      n = 0;
    } else {
      n += o.n;
    }
    return *this;
  }
  bool operator==(const Multiplicity&) const = default;
  std::string to_string() const { return inf ? "inf" : to_decimal(n); }
};

/// a <= b as cardinals (inf dominates every integer).
inline bool cardinal_le(const Multiplicity& a, const Multiplicity& b) {
  if (b.inf) return true;
  if (a.inf) return false;
  return a.n <= b.n;
}

struct TorsionAtom {
  // Declaration order is the normal-form order within a prime.
  enum class Kind { cyclic, prufer, unbounded, all_primes };
  Kind kind;
  Integer p;        // 0 for all_primes
  unsigned k = 0;   // exponent for cyclic

  static TorsionAtom cyclic(const Integer& p, unsigned k) { return {Kind::cyclic, p, k}; }
  static TorsionAtom prufer(const Integer& p) { return {Kind::prufer, p, 0}; }
  static TorsionAtom unbounded(const Integer& p) { return {Kind::unbounded, p, 0}; }
  static TorsionAtom all_primes() { return {Kind::all_primes, 0, 0}; }

  bool divisible() const { return kind == Kind::prufer; }

  std::string to_string() const {
    switch (kind) {
      case Kind::cyclic:
        return k == 1 ? "Z(" + to_decimal(p) + ")" : "Z(" + to_decimal(p) + "^" + std::to_string(k) + ")";
      case Kind::prufer: return "Z(" + to_decimal(p) + "^inf)";
      case Kind::unbounded: return "U(" + to_decimal(p) + ")";
      case Kind::all_primes: return "W";
    }
    return "";
  }

  // W sorts last; otherwise by prime, then kind, then descending exponent.
  auto key() const { return std::make_tuple(kind == Kind::all_primes, p, kind, -static_cast<long long>(k)); }
  bool operator<(const TorsionAtom& o) const { return key() < o.key(); }
  bool operator==(const TorsionAtom& o) const { return key() == o.key(); }
};

/// A direct sum of atoms with multiplicities, kept in normal form: atoms
/// sorted and merged.
class TorsionExpr {
 public:
  using Term = std::pair<TorsionAtom, Multiplicity>;

  TorsionExpr() = default;

  void add(const TorsionAtom& a, const Multiplicity& m) {
    auto it = terms_.find(a);
    if (it == terms_.end()) terms_.emplace(a, m);
    else it->second += m;
  }

  std::vector<Term> terms() const { return {terms_.begin(), terms_.end()}; }
  bool empty() const { return terms_.empty(); }
  bool has(const TorsionAtom& a) const { return terms_.count(a) != 0; }
  std::optional<Multiplicity> multiplicity(const TorsionAtom& a) const {
    auto it = terms_.find(a);
    if (it == terms_.end()) return std::nullopt;
    return it->second;
  }

  /// Primes named explicitly by some atom (W names none).
  std::vector<Integer> primes() const {
    std::set<Integer> ps;
    for (const auto& [a, m] : terms_)
      if (a.kind != TorsionAtom::Kind::all_primes) ps.insert(a.p);
    return {ps.begin(), ps.end()};
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [a, m] : terms_) {
      if (!s.empty()) s += "+";
      s += a.to_string();
      if (m.inf || m.n != 1) s += "^" + m.to_string();
    }
    return s;
  }

  bool operator==(const TorsionExpr& o) const { return terms() == o.terms(); }

 private:
  std::map<TorsionAtom, Multiplicity> terms_;
};

/// Torsion front end of the expression grammar. Composite Z(n) is split
/// into prime-power cyclics.
inline TorsionExpr parse_torsion(std::string_view text) {
  TorsionExpr e;
  for (const auto& t : parse_terms(text)) {
    Multiplicity m{t.mult_inf, t.mult_inf ? Integer(0) : t.mult};
    switch (t.kind) {
      case RawTerm::Kind::free:
        throw ParseError("free summand Z is not allowed in a torsion group", t.offset);
      case RawTerm::Kind::cyclic:
        if (t.n > Integer(1) << 64) throw UnsupportedInstance("cyclic order too large to split");
        for (const auto& pp : factorize(t.n)) e.add(TorsionAtom::cyclic(pp.prime, pp.exponent), m);
        break;
      case RawTerm::Kind::prime_power:
        if (t.k > 1000000) throw UnsupportedInstance("exponent too large");
        e.add(TorsionAtom::cyclic(t.n, static_cast<unsigned>(t.k)), m);
        break;
      case RawTerm::Kind::prufer: e.add(TorsionAtom::prufer(t.n), m); break;
      case RawTerm::Kind::unbounded: e.add(TorsionAtom::unbounded(t.n), m); break;
      case RawTerm::Kind::all_primes: e.add(TorsionAtom::all_primes(), m); break;
    }
  }
  return e;
}

/// The p-primary part t_p(e). W contributes one copy of Z(p) per copy of W.
inline TorsionExpr p_component(const TorsionExpr& e, const Integer& p) {
  if (!is_prime(p)) throw InvalidArgument(to_decimal(p) + " is not prime");
  TorsionExpr out;
  for (const auto& [a, m] : e.terms()) {
    if (a.kind == TorsionAtom::Kind::all_primes) out.add(TorsionAtom::cyclic(p, 1), m);
    else if (a.p == p) out.add(a, m);
  }
  return out;
}

struct DivisibleReducedSplit {
  TorsionExpr divisible, reduced;
};

inline DivisibleReducedSplit divisible_reduced_split(const TorsionExpr& e) {
  DivisibleReducedSplit s;
  for (const auto& [a, m] : e.terms()) (a.divisible() ? s.divisible : s.reduced).add(a, m);
  return s;
}

struct PrimeEntry {
  Integer p;
  TorsionExpr divisible, reduced;
  bool reduced_bounded = true;
  std::optional<Integer> bound;  // p^k annihilating the reduced part
};

struct ClassificationReport {
  std::vector<PrimeEntry> primes;  // explicit primes, ascending
  bool all_primes_cyclic = false;  // W present: every other prime carries a bounded Z(p) part
  bool verdict_tz = false;
  std::optional<Integer> witness_prime;  // least prime with unbounded reduced part
  bool cotorsion = false;
  std::optional<Integer> cotorsion_bound;

  /// Verdict in T_p, i.e. of the p-component.
  bool verdict_tp(const Integer& p) const {
    for (const auto& e : primes)
      if (e.p == p) return e.reduced_bounded;
    return true;
  }
};

namespace detail {

inline PrimeEntry prime_entry(const TorsionExpr& component, const Integer& p) {
  PrimeEntry entry;
  entry.p = p;
  auto split = divisible_reduced_split(component);
  entry.divisible = split.divisible;
  entry.reduced = split.reduced;
  unsigned k = 0;
  for (const auto& [a, m] : split.reduced.terms()) {
    if (a.kind == TorsionAtom::Kind::unbounded) entry.reduced_bounded = false;
    else k = std::max(k, a.k);
  }
  if (entry.reduced_bounded) entry.bound = ipow(p, k);
  return entry;
}

}  // namespace detail

/// A torsion group T is co-Ext^1-universal in T_Z exactly when each
/// p-primary part is divisible plus bounded; cotorsion needs one bound for
/// the whole reduced part.
inline ClassificationReport classify_torsion(const TorsionExpr& e) {
  ClassificationReport r;
  r.all_primes_cyclic = e.has(TorsionAtom::all_primes());
  r.verdict_tz = true;
  Integer total_bound = 1;
  for (const auto& p : e.primes()) {
    r.primes.push_back(detail::prime_entry(p_component(e, p), p));
    const auto& entry = r.primes.back();
    if (!entry.reduced_bounded) {
      r.verdict_tz = false;
      if (!r.witness_prime) r.witness_prime = p;
    } else {
      total_bound *= *entry.bound;
    }
  }
  r.cotorsion = r.verdict_tz && !r.all_primes_cyclic;
  if (r.cotorsion) r.cotorsion_bound = total_bound;
  return r;
}

struct CotorsionResult {
  bool cotorsion = false;
  std::optional<Integer> bound;  // exponent of the reduced part when cotorsion
  DivisibleReducedSplit decomposition;
};

inline CotorsionResult is_cotorsion(const TorsionExpr& e) {
  auto r = classify_torsion(e);
  return {r.cotorsion, r.cotorsion_bound, divisible_reduced_split(e)};
}

namespace detail {

// Exponent-threshold supplies and demands of cyclic summands at one prime;
// `covering` marks a summand that maps onto any countable p-group.
struct PrimeShape {
  std::map<unsigned, Multiplicity> cyclic;
  Multiplicity prufer{false, 0};
  bool covering = false;

  static PrimeShape of(const TorsionExpr& component) {
    PrimeShape s;
    for (const auto& [a, m] : component.terms()) {
      switch (a.kind) {
        case TorsionAtom::Kind::cyclic: s.cyclic[a.k] += m; break;
        case TorsionAtom::Kind::prufer: s.prufer += m; break;
        case TorsionAtom::Kind::unbounded: s.covering = true; break;
        case TorsionAtom::Kind::all_primes: break;
      }
    }
    return s;
  }

  Multiplicity cyclic_at_least(unsigned k) const {
    Multiplicity total{false, 0};
    for (auto it = cyclic.lower_bound(k); it != cyclic.end(); ++it) total += it->second;
    return total;
  }
};

// Each target summand needs its own source summand mapping onto it; a
// Z(p^k) source covers Z(p^j) for j <= k, Prufer covers Prufer, U(p) covers
// anything at p. With nested coverage, Hall's condition reduces to one
// inequality per exponent threshold.
inline bool prime_quotient_shape(const PrimeShape& src, const PrimeShape& dst) {
  if (src.covering) return true;
  if (dst.covering) return false;
  if (!cardinal_le(dst.prufer, src.prufer)) return false;
  for (const auto& [k, m] : dst.cyclic)
    if (!cardinal_le(dst.cyclic_at_least(k), src.cyclic_at_least(k))) return false;
  return true;
}

}  // namespace detail

/// Whether q is recognizably a quotient of e, prime by prime.
inline bool is_quotient_shape(const TorsionExpr& e, const TorsionExpr& q) {
  auto we = e.multiplicity(TorsionAtom::all_primes()).value_or(Multiplicity{false, 0});
  auto wq = q.multiplicity(TorsionAtom::all_primes()).value_or(Multiplicity{false, 0});
  // primes named by neither side only see the W parts
  if (!cardinal_le(wq, we)) return false;
  std::set<Integer> ps;
  for (const auto& p : e.primes()) ps.insert(p);
  for (const auto& p : q.primes()) ps.insert(p);
  for (const auto& p : ps)
    if (!detail::prime_quotient_shape(detail::PrimeShape::of(p_component(e, p)),
                                      detail::PrimeShape::of(p_component(q, p))))
      return false;
  return true;
}

struct QuotientCheck {
  bool source_universal = false;
  bool quotient_universal = false;
  bool consistent() const { return !source_universal || quotient_universal; }
};

/// Quotients of co-Ext^1-universal torsion groups stay universal.
inline QuotientCheck quotient_closure_check(const TorsionExpr& e, const TorsionExpr& q) {
  if (!is_quotient_shape(e, q))
    throw NotAQuotient(q.to_string() + " is not recognizably a quotient of " + e.to_string());
  return {classify_torsion(e).verdict_tz, classify_torsion(q).verdict_tz};
}

struct WitnessResult {
  Integer order;
  std::string method;  // "brute-force" or "unit-argument"
  Integer search_space;
};

inline constexpr std::uint64_t kWitnessBudget = std::uint64_t{1} << 24;

namespace detail {

// |prod_{n<=N} Z(p^n)| = p^(N(N+1)/2)
inline Integer witness_space(const Integer& p, unsigned n) { return ipow(p, n * (n + 1) / 2); }

inline void check_witness_args(const Integer& p, unsigned n) {
  if (!is_prime(p)) throw InvalidArgument(to_decimal(p) + " is not prime");
  if (n < 1) throw InvalidArgument("N must be at least 1");
}

// Order of y in Z(m) for m a power of p.
inline std::uint64_t cyclic_order(std::uint64_t y, std::uint64_t m, std::uint64_t p) {
  std::uint64_t o = m;
  while (y % p == 0 && o > 1) {
    y /= p;
    o /= p;
    if (y == 0) return 1;
  }
  return o;
}

// Walks every tuple in prod_n Z(p^n) (n = 1..N) and returns the minimal
// lcm of coordinate orders of value(n, a_n) among tuples accepted by keep.
template <class Value, class Keep>
std::uint64_t minimal_order_bruteforce(std::uint64_t p, unsigned n, Value value, Keep keep) {
  std::vector<std::uint64_t> mod(n), a(n, 0), ord(n);
  for (unsigned i = 0; i < n; ++i) mod[i] = (i == 0 ? p : mod[i - 1] * p);
  std::uint64_t best = UINT64_MAX;
  for (;;) {
    bool ok = true;
    std::uint64_t o = 1;
    for (unsigned i = 0; i < n && ok; ++i) {
      ok = keep(i, a[i], mod[i]);
      o = std::max(o, cyclic_order(value(i, a[i], mod[i]), mod[i], p));  // p-power orders: lcm is max
    }
    if (ok) best = std::min(best, o);
    unsigned i = 0;
    while (i < n && ++a[i] == mod[i]) a[i++] = 0;
    if (i == n) break;
  }
  return best;
}

template <class BruteForce>
WitnessResult run_witness(const Integer& p, unsigned n, std::uint64_t budget, bool allow_fast_path, BruteForce bf) {
  check_witness_args(p, n);
  Integer space = witness_space(p, n);
  if (space <= budget) return {Integer(bf(static_cast<std::uint64_t>(p), n)), "brute-force", space};
  if (!allow_fast_path) throw BudgetExceeded("search space " + to_decimal(space) + " exceeds budget " + std::to_string(budget));
  // 1 - p*alpha is a unit mod p^N, so the last coordinate alone has order p^N
  // and every other coordinate has order at most p^N.
  return {ipow(p, n), "unit-argument", space};
}

}  // namespace detail

/// Minimal order of x - p*alpha over alpha, x the all-ones tuple of
/// prod_{n<=N} Z(p^n).
inline WitnessResult counterexample_witness(const Integer& p, unsigned n, std::uint64_t budget = kWitnessBudget,
                                            bool allow_fast_path = true) {
  return detail::run_witness(p, n, budget, allow_fast_path, [](std::uint64_t pp, unsigned nn) {
    return detail::minimal_order_bruteforce(
        pp, nn, [pp](unsigned, std::uint64_t alpha, std::uint64_t m) { return (1 + m - (pp * alpha) % m) % m; },
        [](unsigned, std::uint64_t, std::uint64_t) { return true; });
  });
}

/// Minimal order of a preimage of the all-ones tuple under the product of
/// the reductions Z(p^n) -> Z(p), n <= N.
inline WitnessResult ab4star_failure_witness(const Integer& p, unsigned n, std::uint64_t budget = kWitnessBudget,
                                             bool allow_fast_path = true) {
  return detail::run_witness(p, n, budget, allow_fast_path, [](std::uint64_t pp, unsigned nn) {
    return detail::minimal_order_bruteforce(
        pp, nn, [](unsigned, std::uint64_t a, std::uint64_t) { return a; },
        [pp](unsigned, std::uint64_t a, std::uint64_t) { return a % pp == 1 % pp; });
  });
}

}  // namespace uext
