#pragma once

// Brute-force ground truth for small groups. Nothing here calls the Smith
// normal form code: groups are split into primary cyclic factors, elements are
// explicit tuples, and Ext is counted from 2-cocycles with a separate
// elimination over Z/p^k.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "uext/hom_ext.hpp"

namespace uext::oracle {

using u64 = std::uint64_t;

/// Z(m_1) + ... + Z(m_n) with explicit elements; m_i == 0 marks a free
/// generator (allowed only as the source of enumerate_homs).
class ConcreteGroup {
 public:
  ConcreteGroup() = default;
  explicit ConcreteGroup(std::vector<u64> moduli) : moduli_(std::move(moduli)) {
    for (u64 m : moduli_)
      if (m == 1) throw InvalidArgument("trivial cyclic factor");
  }

  /// Primary decomposition of a canonical group, so the oracle never reuses
  /// the invariant-factor basis.
  static ConcreteGroup from(const FinGenAb& g) {
    std::vector<u64> m;
    for (const auto& d : g.factors())
      for (const auto& [p, e] : factorize(d)) m.push_back(static_cast<u64>(ipow(p, e)));
    for (std::size_t i = 0; i < g.rank(); ++i) m.push_back(0);
    return ConcreteGroup(std::move(m));
  }

  const std::vector<u64>& moduli() const noexcept { return moduli_; }
  std::size_t generators() const noexcept { return moduli_.size(); }
  bool is_finite() const {
    for (u64 m : moduli_)
      if (m == 0) return false;
    return true;
  }

  u64 order() const {
    if (!is_finite()) throw InvalidArgument("infinite group has no element list");
    u64 o = 1;
    for (u64 m : moduli_) o *= m;
    return o;
  }

  using Element = std::vector<u64>;

  Element element(u64 index) const {
    Element x(moduli_.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = index % moduli_[i];
      index /= moduli_[i];
    }
    return x;
  }

  u64 index(const Element& x) const {
    u64 idx = 0;
    for (std::size_t i = x.size(); i-- > 0;) idx = idx * moduli_[i] + x[i];
    return idx;
  }

  Element add(const Element& a, const Element& b) const {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = (a[i] + b[i]) % moduli_[i];
    return c;
  }

  Element neg(const Element& a) const {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = (moduli_[i] - a[i]) % moduli_[i];
    return c;
  }

  Element times(const Element& a, u64 k) const {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = (a[i] * (k % moduli_[i])) % moduli_[i];
    return c;
  }

  bool is_zero(const Element& a) const {
    for (u64 v : a)
      if (v != 0) return false;
    return true;
  }

  /// Lookup tables for addition on element indices.
  std::vector<u64> addition_table() const {
    const u64 n = order();
    std::vector<u64> t(n * n);
    for (u64 a = 0; a < n; ++a)
      for (u64 b = 0; b < n; ++b) t[a * n + b] = index(add(element(a), element(b)));
    return t;
  }

  /// Number of elements x with k x = 0, for k = 1, 2, ..., order. Two finite
  /// abelian groups are isomorphic exactly when these counts agree.
  std::vector<u64> order_profile() const {
    const u64 n = order();
    std::vector<u64> profile(n + 1);
    for (u64 k = 1; k <= n; ++k)
      for (u64 x = 0; x < n; ++x)
        if (is_zero(times(element(x), k))) ++profile[k];
    return profile;
  }

 private:
  std::vector<u64> moduli_;
};

inline u64 default_budget() { return u64{1} << 20; }

/// A homomorphism given by the images of the generators of its source.
using HomImages = std::vector<ConcreteGroup::Element>;

/// Every homomorphism A -> B: each generator of order m goes to an element y
/// with m y = 0, each free generator anywhere.
inline std::vector<HomImages> enumerate_homs(const ConcreteGroup& a, const ConcreteGroup& b, u64 budget = default_budget()) {
  const u64 nb = b.order();
  u64 candidates = 1;
  for (std::size_t i = 0; i < a.generators(); ++i) {
    if (candidates > budget / nb) throw BudgetExceeded("enumerate_homs: search space exceeds budget");
    candidates *= nb;
  }
  std::vector<HomImages> out;
  for (u64 c = 0; c < candidates; ++c) {
    HomImages images(a.generators());
    u64 rest = c;
    bool ok = true;
    for (std::size_t i = 0; i < a.generators() && ok; ++i) {
      images[i] = b.element(rest % nb);
      rest /= nb;
      const u64 m = a.moduli()[i];
      if (m != 0) ok = b.is_zero(b.times(images[i], m));
    }
    if (ok) out.push_back(std::move(images));
  }
  return out;
}

inline u64 count_homs(const FinGenAb& a, const FinGenAb& b, u64 budget = default_budget()) {
  return enumerate_homs(ConcreteGroup::from(a), ConcreteGroup::from(b), budget).size();
}

namespace detail {

inline u64 pow_u64(u64 b, unsigned e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

/// Number of solutions of M x = 0 over Z/p^k, by diagonalizing M with
/// row and column operations over the local ring.
inline Integer count_kernel_mod_prime_power(std::vector<std::vector<u64>> m, std::size_t vars, u64 p, unsigned k) {
  const u64 q = pow_u64(p, k);
  auto val = [&](u64 x) {
    unsigned v = 0;
    while (x != 0 && x % p == 0 && v < k) {
      x /= p;
      ++v;
    }
    return x == 0 ? k : v;
  };
  auto inverse = [&](u64 u) {  // u a unit mod q
    for (u64 x = 1; x < q; ++x)
      if ((u * x) % q == 1) return x;
    return u64{1};
  };
  const std::size_t rows = m.size();
  Integer count = 1;
  std::vector<bool> row_used(rows, false), col_used(vars, false);
  while (true) {
    // pivot of least valuation among unused rows/columns
    unsigned best = k;
    std::size_t pr = 0, pc = 0;
    for (std::size_t i = 0; i < rows && best > 0; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < vars; ++j) {
        if (col_used[j] || m[i][j] == 0) continue;
        unsigned v = val(m[i][j]);
        if (v < best) {
          best = v;
          pr = i;
          pc = j;
          if (v == 0) break;
        }
      }
    }
    if (best == k) break;
    const u64 pv = pow_u64(p, best);
    const u64 unit_inv = inverse((m[pr][pc] / pv) % q);
    // clear column pc in other rows: every entry there is divisible by p^best
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == pr || row_used[i] || m[i][pc] == 0) continue;
      const u64 factor = ((m[i][pc] / pv) % q) * unit_inv % q;
      for (std::size_t j = 0; j < vars; ++j)
        if (m[pr][j] != 0) m[i][j] = (m[i][j] + q - (factor * m[pr][j]) % q) % q;
    }
    // Column operations would now clear the rest of the pivot row without
    // touching other rows, leaving p^best x = 0: p^best solutions.
    row_used[pr] = true;
    col_used[pc] = true;
    count *= pv;
  }
  for (std::size_t j = 0; j < vars; ++j)
    if (!col_used[j]) count *= q;
  return count;
}

}  // namespace detail

/// |Z(A, C)| for C = Z(p^k): symmetric normalized 2-cocycles A x A -> C.
inline Integer count_symmetric_cocycles(const ConcreteGroup& a, u64 p, unsigned k, u64 budget = default_budget()) {
  const u64 n = a.order();
  const u64 q = detail::pow_u64(p, k);
  if (n * n * n > budget) throw BudgetExceeded("ext_by_cocycles: cocycle system exceeds budget");
  auto table = a.addition_table();
  // one variable per unordered pair {x, y} of nonzero elements
  std::vector<std::vector<std::size_t>> var(n, std::vector<std::size_t>(n, SIZE_MAX));
  std::size_t vars = 0;
  for (u64 x = 1; x < n; ++x)
    for (u64 y = x; y < n; ++y) var[x][y] = var[y][x] = vars++;
  std::vector<std::vector<u64>> rows;
  // f(x, y) + f(x + y, z) = f(y, z) + f(x, y + z)
  for (u64 x = 1; x < n; ++x)
    for (u64 y = 1; y < n; ++y)
      for (u64 z = 1; z < n; ++z) {
        std::vector<u64> row(vars, 0);
        auto add = [&](u64 s, u64 t, u64 coeff) {
          if (s == 0 || t == 0) return;
          auto& c = row[var[s][t]];
          c = (c + coeff) % q;
        };
        add(x, y, 1);
        add(table[x * n + y], z, 1);
        add(y, z, q - 1);
        add(x, table[y * n + z], q - 1);
        bool nonzero = false;
        for (u64 c : row) nonzero = nonzero || c != 0;
        if (nonzero) rows.push_back(std::move(row));
      }
  return detail::count_kernel_mod_prime_power(std::move(rows), vars, p, k);
}

struct CocycleCount {
  Integer order;                                    // |Ext^1(A, B)|
  std::vector<std::pair<u64, Integer>> components;  // (p^k component of B, its Ext order)
};

/// |Ext^1(A, B)| = prod over cyclic components C of B of
/// |Z_sym(A, C)| * |Hom(A, C)| / |C|^(|A| - 1).
inline CocycleCount ext_by_cocycles(const FinGenAb& a, const FinGenAb& b, u64 budget = default_budget()) {
  if (!a.is_finite() || !b.is_finite()) throw UnsupportedInstance("cocycle oracle needs finite groups");
  ConcreteGroup ca = ConcreteGroup::from(a), cb = ConcreteGroup::from(b);
  CocycleCount out{1, {}};
  const u64 n = ca.order();
  for (u64 q : cb.moduli()) {
    u64 p = 2;
    while (q % p != 0) ++p;
    unsigned k = 0;
    for (u64 t = q; t > 1; t /= p) ++k;
    Integer z = count_symmetric_cocycles(ca, p, k, budget);
    Integer homs = enumerate_homs(ca, ConcreteGroup({q}), budget).size();
    // coboundaries: normalized functions A -> C modulo homomorphisms
    Integer num = z * homs, den = ipow(Integer(q), static_cast<unsigned>(n - 1));
    if (num % den != 0 || num == 0) throw InternalInconsistency("cocycle count is not divisible by coboundaries");
    num /= den;
    out.components.push_back({q, num});
    out.order *= num;
  }
  return out;
}

/// Symmetric normalized cocycle stored on all ordered pairs (index x * |A| + y).
using Cocycle = std::vector<u64>;

/// One cocycle per extension class, by exhaustive enumeration (tiny cases).
/// Values live in the primary decomposition of B.
inline std::vector<Cocycle> ext_representatives(const FinGenAb& a, const FinGenAb& b, u64 budget = u64{1} << 22) {
  ConcreteGroup ca = ConcreteGroup::from(a), cb = ConcreteGroup::from(b);
  const u64 n = ca.order(), nb = cb.order();
  auto ta = ca.addition_table(), tb = cb.addition_table();
  std::vector<std::pair<u64, u64>> pairs;
  for (u64 x = 1; x < n; ++x)
    for (u64 y = x; y < n; ++y) pairs.push_back({x, y});
  u64 total = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (total > budget / nb) throw BudgetExceeded("ext_representatives: cocycle space exceeds budget");
    total *= nb;
  }
  u64 cob = 1;
  for (u64 i = 1; i < n; ++i) {
    if (cob > budget / nb) throw BudgetExceeded("ext_representatives: coboundary space exceeds budget");
    cob *= nb;
  }
  auto neg = [&](u64 v) { return cb.index(cb.neg(cb.element(v))); };
  // all coboundaries (phi(x) + phi(y) - phi(x + y))
  std::vector<Cocycle> coboundaries;
  for (u64 c = 0; c < cob; ++c) {
    std::vector<u64> phi(n, 0);
    u64 rest = c;
    for (u64 x = 1; x < n; ++x) {
      phi[x] = rest % nb;
      rest /= nb;
    }
    Cocycle f(n * n);
    for (u64 x = 0; x < n; ++x)
      for (u64 y = 0; y < n; ++y) f[x * n + y] = tb[tb[phi[x] * nb + phi[y]] * nb + neg(phi[ta[x * n + y]])];
    coboundaries.push_back(std::move(f));
  }
  std::vector<Cocycle> reps;
  std::map<Cocycle, bool> covered;
  for (u64 c = 0; c < total; ++c) {
    Cocycle f(n * n, 0);
    u64 rest = c;
    for (auto [x, y] : pairs) {
      f[x * n + y] = f[y * n + x] = rest % nb;
      rest /= nb;
    }
    bool cocycle = true;
    for (u64 x = 1; x < n && cocycle; ++x)
      for (u64 y = 1; y < n && cocycle; ++y)
        for (u64 z = 1; z < n && cocycle; ++z) {
          u64 lhs = tb[f[x * n + y] * nb + f[ta[x * n + y] * n + z]];
          u64 rhs = tb[f[y * n + z] * nb + f[x * n + ta[y * n + z]]];
          cocycle = lhs == rhs;
        }
    if (!cocycle || covered.count(f)) continue;
    for (const auto& cbd : coboundaries) {
      Cocycle g(n * n);
      for (u64 i = 0; i < n * n; ++i) g[i] = tb[f[i] * nb + cbd[i]];
      covered[g] = true;
    }
    reps.push_back(std::move(f));
  }
  return reps;
}

/// Middle group B x A with (b, a) + (b', a') = (b + b' + f(a, a'), a + a'),
/// summarized by its order profile.
inline std::vector<u64> cocycle_middle_profile(const FinGenAb& a, const FinGenAb& b, const Cocycle& f) {
  ConcreteGroup ca = ConcreteGroup::from(a), cb = ConcreteGroup::from(b);
  const u64 n = ca.order(), nb = cb.order(), total = n * nb;
  auto ta = ca.addition_table(), tb = cb.addition_table();
  auto add = [&](u64 u, u64 v) {
    u64 bu = u % nb, au = u / nb, bv = v % nb, av = v / nb;
    u64 bs = tb[tb[bu * nb + bv] * nb + f[au * n + av]];
    return ta[au * n + av] * nb + bs;
  };
  std::vector<u64> profile(total + 1);
  for (u64 k = 1; k <= total; ++k)
    for (u64 x = 0; x < total; ++x) {
      u64 acc = 0;
      for (u64 i = 0; i < k; ++i) acc = add(acc, x);
      if (acc == 0) ++profile[k];
    }
  return profile;
}

inline std::vector<u64> order_profile(const FinGenAb& g) { return ConcreteGroup::from(g).order_profile(); }

/// Searches every middle map phi with phi o f1 = f2 and g2 o phi = g1. Each
/// generator image is confined to a coset of f2(B), so the search has
/// |B|^(generators of E1) candidates.
inline bool ses_equivalent_bruteforce(const ShortExactSeq& s1, const ShortExactSeq& s2, u64 budget = default_budget()) {
  if (!(s1.sub() == s2.sub()) || !(s1.quotient() == s2.quotient())) return false;
  const FinGenAb& e1 = s1.middle();
  const FinGenAb& e2 = s2.middle();
  if (!e1.is_finite() || !e2.is_finite()) throw UnsupportedInstance("brute-force equivalence needs finite middles");
  if (e2.order() > 4096) throw BudgetExceeded("brute-force equivalence: middle order above 2^12");
  const FinGenAb& b = s1.sub();
  auto b_elems = [&] {
    std::vector<std::vector<Integer>> out;
    std::vector<Integer> x(b.generator_count());
    while (true) {
      out.push_back(x);
      std::size_t k = 0;
      while (k < x.size() && ++x[k] == b.modulus(k)) x[k++] = 0;
      if (k == x.size()) return out;
    }
  }();
  // one element of E2 over each g1(e1_i): scan E2 directly
  const std::size_t n1 = e1.generator_count();
  std::vector<std::vector<Integer>> base(n1);
  {
    std::vector<Integer> y(e2.generator_count());
    std::vector<bool> found(n1, false);
    std::size_t remaining = n1;
    while (remaining > 0) {
      auto gy = s2.g()(y);
      for (std::size_t i = 0; i < n1; ++i)
        if (!found[i] && gy == s1.g().image_of_generator(i)) {
          found[i] = true;
          base[i] = y;
          --remaining;
        }
      std::size_t k = 0;
      while (k < y.size() && ++y[k] == e2.modulus(k)) y[k++] = 0;
      if (k == y.size()) break;
    }
    if (remaining > 0) return false;
  }
  u64 candidates = 1;
  for (std::size_t i = 0; i < n1; ++i) {
    if (candidates > budget / b_elems.size()) throw BudgetExceeded("brute-force equivalence: search exceeds budget");
    candidates *= b_elems.size();
  }
  for (u64 c = 0; c < candidates; ++c) {
    IntMatrix phi(e2.generator_count(), n1);
    u64 rest = c;
    for (std::size_t i = 0; i < n1; ++i) {
      auto shift = s2.f()(b_elems[rest % b_elems.size()]);
      rest /= b_elems.size();
      for (std::size_t k = 0; k < shift.size(); ++k) phi.set(k, i, base[i][k] + shift[k]);
    }
    bool defined = true;
    for (std::size_t i = 0; i < e1.torsion_count() && defined; ++i)
      for (std::size_t k = 0; k < e2.generator_count() && defined; ++k)
        defined = reduce(phi.at(k, i) * e1.modulus(i), e2.modulus(k)) == 0;
    if (!defined) continue;
    AbMap m(e1, e2, phi);
    if (compose(m, s1.f()) == s2.f()) return true;
  }
  return false;
}

}  // namespace uext::oracle
