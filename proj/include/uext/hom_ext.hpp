#pragma once

// Hom and Ext^1 of finitely generated abelian groups.
//
// Ext^1(A, B) is computed against the canonical free resolution
//   0 -> Z^k --diag(d)--> Z^k + Z^r -> A -> 0,
// which identifies it with the sum over the torsion generators j of A of
// B / d_j B. A class is stored as one element of B / d_j B per j ("raw
// coordinates"), so the Baer sum is coordinatewise addition.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "uext/constructions.hpp"
#include "uext/group.hpp"

namespace uext {

/// Moduli of the raw Ext coordinates of (quotient A, sub B): entry (j, l) is
/// gcd(d_j, t_l), or d_j when generator l of B is free.
inline std::vector<Integer> ext_coordinate_moduli(const FinGenAb& quotient, const FinGenAb& sub) {
  std::vector<Integer> m;
  m.reserve(quotient.torsion_count() * sub.generator_count());
  for (std::size_t j = 0; j < quotient.torsion_count(); ++j) {
    const Integer& d = quotient.modulus(j);
    for (std::size_t l = 0; l < sub.generator_count(); ++l) {
      const Integer& t = sub.modulus(l);
      m.push_back(t == 0 ? d : gcd(d, t));
    }
  }
  return m;
}

/// An element of Ext^1(quotient, sub) in normal form.
class ExtClass {
 public:
  ExtClass() = default;
  ExtClass(FinGenAb quotient, FinGenAb sub, std::vector<Integer> coords)
      : quotient_(std::move(quotient)), sub_(std::move(sub)), coords_(std::move(coords)) {
    auto m = ext_coordinate_moduli(quotient_, sub_);
    if (coords_.size() != m.size()) throw DimensionMismatch("extension class has the wrong number of coordinates");
    for (std::size_t i = 0; i < m.size(); ++i) coords_[i] = reduce(coords_[i], m[i]);
  }

  static ExtClass split(const FinGenAb& quotient, const FinGenAb& sub) {
    return ExtClass(quotient, sub, std::vector<Integer>(quotient.torsion_count() * sub.generator_count()));
  }

  const FinGenAb& quotient() const noexcept { return quotient_; }
  const FinGenAb& sub() const noexcept { return sub_; }
  const std::vector<Integer>& coords() const noexcept { return coords_; }

  /// Coordinate vector in B attached to torsion generator j of the quotient.
  std::vector<Integer> component(std::size_t j) const {
    const std::size_t n = sub_.generator_count();
    return {coords_.begin() + static_cast<std::ptrdiff_t>(j * n),
            coords_.begin() + static_cast<std::ptrdiff_t>((j + 1) * n)};
  }

  bool is_split() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Integer& x) { return x == 0; });
  }

  bool operator==(const ExtClass&) const = default;

 private:
  FinGenAb quotient_;
  FinGenAb sub_;
  std::vector<Integer> coords_;
};

/// Hom(A, B) as a direct sum of cyclic pieces, one per generator pair.
class HomGroup {
 public:
  HomGroup(FinGenAb source, FinGenAb target) : source_(std::move(source)), target_(std::move(target)) {
    std::vector<Integer> orders;
    for (std::size_t i = 0; i < source_.generator_count(); ++i) {
      const Integer& s = source_.modulus(i);
      for (std::size_t j = 0; j < target_.generator_count(); ++j) {
        const Integer& t = target_.modulus(j);
        Integer order, entry;
        if (s == 0) {
          order = t;
          entry = 1;
        } else if (t == 0) {
          continue;
        } else {
          order = gcd(s, t);
          entry = t / order;
        }
        if (order == 1) continue;
        pieces_.push_back({j, i, entry});
        orders.push_back(order);
      }
    }
    form_ = canonicalize_cyclic_sum(orders);
  }

  const FinGenAb& source() const noexcept { return source_; }
  const FinGenAb& target() const noexcept { return target_; }
  const FinGenAb& carrier() const noexcept { return form_.group; }

  std::size_t basis_size() const noexcept { return form_.group.generator_count(); }

  /// Coordinates of f in the carrier.
  std::vector<Integer> decompose(const AbMap& f) const {
    if (!(f.source() == source_) || !(f.target() == target_)) throw EndpointMismatch("decompose: map is not in this Hom");
    std::vector<Integer> raw(pieces_.size());
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const Integer& v = f.matrix().at(pieces_[k].row, pieces_[k].col);
      if (v % pieces_[k].entry != 0) throw InternalInconsistency("decompose: entry outside the Hom piece");
      raw[k] = v / pieces_[k].entry;
    }
    // free-source/torsion-target and torsion-source/free-target pairs carry no data
    return form_.to_group(raw);
  }

  AbMap recompose(std::span<const Integer> coords) const {
    if (coords.size() != basis_size()) throw DimensionMismatch("recompose: wrong number of coordinates");
    std::vector<Integer> raw = form_.from_canonical.apply(coords);
    IntMatrix m(target_.generator_count(), source_.generator_count());
    for (std::size_t k = 0; k < pieces_.size(); ++k)
      if (raw[k] != 0) m.set(pieces_[k].row, pieces_[k].col, raw[k] * pieces_[k].entry);
    return AbMap(source_, target_, std::move(m));
  }

  AbMap basis(std::size_t i) const {
    std::vector<Integer> e(basis_size());
    e.at(i) = 1;
    return recompose(e);
  }

  std::vector<AbMap> basis() const {
    std::vector<AbMap> out;
    for (std::size_t i = 0; i < basis_size(); ++i) out.push_back(basis(i));
    return out;
  }

 /// Cyclic piece: the map sending source generator `col` to `entry` times
  /// target generator `row`.
  struct Piece {
    std::size_t row, col;
    Integer entry;
  };
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  const CanonicalForm& form() const noexcept { return form_; }

 private:
  FinGenAb source_, target_;
  std::vector<Piece> pieces_;
  CanonicalForm form_;
};

inline HomGroup hom_group(const FinGenAb& a, const FinGenAb& b) { return HomGroup(a, b); }

/// Ext^1(quotient, sub) with the conversion between raw and canonical
/// coordinates.
class ExtGroup {
 public:
  ExtGroup(FinGenAb quotient, FinGenAb sub)
      : quotient_(std::move(quotient)), sub_(std::move(sub)), moduli_(ext_coordinate_moduli(quotient_, sub_)) {
    form_ = canonicalize_cyclic_sum(moduli_);
  }

  const FinGenAb& quotient() const noexcept { return quotient_; }
  const FinGenAb& sub() const noexcept { return sub_; }
  const FinGenAb& group() const noexcept { return form_.group; }
  const std::vector<Integer>& coordinate_moduli() const noexcept { return moduli_; }
  const CanonicalForm& form() const noexcept { return form_; }

  std::vector<Integer> to_canonical(const ExtClass& c) const {
    check(c);
    return form_.to_group(c.coords());
  }

  ExtClass from_canonical(std::span<const Integer> coords) const {
    if (coords.size() != form_.group.generator_count()) throw DimensionMismatch("wrong number of Ext coordinates");
    return ExtClass(quotient_, sub_, form_.from_canonical.apply(coords));
  }

  ExtClass generator(std::size_t i) const {
    std::vector<Integer> e(form_.group.generator_count());
    e.at(i) = 1;
    return from_canonical(e);
  }

  /// Every class, in lexicographic order of the normal-form coordinates.
  std::vector<ExtClass> enumerate(std::size_t limit = std::size_t{1} << 16) const {
    Integer total = form_.group.order();
    if (total > limit) throw UnsupportedInstance("Ext group of order " + to_decimal(total) + " exceeds enumeration limit");
    std::vector<ExtClass> out;
    std::vector<Integer> digits(moduli_.size());
    const std::size_t count = to_size(total);
    for (std::size_t n = 0; n < count; ++n) {
      out.emplace_back(quotient_, sub_, digits);
      for (std::size_t k = digits.size(); k-- > 0;) {
        if (moduli_[k] <= 1) continue;
        if (++digits[k] < moduli_[k]) break;
        digits[k] = 0;
      }
    }
    return out;
  }

  void check(const ExtClass& c) const {
    if (!(c.quotient() == quotient_) || !(c.sub() == sub_)) throw EndpointMismatch("class belongs to a different Ext group");
  }

 private:
  FinGenAb quotient_, sub_;
  std::vector<Integer> moduli_;
  CanonicalForm form_;
};

inline ExtGroup ext_group(const FinGenAb& quotient, const FinGenAb& sub) { return ExtGroup(quotient, sub); }

/// B -f-> E -g-> A, exactness checked at construction.
class ShortExactSeq {
 public:
  ShortExactSeq(AbMap f, AbMap g) : f_(std::move(f)), g_(std::move(g)) { validate(); }

  const AbMap& f() const noexcept { return f_; }
  const AbMap& g() const noexcept { return g_; }
  const FinGenAb& sub() const noexcept { return f_.source(); }
  const FinGenAb& middle() const noexcept { return f_.target(); }
  const FinGenAb& quotient() const noexcept { return g_.target(); }

 private:
  void validate() const {
    if (!(f_.target() == g_.source())) throw NotExact("f and g do not share the middle object");
    if (!compose(g_, f_).is_zero()) throw NotExact("g o f is not zero");
    if (!is_epi(g_)) throw NotExact("g is not an epimorphism");
    if (!is_mono(f_)) throw NotExact("f is not a monomorphism");
    if (middle().is_finite()) {
      if (middle().order() != sub().order() * quotient().order()) throw NotExact("image of f differs from kernel of g");
      return;
    }
    KernelResult k = kernel(g_);
    ModularSolver solver(f_.matrix(), middle().moduli());
    for (std::size_t i = 0; i < k.object.generator_count(); ++i)
      if (!solver.solve(k.inclusion.image_of_generator(i))) throw NotExact("kernel of g is not contained in image of f");
  }

  AbMap f_, g_;
};

inline ExtClass classify(const ShortExactSeq& s) {
  const FinGenAb& a = s.quotient();
  const FinGenAb& b = s.sub();
  const FinGenAb& e = s.middle();
  const std::size_t nb = b.generator_count();
  std::vector<Integer> coords(a.torsion_count() * nb);
  if (a.torsion_count() > 0) {
    ModularSolver lift(s.g().matrix(), a.moduli());
    ModularSolver back(s.f().matrix(), e.moduli());
    for (std::size_t j = 0; j < a.torsion_count(); ++j) {
      std::vector<Integer> unit(a.generator_count());
      unit[j] = 1;
      auto x = lift.solve(unit);
      if (!x) throw NotExact("quotient generator has no preimage");
      for (auto& v : *x) v *= a.modulus(j);
      auto y = back.solve(*x);
      if (!y) throw NotExact("order multiple of a lift is not in the image of f");
      for (std::size_t l = 0; l < nb; ++l) coords[j * nb + l] = std::move((*y)[l]);
    }
  }
  return ExtClass(a, b, std::move(coords));
}

/// E = (B + Z^n) / (orders of B, d_j a_j - c_j), with f, g the obvious maps.
inline ShortExactSeq realize(const ExtClass& c) {
  const FinGenAb& a = c.quotient();
  const FinGenAb& b = c.sub();
  const std::size_t nb = b.generator_count(), na = a.generator_count();
  Presentation p(nb + na);
  for (std::size_t l = 0; l < b.torsion_count(); ++l) p.add_order(l, b.modulus(l));
  for (std::size_t j = 0; j < a.torsion_count(); ++j) {
    SparseRow row;
    auto comp = c.component(j);
    for (std::size_t l = 0; l < nb; ++l)
      if (comp[l] != 0) row.push_back({l, -comp[l]});
    row.push_back({nb + j, a.modulus(j)});
    p.add_relation(std::move(row));
  }
  CanonicalForm cf = canonicalize(p);
  IntMatrix g_raw(na, nb + na);
  for (std::size_t j = 0; j < na; ++j) g_raw.set(j, nb + j, 1);
  return ShortExactSeq(AbMap(b, cf.group, cf.to_canonical.column_block(0, nb)),
                       AbMap(cf.group, a, g_raw * cf.from_canonical));
}

inline ExtClass baer_sum(const ExtClass& x, const ExtClass& y) {
  if (!(x.quotient() == y.quotient()) || !(x.sub() == y.sub())) throw EndpointMismatch("Baer sum of classes with different endpoints");
  std::vector<Integer> c(x.coords());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += y.coords()[i];
  return ExtClass(x.quotient(), x.sub(), std::move(c));
}

inline ExtClass negate(const ExtClass& x) {
  std::vector<Integer> c(x.coords());
  for (auto& v : c) v = -v;
  return ExtClass(x.quotient(), x.sub(), std::move(c));
}

inline ExtClass scale(const ExtClass& x, const Integer& k) {
  std::vector<Integer> c(x.coords());
  for (auto& v : c) v *= k;
  return ExtClass(x.quotient(), x.sub(), std::move(c));
}

/// eta . h for h : A' -> A.
inline ExtClass pullback_action(const ExtClass& c, const AbMap& h) {
  if (!(h.target() == c.quotient())) throw EndpointMismatch("pullback_action: h must land in the quotient end");
  const FinGenAb& a = c.quotient();
  const FinGenAb& a2 = h.source();
  const std::size_t nb = c.sub().generator_count();
  std::vector<Integer> coords(a2.torsion_count() * nb);
  for (std::size_t j = 0; j < a.torsion_count(); ++j) {
    const Integer& d = a.modulus(j);
    for (const auto& e : h.matrix().row(j)) {
      if (e.col >= a2.torsion_count()) continue;
      // relation d'_i x_i maps to q * (relation d_j x_j)
      Integer q = a2.modulus(e.col) * e.value / d;
      if (q == 0) continue;
      for (std::size_t l = 0; l < nb; ++l) {
        const Integer& v = c.coords()[j * nb + l];
        if (v != 0) coords[e.col * nb + l] += q * v;
      }
    }
  }
  return ExtClass(a2, c.sub(), std::move(coords));
}

/// k . eta for k : B -> B'.
inline ExtClass pushout_action(const ExtClass& c, const AbMap& k) {
  if (!(k.source() == c.sub())) throw EndpointMismatch("pushout_action: k must start at the sub end");
  const FinGenAb& a = c.quotient();
  const std::size_t n2 = k.target().generator_count();
  std::vector<Integer> coords(a.torsion_count() * n2);
  for (std::size_t j = 0; j < a.torsion_count(); ++j) {
    auto image = k.matrix().apply(c.component(j));
    for (std::size_t l = 0; l < n2; ++l) coords[j * n2 + l] = std::move(image[l]);
  }
  return ExtClass(a, k.target(), std::move(coords));
}

namespace detail {

/// Canonical matrix of a map given on raw Ext coordinates.
inline AbMap ext_map_from_raw(const ExtGroup& from, const ExtGroup& to, const IntMatrix& raw) {
  return AbMap(from.group(), to.group(), to.form().to_canonical * raw * from.form().from_canonical);
}

}  // namespace detail

/// Ext^1(T, h) : Ext^1(T, B) -> Ext^1(T, B') for h : B -> B'. On raw
/// coordinates this is h applied to each component.
inline AbMap induced_ext_map_covariant(const FinGenAb& t, const AbMap& h) {
  ExtGroup from(t, h.source()), to(t, h.target());
  const std::size_t n = h.source().generator_count(), n2 = h.target().generator_count();
  IntMatrix raw(t.torsion_count() * n2, t.torsion_count() * n);
  for (std::size_t j = 0; j < t.torsion_count(); ++j)
    for (std::size_t r = 0; r < n2; ++r) {
      SparseRow row;
      for (const auto& e : h.matrix().row(r)) row.push_back({j * n + e.col, e.value});
      raw.set_row(j * n2 + r, std::move(row));
    }
  return detail::ext_map_from_raw(from, to, raw);
}

/// Ext^1(h, T) : Ext^1(A, T) -> Ext^1(A', T) for h : A' -> A; the raw
/// matrix is the one used by pullback_action.
inline AbMap induced_ext_map_contravariant(const AbMap& h, const FinGenAb& t) {
  ExtGroup from(h.target(), t), to(h.source(), t);
  const FinGenAb& a = h.target();
  const FinGenAb& a2 = h.source();
  const std::size_t nt = t.generator_count();
  IntMatrix raw(a2.torsion_count() * nt, a.torsion_count() * nt);
  for (std::size_t j = 0; j < a.torsion_count(); ++j)
    for (const auto& e : h.matrix().row(j)) {
      if (e.col >= a2.torsion_count()) continue;
      Integer q = a2.modulus(e.col) * e.value / a.modulus(j);
      if (q == 0) continue;
      for (std::size_t l = 0; l < nt; ++l) raw.set(e.col * nt + l, j * nt + l, raw.at(e.col * nt + l, j * nt + l) + q);
    }
  return detail::ext_map_from_raw(from, to, raw);
}

/// A connecting morphism together with the groups it runs between.
struct ConnectingMap {
  HomGroup hom;
  ExtGroup ext;
  AbMap map;  // hom.carrier() -> ext.group()
};

/// delta : Hom(T, A) -> Ext^1(T, B), h |-> class of s . h, for s : B -> E -> A.
inline ConnectingMap connecting_hom(const ShortExactSeq& s, const FinGenAb& t) {
  ExtClass eta = classify(s);
  HomGroup hom(t, s.quotient());
  ExtGroup ext(t, s.sub());
  const FinGenAb& a = s.quotient();
  const std::size_t nb = s.sub().generator_count();
  // raw Ext coordinates of eta . (piece k), as in pullback_action
  IntMatrix raw(t.torsion_count() * nb, hom.pieces().size());
  for (std::size_t k = 0; k < hom.pieces().size(); ++k) {
    const auto& pc = hom.pieces()[k];
    if (pc.row >= a.torsion_count() || pc.col >= t.torsion_count()) continue;
    Integer q = t.modulus(pc.col) * pc.entry / a.modulus(pc.row);
    for (std::size_t l = 0; l < nb; ++l) {
      const Integer& c = eta.coords()[pc.row * nb + l];
      if (c != 0 && q != 0) raw.set(pc.col * nb + l, k, q * c);
    }
  }
  AbMap map(hom.carrier(), ext.group(), ext.form().to_canonical * raw * hom.form().from_canonical);
  return {std::move(hom), std::move(ext), std::move(map)};
}

/// delta : Hom(B, T) -> Ext^1(A, T), k |-> class of k . s, for s : B -> E -> A.
inline ConnectingMap connecting_hom_covariant(const ShortExactSeq& s, const FinGenAb& t) {
  ExtClass eta = classify(s);
  HomGroup hom(s.sub(), t);
  ExtGroup ext(s.quotient(), t);
  const std::size_t nb = s.sub().generator_count(), nt = t.generator_count();
  // raw Ext coordinates of (piece k) . eta, as in pushout_action
  IntMatrix raw(s.quotient().torsion_count() * nt, hom.pieces().size());
  for (std::size_t k = 0; k < hom.pieces().size(); ++k) {
    const auto& pc = hom.pieces()[k];
    for (std::size_t j = 0; j < s.quotient().torsion_count(); ++j) {
      const Integer& c = eta.coords()[j * nb + pc.col];
      if (c != 0) raw.set(j * nt + pc.row, k, pc.entry * c);
    }
  }
  AbMap map(hom.carrier(), ext.group(), ext.form().to_canonical * raw * hom.form().from_canonical);
  return {std::move(hom), std::move(ext), std::move(map)};
}

/// The sequence s . h : B -> P -> A' built from the pullback of g and h.
inline ShortExactSeq pullback_sequence(const ShortExactSeq& s, const AbMap& h) {
  if (!(h.target() == s.quotient())) throw EndpointMismatch("pullback_sequence: h must land in the quotient");
  Pullback pb = pullback(s.g(), h);
  AbMap f2 = pb.mediator(s.f(), AbMap::zero(s.sub(), h.source()));
  return ShortExactSeq(f2, pb.leg_c);
}

/// The sequence k . s : B' -> P -> A built from the pushout of f and k.
inline ShortExactSeq pushout_sequence(const ShortExactSeq& s, const AbMap& k) {
  if (!(k.source() == s.sub())) throw EndpointMismatch("pushout_sequence: k must start at the sub end");
  Pushout po = pushout(s.f(), k);
  AbMap g2 = po.mediator(s.g(), AbMap::zero(k.target(), s.quotient()));
  return ShortExactSeq(po.leg_c, g2);
}

struct SequenceSum {
  SumDiagram subs, middles, quotients;
  ShortExactSeq sequence;
};

/// Componentwise direct sum of a finite nonempty family of sequences.
inline SequenceSum direct_sum_sequences(const std::vector<ShortExactSeq>& seqs) {
  std::vector<FinGenAb> subs, mids, quots;
  std::vector<AbMap> fs, gs;
  for (const auto& s : seqs) {
    subs.push_back(s.sub());
    mids.push_back(s.middle());
    quots.push_back(s.quotient());
    fs.push_back(s.f());
    gs.push_back(s.g());
  }
  SumDiagram ds = direct_sum(subs), dm = direct_sum(mids), dq = direct_sum(quots);
  AbMap f = sum_of_maps(ds, dm, fs);
  AbMap g = sum_of_maps(dm, dq, gs);
  return {std::move(ds), std::move(dm), std::move(dq), ShortExactSeq(std::move(f), std::move(g))};
}

/// Baer sum of two sequences: pull back the direct sum along the diagonal of
/// the quotient, then push out along the codiagonal of the sub end.
inline ShortExactSeq baer_sum(const ShortExactSeq& x, const ShortExactSeq& y) {
  if (!(x.quotient() == y.quotient()) || !(x.sub() == y.sub())) throw EndpointMismatch("Baer sum of sequences with different ends");
  SequenceSum sum = direct_sum_sequences({x, y});
  ShortExactSeq pulled = pullback_sequence(sum.sequence, diagonal(sum.quotients));
  return pushout_sequence(pulled, codiagonal(sum.subs));
}

/// A middle map phi with phi o f1 = f2 and g2 o phi = g1, if one exists.
/// Any such map is an isomorphism by the five lemma.
inline std::optional<AbMap> find_equivalence(const ShortExactSeq& s1, const ShortExactSeq& s2) {
  if (!(s1.sub() == s2.sub()) || !(s1.quotient() == s2.quotient())) return std::nullopt;
  const FinGenAb& e1 = s1.middle();
  const FinGenAb& e2 = s2.middle();
  const std::size_t n1 = e1.generator_count(), n2 = e2.generator_count();
  const std::size_t nb = s1.sub().generator_count(), na = s1.quotient().generator_count();
  auto var = [n1](std::size_t row, std::size_t col) { return row * n1 + col; };
  IntMatrix system(0, n1 * n2);
  std::vector<Integer> rhs, moduli;
  // well defined: ord(e1_i) * phi(e1_i) = 0
  for (std::size_t i = 0; i < e1.torsion_count(); ++i)
    for (std::size_t k = 0; k < n2; ++k) {
      system.append_row({{var(k, i), e1.modulus(i)}});
      rhs.push_back(0);
      moduli.push_back(e2.modulus(k));
    }
  // phi o f1 = f2
  for (std::size_t l = 0; l < nb; ++l)
    for (std::size_t k = 0; k < n2; ++k) {
      SparseRow row;
      for (std::size_t i = 0; i < n1; ++i) {
        const Integer& v = s1.f().matrix().at(i, l);
        if (v != 0) row.push_back({var(k, i), v});
      }
      system.append_row(std::move(row));
      rhs.push_back(s2.f().matrix().at(k, l));
      moduli.push_back(e2.modulus(k));
    }
  // g2 o phi = g1
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      SparseRow row;
      for (std::size_t k = 0; k < n2; ++k) {
        const Integer& v = s2.g().matrix().at(j, k);
        if (v != 0) row.push_back({var(k, i), v});
      }
      system.append_row(std::move(row));
      rhs.push_back(s1.g().matrix().at(j, i));
      moduli.push_back(s1.quotient().modulus(j));
    }
  auto sol = solve_mod(system, rhs, moduli);
  if (!sol) return std::nullopt;
  IntMatrix phi(n2, n1);
  for (std::size_t k = 0; k < n2; ++k)
    for (std::size_t i = 0; i < n1; ++i) phi.set(k, i, (*sol)[var(k, i)]);
  return AbMap(e1, e2, std::move(phi));
}

inline bool equivalent(const ShortExactSeq& s1, const ShortExactSeq& s2) { return find_equivalence(s1, s2).has_value(); }

}  // namespace uext
