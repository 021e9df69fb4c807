#pragma once

// Kernels, cokernels, images, finite biproducts, (co)diagonals, pushouts and
// pullbacks of finitely generated abelian groups.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "uext/group.hpp"

namespace uext {

namespace detail {

struct RawSubgroup {
  FinGenAb group;
  IntMatrix inclusion;  // (ambient generators) x (subgroup generators)
};

/// Subgroup of Z(m_1)+...+Z(m_n) generated by the columns of `gens`.
inline RawSubgroup subgroup_generated(std::span<const Integer> moduli, const IntMatrix& gens) {
  const std::size_t q = gens.cols();
  IntMatrix kernel = integer_kernel(augment_with_moduli(gens, moduli));
  CanonicalForm cf = canonicalize(Presentation(q, kernel.column_block(0, q)));
  return {cf.group, gens * cf.from_canonical};
}

/// Lattice {x : M x = 0 in Z(t_1)+...+Z(t_m)} as generating columns.
inline IntMatrix preimage_of_zero(const IntMatrix& m, std::span<const Integer> target_moduli) {
  IntMatrix kernel = integer_kernel(augment_with_moduli(m, target_moduli));
  return kernel.column_block(0, m.cols()).transpose();
}

}  // namespace detail

struct KernelResult {
  FinGenAb object;
  AbMap inclusion;
};

struct CokernelResult {
  FinGenAb object;
  AbMap projection;
};

struct ImageResult {
  FinGenAb object;
  AbMap inclusion;
};

inline KernelResult kernel(const AbMap& f) {
  const auto source_moduli = f.source().moduli();
  IntMatrix lattice = detail::preimage_of_zero(f.matrix(), f.target().moduli());
  auto sub = detail::subgroup_generated(source_moduli, lattice);
  return {sub.group, AbMap(sub.group, f.source(), sub.inclusion)};
}

inline ImageResult image(const AbMap& f) {
  auto sub = detail::subgroup_generated(f.target().moduli(), f.matrix());
  return {sub.group, AbMap(sub.group, f.target(), sub.inclusion)};
}

namespace detail {

inline Presentation cokernel_presentation(const AbMap& f) {
  const FinGenAb& t = f.target();
  Presentation p(t.generator_count());
  for (std::size_t j = 0; j < t.torsion_count(); ++j) p.add_order(j, t.modulus(j));
  IntMatrix cols = f.matrix().transpose();
  for (std::size_t i = 0; i < cols.rows(); ++i)
    if (!cols.row(i).empty()) p.add_relation(cols.row(i));
  return p;
}

}  // namespace detail

inline CokernelResult cokernel(const AbMap& f) {
  CanonicalForm cf = canonicalize(detail::cokernel_presentation(f));
  return {cf.group, AbMap(f.target(), cf.group, cf.to_canonical)};
}

/// Cokernel object only; skips the change of basis.
inline FinGenAb cokernel_group(const AbMap& f) { return canonical_group(detail::cokernel_presentation(f)); }

inline bool is_epi(const AbMap& f) { return cokernel_group(f).is_trivial(); }

inline bool is_mono(const AbMap& f) {
  if (f.source().is_trivial()) return true;
  if (f.source().is_finite() && f.target().is_finite())
    return f.source().order() * cokernel_group(f).order() == f.target().order();
  if (!f.source().is_finite() && f.target().is_finite()) return false;
  return kernel(f).object.is_trivial();
}

inline bool is_iso(const AbMap& f) { return is_mono(f) && is_epi(f); }

inline FinGenAb torsion_part(const FinGenAb& a) { return FinGenAb(0, a.factors()); }

/// Finite biproduct with its injections and projections.
struct SumDiagram {
  std::vector<FinGenAb> summands;
  FinGenAb total;
  std::vector<AbMap> injections;
  std::vector<AbMap> projections;
  std::vector<std::size_t> offsets;  // first raw generator of each summand
  CanonicalForm form;                // raw concatenation <-> canonical total

  std::size_t size() const noexcept { return summands.size(); }
};

inline SumDiagram direct_sum(const std::vector<FinGenAb>& groups) {
  std::vector<Integer> raw;
  std::vector<std::size_t> offsets;
  for (const auto& g : groups) {
    offsets.push_back(raw.size());
    auto m = g.moduli();
    raw.insert(raw.end(), m.begin(), m.end());
  }
  SumDiagram d;
  d.summands = groups;
  d.offsets = offsets;
  d.form = canonicalize_cyclic_sum(raw);
  d.total = d.form.group;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const std::size_t n = groups[i].generator_count();
    d.injections.emplace_back(groups[i], d.total, d.form.to_canonical.column_block(offsets[i], n));
    d.projections.emplace_back(d.total, groups[i], d.form.from_canonical.row_block(offsets[i], n));
  }
  return d;
}

/// X copies of one group.
inline SumDiagram direct_power(const FinGenAb& a, std::size_t copies) {
  return direct_sum(std::vector<FinGenAb>(copies, a));
}

/// The map total -> target restricting to maps[i] on summand i.
inline AbMap copair(const SumDiagram& sum, const std::vector<AbMap>& maps) {
  if (maps.size() != sum.size()) throw DimensionMismatch("one map per summand is required");
  if (sum.size() == 0) throw InvalidArgument("copair of an empty family needs an explicit target");
  const FinGenAb& target = maps.front().target();
  IntMatrix raw(target.generator_count(), 0);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (!(maps[i].source() == sum.summands[i]) || !(maps[i].target() == target))
      throw EndpointMismatch("copair: map endpoints do not match the biproduct");
    raw = IntMatrix::hstack(raw, maps[i].matrix());
  }
  return AbMap(sum.total, target, raw * sum.form.from_canonical);
}

/// The map source -> total whose i-th component is maps[i].
inline AbMap pair(const SumDiagram& sum, const std::vector<AbMap>& maps) {
  if (maps.size() != sum.size()) throw DimensionMismatch("one map per summand is required");
  if (sum.size() == 0) throw InvalidArgument("pair of an empty family needs an explicit source");
  const FinGenAb& source = maps.front().source();
  IntMatrix raw(0, source.generator_count());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (!(maps[i].target() == sum.summands[i]) || !(maps[i].source() == source))
      throw EndpointMismatch("pair: map endpoints do not match the biproduct");
    raw = IntMatrix::vstack(raw, maps[i].matrix());
  }
  return AbMap(source, sum.total, sum.form.to_canonical * raw);
}

/// The direct sum of maps[i] : from.summands[i] -> to.summands[i].
inline AbMap sum_of_maps(const SumDiagram& from, const SumDiagram& to, const std::vector<AbMap>& maps) {
  if (maps.size() != from.size() || maps.size() != to.size())
    throw DimensionMismatch("sum_of_maps: family sizes differ");
  IntMatrix raw(0, 0);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (!(maps[i].source() == from.summands[i]) || !(maps[i].target() == to.summands[i]))
      throw EndpointMismatch("sum_of_maps: map endpoints do not match the biproducts");
    raw = IntMatrix::block_diagonal(raw, maps[i].matrix());
  }
  return AbMap(from.total, to.total, to.form.to_canonical * raw * from.form.from_canonical);
}

/// Delta : A -> A^X with pi_i o Delta = 1.
inline AbMap diagonal(const SumDiagram& power) {
  if (power.size() == 0) throw InvalidArgument("diagonal needs X >= 1");
  return pair(power, std::vector<AbMap>(power.size(), AbMap::identity(power.summands.front())));
}

/// Nabla : A^(X) -> A with Nabla o mu_i = 1.
inline AbMap codiagonal(const SumDiagram& power) {
  if (power.size() == 0) throw InvalidArgument("codiagonal needs X >= 1");
  return copair(power, std::vector<AbMap>(power.size(), AbMap::identity(power.summands.front())));
}

inline AbMap diagonal(const FinGenAb& a, std::size_t copies) { return diagonal(direct_power(a, copies)); }
inline AbMap codiagonal(const FinGenAb& a, std::size_t copies) { return codiagonal(direct_power(a, copies)); }

/// Pushout of B <-f- S -g-> C, presented as (B + C) / {(f(s), -g(s))}.
struct Pushout {
  FinGenAb object;
  AbMap leg_b;  // B -> P
  AbMap leg_c;  // C -> P
  AbMap f, g;
  CanonicalForm form;

  /// The unique P -> Q with m o leg_b = u and m o leg_c = v.
  AbMap mediator(const AbMap& u, const AbMap& v) const {
    if (!(u.source() == f.target()) || !(v.source() == g.target()) || !(u.target() == v.target()))
      throw EndpointMismatch("mediator: cocone endpoints do not match the span");
    if (!(compose(u, f) == compose(v, g))) throw InvalidArgument("mediator: u o f != v o g, not a cocone");
    return AbMap(object, u.target(), IntMatrix::hstack(u.matrix(), v.matrix()) * form.from_canonical);
  }
};

inline Pushout pushout(const AbMap& f, const AbMap& g) {
  if (!(f.source() == g.source())) throw EndpointMismatch("pushout: maps must share their source");
  const FinGenAb& b = f.target();
  const FinGenAb& c = g.target();
  const std::size_t nb = b.generator_count(), nc = c.generator_count();
  Presentation p(nb + nc);
  for (std::size_t j = 0; j < b.torsion_count(); ++j) p.add_order(j, b.modulus(j));
  for (std::size_t j = 0; j < c.torsion_count(); ++j) p.add_order(nb + j, c.modulus(j));
  IntMatrix rel = IntMatrix::vstack(f.matrix(), -g.matrix()).transpose();
  for (std::size_t s = 0; s < rel.rows(); ++s)
    if (!rel.row(s).empty()) p.add_relation(rel.row(s));
  CanonicalForm cf = canonicalize(p);
  Pushout out{cf.group,
              AbMap(b, cf.group, cf.to_canonical.column_block(0, nb)),
              AbMap(c, cf.group, cf.to_canonical.column_block(nb, nc)),
              f,
              g,
              cf};
  return out;
}

/// Pullback of B -f-> T <-g- C, as the kernel of (f, -g) : B + C -> T.
struct Pullback {
  FinGenAb object;
  AbMap leg_b;  // P -> B
  AbMap leg_c;  // P -> C
  AbMap f, g;
  IntMatrix inclusion;  // P -> raw B + C

  /// The unique Q -> P with leg_b o m = u and leg_c o m = v.
  AbMap mediator(const AbMap& u, const AbMap& v) const {
    if (!(u.target() == f.source()) || !(v.target() == g.source()) || !(u.source() == v.source()))
      throw EndpointMismatch("mediator: cone endpoints do not match the cospan");
    if (!(compose(f, u) == compose(g, v))) throw InvalidArgument("mediator: f o u != g o v, not a cone");
    std::vector<Integer> moduli = f.source().moduli();
    auto mc = g.source().moduli();
    moduli.insert(moduli.end(), mc.begin(), mc.end());
    ModularSolver solver(inclusion, moduli);
    IntMatrix w = IntMatrix::vstack(u.matrix(), v.matrix());
    IntMatrix m(object.generator_count(), u.source().generator_count());
    for (std::size_t q = 0; q < w.cols(); ++q) {
      auto x = solver.solve(w.column_vector(q));
      if (!x) throw InternalInconsistency("pullback mediator: cone does not factor");
      for (std::size_t k = 0; k < x->size(); ++k) m.set(k, q, (*x)[k]);
    }
    return AbMap(u.source(), object, m);
  }
};

inline Pullback pullback(const AbMap& f, const AbMap& g) {
  if (!(f.target() == g.target())) throw EndpointMismatch("pullback: maps must share their target");
  const std::size_t nb = f.source().generator_count(), nc = g.source().generator_count();
  std::vector<Integer> moduli = f.source().moduli();
  auto mc = g.source().moduli();
  moduli.insert(moduli.end(), mc.begin(), mc.end());
  IntMatrix h = IntMatrix::hstack(f.matrix(), -g.matrix());
  IntMatrix lattice = detail::preimage_of_zero(h, f.target().moduli());
  auto sub = detail::subgroup_generated(moduli, lattice);
  Pullback out{sub.group,
               AbMap(sub.group, f.source(), sub.inclusion.row_block(0, nb)),
               AbMap(sub.group, g.source(), sub.inclusion.row_block(nb, nc)),
               f,
               g,
               sub.inclusion};
  return out;
}

}  // namespace uext
