#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uext/error.hpp"
#include "uext/int_matrix.hpp"
#include "uext/integer.hpp"
#include "uext/snf.hpp"

namespace uext {

/// Z^rank + Z(d1) + ... + Z(dk) with 2 <= d1 | d2 | ... | dk.
///
/// Generators are ordered torsion first (modulus d_i), then free (modulus 0).
class FinGenAb {
 public:
  FinGenAb() = default;

  /// Validates the canonical-form invariants; use canonicalize() for
  /// arbitrary data.
  FinGenAb(std::size_t rank, std::vector<Integer> factors) : rank_(rank), factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i] < 2) throw InvalidArgument("invariant factors must be >= 2");
      if (i > 0 && factors_[i] % factors_[i - 1] != 0)
        throw InvalidArgument("invariant factors must form a divisibility chain");
    }
  }

  static FinGenAb zero() { return {}; }
  static FinGenAb free(std::size_t rank) { return FinGenAb(rank, {}); }
  static FinGenAb cyclic(const Integer& n);

  std::size_t rank() const noexcept { return rank_; }
  const std::vector<Integer>& factors() const noexcept { return factors_; }
  std::size_t torsion_count() const noexcept { return factors_.size(); }
  std::size_t generator_count() const noexcept { return factors_.size() + rank_; }

  /// Modulus of generator i (0 for free generators).
  const Integer& modulus(std::size_t i) const {
    static const Integer zero = 0;
    return i < factors_.size() ? factors_[i] : zero;
  }

  std::vector<Integer> moduli() const {
    std::vector<Integer> m(factors_);
    m.resize(generator_count());
    return m;
  }

  bool is_finite() const noexcept { return rank_ == 0; }
  bool is_trivial() const noexcept { return rank_ == 0 && factors_.empty(); }

  /// Group order, or 0 when the group is infinite.
  Integer order() const {
    if (rank_ != 0) return 0;
    Integer o = 1;
    for (const auto& d : factors_) o *= d;
    return o;
  }

  /// Reduces an element's coordinates into normal form.
  std::vector<Integer> normalize(std::vector<Integer> x) const {
    if (x.size() != generator_count()) throw DimensionMismatch("element has the wrong number of coordinates");
    for (std::size_t i = 0; i < factors_.size(); ++i) x[i] = reduce(x[i], factors_[i]);
    return x;
  }

  std::string to_string() const {
    if (is_trivial()) return "0";
    std::string s;
    for (const auto& d : factors_) s += (s.empty() ? "" : "+") + ("Z(" + to_decimal(d) + ")");
    if (rank_ == 1) s += (s.empty() ? "" : "+") + std::string("Z");
    if (rank_ > 1) s += (s.empty() ? "" : "+") + ("Z^" + std::to_string(rank_));
    return s;
  }

  bool operator==(const FinGenAb&) const = default;

 private:
  std::size_t rank_ = 0;
  std::vector<Integer> factors_;
};

/// Relations (rows) on `generators` free generators.
struct Presentation {
  std::size_t generators = 0;
  IntMatrix relations;

  explicit Presentation(std::size_t n = 0) : generators(n), relations(0, n) {}
  Presentation(std::size_t n, IntMatrix rel) : generators(n), relations(std::move(rel)) {
    if (relations.cols() != n) throw DimensionMismatch("relation width differs from generator count");
  }

  void add_relation(SparseRow row) { relations.append_row(std::move(row)); }

  /// Adds the relation modulus * e_gen (skipped for modulus 0).
  void add_order(std::size_t gen, const Integer& modulus) {
    if (modulus != 0) relations.append_row({{gen, modulus}});
  }
};

/// Canonical form of a presented group with the coordinate change both ways.
///
/// to_canonical is k x n: column j holds the canonical coordinates of the
/// presentation generator e_j. from_canonical is n x k: column i expresses the
/// i-th canonical generator in presentation coordinates.
struct CanonicalForm {
  FinGenAb group;
  IntMatrix to_canonical;
  IntMatrix from_canonical;

  std::vector<Integer> to_group(std::span<const Integer> x) const {
    return group.normalize(to_canonical.apply(x));
  }
};

inline CanonicalForm canonicalize(const Presentation& p, bool with_basis = true) {
  const std::size_t n = p.generators;
  SmithForm sf = smith_form(p.relations, {.left = false, .right = with_basis, .right_inverse = with_basis});
  std::vector<std::size_t> kept;
  std::vector<Integer> factors;
  for (std::size_t k = 0; k < sf.rank(); ++k) {
    if (sf.diagonal[k] == 1) continue;
    kept.push_back(k);
    factors.push_back(sf.diagonal[k]);
  }
  const std::size_t rank = n - sf.rank();
  for (std::size_t k = sf.rank(); k < n; ++k) kept.push_back(k);
  CanonicalForm out{FinGenAb(rank, std::move(factors)), IntMatrix(kept.size(), n), IntMatrix(n, kept.size())};
  if (!with_basis) return out;
  IntMatrix from_t(kept.size(), n);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    SparseRow row = sf.right_t.row(kept[i]);
    const Integer& d = out.group.modulus(i);
    if (d != 0) {
      SparseRow reduced;
      for (auto& e : row) {
        Integer v = reduce(e.value, d);
        if (v != 0) reduced.push_back({e.col, std::move(v)});
      }
      row = std::move(reduced);
    }
    out.to_canonical.set_row(i, std::move(row));
    from_t.set_row(i, sf.right_inv.row(kept[i]));
  }
  out.from_canonical = from_t.transpose();
  return out;
}

/// Canonical form of Z^n / span(rows).
inline FinGenAb canonical_group(const Presentation& p) { return canonicalize(p, false).group; }

inline FinGenAb FinGenAb::cyclic(const Integer& n) {
  if (n < 0) throw InvalidArgument("cyclic order must be nonnegative");
  if (n == 0) return free(1);
  if (n == 1) return zero();
  return FinGenAb(0, {n});
}

/// Canonical form of Z(m_1) + ... + Z(m_k) (0 entries mean Z).
inline CanonicalForm canonicalize_cyclic_sum(std::span<const Integer> moduli, bool with_basis = true) {
  Presentation p(moduli.size());
  for (std::size_t i = 0; i < moduli.size(); ++i) p.add_order(i, abs(moduli[i]));
  return canonicalize(p, with_basis);
}

/// Morphism on canonical generators: column i is the image of source
/// generator i. Entries of row j are kept reduced modulo the target modulus,
/// so equality of maps is entrywise.
class AbMap {
 public:
  AbMap() = default;

  AbMap(FinGenAb source, FinGenAb target, IntMatrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.generator_count() || matrix_.cols() != source_.generator_count())
      throw DimensionMismatch("map matrix must be (target generators) x (source generators)");
    normalize_rows();
    check_well_defined();
  }

  static AbMap zero(const FinGenAb& s, const FinGenAb& t) {
    return AbMap(s, t, IntMatrix(t.generator_count(), s.generator_count()));
  }
  static AbMap identity(const FinGenAb& g) { return AbMap(g, g, IntMatrix::identity(g.generator_count())); }
  static AbMap multiplication(const FinGenAb& g, const Integer& k) {
    return AbMap(g, g, IntMatrix::identity(g.generator_count()).scaled(k));
  }

  const FinGenAb& source() const noexcept { return source_; }
  const FinGenAb& target() const noexcept { return target_; }
  const IntMatrix& matrix() const noexcept { return matrix_; }

  std::vector<Integer> operator()(std::span<const Integer> x) const {
    if (x.size() != source_.generator_count()) throw DimensionMismatch("element lies in the wrong group");
    return target_.normalize(matrix_.apply(x));
  }

  /// Image of generator i.
  std::vector<Integer> image_of_generator(std::size_t i) const { return matrix_.column_vector(i); }

  bool is_zero() const { return matrix_.is_zero(); }

  bool operator==(const AbMap&) const = default;

 private:
  void normalize_rows() {
    for (std::size_t j = 0; j < target_.torsion_count(); ++j) {
      const Integer& t = target_.modulus(j);
      SparseRow reduced;
      bool changed = false;
      for (const auto& e : matrix_.row(j)) {
        Integer v = reduce(e.value, t);
        if (v != e.value) changed = true;
        if (v != 0) reduced.push_back({e.col, std::move(v)});
      }
      if (changed) matrix_.set_row(j, std::move(reduced));
    }
  }

  void check_well_defined() const {
    for (std::size_t j = 0; j < target_.generator_count(); ++j) {
      const Integer& t = target_.modulus(j);
      for (const auto& e : matrix_.row(j)) {
        const Integer& s = source_.modulus(e.col);
        if (s == 0) continue;
        if (t == 0 || (s * e.value) % t != 0)
          throw InvalidArgument("map is not well defined: order of a source generator does not annihilate its image");
      }
    }
  }

  FinGenAb source_;
  FinGenAb target_;
  IntMatrix matrix_;
};

inline AbMap compose(const AbMap& g, const AbMap& f) {
  if (!(f.target() == g.source())) throw EndpointMismatch("compose: target of f differs from source of g");
  return AbMap(f.source(), g.target(), g.matrix() * f.matrix());
}

inline AbMap operator+(const AbMap& f, const AbMap& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw EndpointMismatch("sum of maps with different endpoints");
  return AbMap(f.source(), f.target(), f.matrix() + g.matrix());
}

inline AbMap operator-(const AbMap& f, const AbMap& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw EndpointMismatch("difference of maps with different endpoints");
  return AbMap(f.source(), f.target(), f.matrix() - g.matrix());
}

inline AbMap scale(const AbMap& f, const Integer& k) { return AbMap(f.source(), f.target(), f.matrix().scaled(k)); }

/// Canonical form of the group presented by the relation matrix (rows are
/// relations, columns generators).
inline CanonicalForm canonicalize(const IntMatrix& relations) {
  return canonicalize(Presentation(relations.cols(), relations));
}

/// All abelian groups of order n, one per isomorphism type, ordered by the
/// factor list.
inline std::vector<FinGenAb> groups_of_order(const Integer& n) {
  if (n < 1) throw InvalidArgument("group order must be positive");
  // per prime: partitions of the exponent
  std::vector<std::vector<std::vector<Integer>>> per_prime;
  for (const auto& [p, e] : factorize(n)) {
    std::vector<std::vector<Integer>> options;
    std::vector<unsigned> parts;
    std::function<void(unsigned, unsigned)> rec = [&](unsigned left, unsigned max_part) {
      if (left == 0) {
        std::vector<Integer> cyc;
        for (unsigned k : parts) cyc.push_back(ipow(p, k));
        options.push_back(std::move(cyc));
        return;
      }
      for (unsigned k = std::min(left, max_part); k >= 1; --k) {
        parts.push_back(k);
        rec(left - k, k);
        parts.pop_back();
      }
    };
    rec(e, e);
    per_prime.push_back(std::move(options));
  }
  std::vector<FinGenAb> out;
  std::vector<Integer> current;
  std::function<void(std::size_t)> combine = [&](std::size_t idx) {
    if (idx == per_prime.size()) {
      out.push_back(canonicalize_cyclic_sum(current, false).group);
      return;
    }
    for (const auto& opt : per_prime[idx]) {
      const std::size_t mark = current.size();
      current.insert(current.end(), opt.begin(), opt.end());
      combine(idx + 1);
      current.resize(mark);
    }
  };
  combine(0);
  std::sort(out.begin(), out.end(), [](const FinGenAb& a, const FinGenAb& b) {
    if (a.factors().size() != b.factors().size()) return a.factors().size() < b.factors().size();
    return a.factors() < b.factors();
  });
  return out;
}

/// Every abelian group of order 1..max_order.
inline std::vector<FinGenAb> groups_up_to_order(unsigned max_order) {
  std::vector<FinGenAb> out;
  for (unsigned n = 1; n <= max_order; ++n) {
    auto g = groups_of_order(n);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

}  // namespace uext
