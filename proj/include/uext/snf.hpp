#pragma once

// Smith normal form over the integers and the linear solvers built on it.
//
// Pivoting always takes the smallest nonzero entry in absolute value (ties go
// to the sparsest row/column pair). The transforms U and V are therefore not
// unique; only the diagonal D is canonical.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "uext/int_matrix.hpp"

namespace uext {

struct SnfOptions {
  bool left = true;            // track U
  bool right = true;           // track V (stored transposed)
  bool right_inverse = false;  // track V^{-1}
};

/// Result of the elimination: U * M * V = D with D = diag(diagonal, 0, ...).
struct SmithForm {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Integer> diagonal;  // nonzero invariant entries d1 | d2 | ... (rank many)
  IntMatrix left;                 // U (rows x rows)
  IntMatrix right_t;              // V^T: row k is column k of V
  IntMatrix right_inv;            // V^{-1}

  std::size_t rank() const noexcept { return diagonal.size(); }
};

struct SnfDecomposition {
  IntMatrix U, D, V;
};

namespace detail {

class SnfEngine {
 public:
  SnfEngine(const IntMatrix& m, SnfOptions opt) : m_(m.rows()), n_(m.cols()), opt_(opt) {
    a_.resize(m_);
    col_count_.assign(n_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      a_[i] = m.row(i);
      for (const auto& e : a_[i]) ++col_count_[e.col];
      if (!a_[i].empty()) active_rows_.push_back(i);
    }
    if (opt_.left) u_ = identity_rows(m_);
    if (opt_.right) vt_ = identity_rows(n_);
    if (opt_.right_inverse) vinv_ = identity_rows(n_);
  }

  SmithForm run() {
    while (auto pivot = find_pivot()) {
      auto [r, c] = *pivot;
      eliminate(r, c);
    }
    return assemble();
  }

 private:
  static std::vector<SparseRow> identity_rows(std::size_t n) {
    std::vector<SparseRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i].push_back({i, 1});
    return rows;
  }

  void replace_row(std::size_t i, SparseRow r) {
    for (const auto& e : a_[i]) --col_count_[e.col];
    for (const auto& e : r) ++col_count_[e.col];
    a_[i] = std::move(r);
  }

  std::optional<std::pair<std::size_t, std::size_t>> find_pivot() {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    const Integer* best_abs_src = nullptr;
    Integer best_abs;
    std::size_t best_cost = 0;
    std::size_t kept = 0;
    for (std::size_t idx = 0; idx < active_rows_.size(); ++idx) {
      std::size_t i = active_rows_[idx];
      if (a_[i].empty()) continue;  // rows that empty out never refill
      active_rows_[kept++] = i;
      const std::size_t row_cost = a_[i].size() - 1;
      for (const auto& e : a_[i]) {
        const std::size_t cost = row_cost * (col_count_[e.col] - 1);
        if (best_abs_src != nullptr) {
          int cmp = abs_compare(e.value, best_abs);
          if (cmp > 0 || (cmp == 0 && cost >= best_cost)) continue;
        }
        best = {i, e.col};
        best_abs = abs(e.value);
        best_abs_src = &e.value;
        best_cost = cost;
      }
    }
    active_rows_.resize(kept);
    return best;
  }

  static int abs_compare(const Integer& v, const Integer& absolute) {
    if (v >= 0) return v.compare(absolute);
    Integer t = -v;
    return t.compare(absolute);
  }

  std::vector<std::size_t> rows_with_column(std::size_t c, std::size_t exclude) const {
    std::vector<std::size_t> out;
    std::size_t remaining = col_count_[c];
    for (std::size_t i : active_rows_) {
      if (remaining == 0) break;
      if (lookup(a_[i], c) != 0) {
        --remaining;
        if (i != exclude) out.push_back(i);
      }
    }
    return out;
  }

  void eliminate(std::size_t r, std::size_t c) {
    while (true) {
      Integer p = lookup(a_[r], c);
      // clear column c with row operations
      std::optional<std::size_t> next_row;
      Integer next_abs;
      for (std::size_t i : rows_with_column(c, r)) {
        Integer q = round_div(lookup(a_[i], c), p);
        replace_row(i, axpy(a_[i], -q, a_[r]));
        if (opt_.left) u_[i] = axpy(u_[i], -q, u_[r]);
        const Integer& rem = lookup(a_[i], c);
        if (rem != 0 && (!next_row || abs(rem) < next_abs)) {
          next_row = i;
          next_abs = abs(rem);
        }
      }
      if (next_row) {
        r = *next_row;
        continue;
      }
      // column c is now zero outside row r: column operations only touch row r
      SparseRow reduced;
      std::optional<std::size_t> next_col;
      for (const auto& e : a_[r]) {
        if (e.col == c) {
          reduced.push_back(e);
          continue;
        }
        Integer q = round_div(e.value, p);
        Integer rem = e.value - q * p;
        if (q != 0) {
          if (opt_.right) vt_[e.col] = axpy(vt_[e.col], -q, vt_[c]);
          if (opt_.right_inverse) vinv_[c] = axpy(vinv_[c], q, vinv_[e.col]);
        }
        if (rem != 0) {
          if (!next_col || abs(rem) < next_abs) {
            next_col = e.col;
            next_abs = abs(rem);
          }
          reduced.push_back({e.col, std::move(rem)});
        }
      }
      replace_row(r, std::move(reduced));
      if (next_col) {
        c = *next_col;
        continue;
      }
      if (p < 0) {
        scale(a_[r], -1);
        if (opt_.left) scale(u_[r], -1);
        p = -p;
      }
      pivots_.push_back({r, c, p});
      active_rows_.erase(std::find(active_rows_.begin(), active_rows_.end(), r));
      return;
    }
  }

  SmithForm assemble() {
    std::stable_sort(pivots_.begin(), pivots_.end(),
                     [](const PivotRecord& x, const PivotRecord& y) { return x.value < y.value; });
    std::vector<std::size_t> row_order, col_order;
    std::vector<char> row_used(m_, 0), col_used(n_, 0);
    for (const auto& pv : pivots_) {
      row_order.push_back(pv.row);
      col_order.push_back(pv.col);
      row_used[pv.row] = 1;
      col_used[pv.col] = 1;
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (!row_used[i]) row_order.push_back(i);
    for (std::size_t j = 0; j < n_; ++j)
      if (!col_used[j]) col_order.push_back(j);

    std::vector<SparseRow> u, vt, vinv;
    if (opt_.left)
      for (std::size_t i : row_order) u.push_back(std::move(u_[i]));
    if (opt_.right)
      for (std::size_t j : col_order) vt.push_back(std::move(vt_[j]));
    if (opt_.right_inverse)
      for (std::size_t j : col_order) vinv.push_back(std::move(vinv_[j]));

    std::vector<Integer> d;
    d.reserve(pivots_.size());
    for (auto& pv : pivots_) d.push_back(std::move(pv.value));
    fix_divisibility_chain(d, u, vt, vinv);

    SmithForm out;
    out.rows = m_;
    out.cols = n_;
    out.diagonal = std::move(d);
    if (opt_.left) out.left = from_rows(std::move(u), m_);
    if (opt_.right) out.right_t = from_rows(std::move(vt), n_);
    if (opt_.right_inverse) out.right_inv = from_rows(std::move(vinv), n_);
    return out;
  }

  // Turns a sorted positive diagonal into a divisibility chain with 2x2
  // unimodular moves diag(a, b) -> diag(gcd, lcm).
  void fix_divisibility_chain(std::vector<Integer>& d, std::vector<SparseRow>& u,
                              std::vector<SparseRow>& vt, std::vector<SparseRow>& vinv) const {
    bool chain = true;
    for (std::size_t i = 1; i < d.size() && chain; ++i) chain = (d[i] % d[i - 1] == 0);
    if (chain) return;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == 1) continue;
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        if (d[j] % d[i] == 0) continue;
        const Integer a = d[i], b = d[j];
        auto [g, s, t] = extended_gcd(a, b);
        const Integer bg = b / g, ag = a / g;
        if (opt_.left) {
          SparseRow ui = combine(s, u[i], t, u[j]);
          SparseRow uj = combine(-bg, u[i], ag, u[j]);
          u[i] = std::move(ui);
          u[j] = std::move(uj);
        }
        if (opt_.right) {
          SparseRow vi = combine(1, vt[i], 1, vt[j]);
          SparseRow vj = combine(-t * bg, vt[i], s * ag, vt[j]);
          vt[i] = std::move(vi);
          vt[j] = std::move(vj);
        }
        if (opt_.right_inverse) {
          SparseRow wi = combine(s * ag, vinv[i], t * bg, vinv[j]);
          SparseRow wj = combine(-1, vinv[i], 1, vinv[j]);
          vinv[i] = std::move(wi);
          vinv[j] = std::move(wj);
        }
        d[i] = g;
        d[j] = a * bg;
        if (d[i] == 1) break;
      }
    }
  }

  static IntMatrix from_rows(std::vector<SparseRow> rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, std::move(rows[i]));
    return m;
  }

  struct PivotRecord {
    std::size_t row, col;
    Integer value;
  };

  std::size_t m_, n_;
  SnfOptions opt_;
  std::vector<SparseRow> a_;
  std::vector<std::size_t> col_count_;
  std::vector<std::size_t> active_rows_;
  std::vector<SparseRow> u_, vt_, vinv_;
  std::vector<PivotRecord> pivots_;
};

}  // namespace detail

inline SmithForm smith_form(const IntMatrix& m, SnfOptions opt = {}) {
  return detail::SnfEngine(m, opt).run();
}

/// Invariant diagonal only (no transforms).
inline std::vector<Integer> smith_diagonal(const IntMatrix& m) {
  return smith_form(m, {.left = false, .right = false, .right_inverse = false}).diagonal;
}

/// Full decomposition U * M * V = D with U, V unimodular.
inline SnfDecomposition snf(const IntMatrix& m) {
  SmithForm sf = smith_form(m, {.left = true, .right = true, .right_inverse = false});
  IntMatrix d(m.rows(), m.cols());
  for (std::size_t k = 0; k < sf.rank(); ++k) d.set(k, k, sf.diagonal[k]);
  return {std::move(sf.left), std::move(d), sf.right_t.transpose()};
}

/// Basis of the integer kernel {z : A z = 0}, one vector per row.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  SmithForm sf = smith_form(a, {.left = false, .right = true, .right_inverse = false});
  return sf.right_t.row_block(sf.rank(), a.cols() - sf.rank());
}

/// Solves A z = b over the integers, reusing one factorization for many
/// right-hand sides.
class IntegerSolver {
 public:
  explicit IntegerSolver(const IntMatrix& a)
      : sf_(smith_form(a, {.left = true, .right = true, .right_inverse = false})) {}

  std::optional<std::vector<Integer>> solve(std::span<const Integer> b) const {
    if (b.size() != sf_.rows) throw DimensionMismatch("right-hand side length does not match rows");
    std::vector<Integer> z(sf_.cols);
    for (std::size_t k = 0; k < sf_.rows; ++k) {
      Integer c = 0;
      for (const auto& e : sf_.left.row(k)) c += e.value * b[e.col];
      if (k >= sf_.rank()) {
        if (c != 0) return std::nullopt;
        continue;
      }
      if (c % sf_.diagonal[k] != 0) return std::nullopt;
      Integer w = c / sf_.diagonal[k];
      if (w == 0) continue;
      for (const auto& e : sf_.right_t.row(k)) z[e.col] += w * e.value;
    }
    return z;
  }

  const SmithForm& smith() const noexcept { return sf_; }

 private:
  SmithForm sf_;
};

namespace detail {

inline IntMatrix augment_with_moduli(const IntMatrix& m, std::span<const Integer> moduli) {
  if (moduli.size() != m.rows()) throw DimensionMismatch("one modulus per row is required");
  std::size_t extra = 0;
  for (const auto& q : moduli)
    if (q != 0) ++extra;
  IntMatrix aug(m.rows(), m.cols() + extra);
  std::size_t k = m.cols();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    SparseRow r = m.row(i);
    if (moduli[i] != 0) r.push_back({k++, abs(moduli[i])});
    aug.set_row(i, std::move(r));
  }
  return aug;
}

}  // namespace detail

/// Solves M x = b where row i is read modulo moduli[i] (0 means over Z).
class ModularSolver {
 public:
  ModularSolver(const IntMatrix& m, std::span<const Integer> moduli)
      : unknowns_(m.cols()), solver_(detail::augment_with_moduli(m, moduli)) {}

  std::optional<std::vector<Integer>> solve(std::span<const Integer> b) const {
    auto z = solver_.solve(b);
    if (!z) return std::nullopt;
    z->resize(unknowns_);
    return z;
  }

 private:
  std::size_t unknowns_;
  IntegerSolver solver_;
};

inline std::optional<std::vector<Integer>> solve_mod(const IntMatrix& m, std::span<const Integer> b,
                                                     std::span<const Integer> moduli) {
  if (b.size() != m.rows()) throw DimensionMismatch("right-hand side length does not match rows");
  return ModularSolver(m, moduli).solve(b);
}

/// True iff x -> M x is onto the product of the cyclic groups Z/moduli[i].
inline bool is_surjective_mod(const IntMatrix& m, std::span<const Integer> moduli) {
  auto d = smith_diagonal(detail::augment_with_moduli(m, moduli));
  if (d.size() != m.rows()) return false;
  return std::all_of(d.begin(), d.end(), [](const Integer& x) { return x == 1; });
}

}  // namespace uext
