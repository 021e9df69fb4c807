#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "uext/error.hpp"
#include "uext/integer.hpp"

namespace uext {

struct Entry {
  std::size_t col;
  Integer value;
  bool operator==(const Entry&) const = default;
};

/// Sorted by column, no stored zeros.
using SparseRow = std::vector<Entry>;

namespace detail {

inline const Integer& zero_integer() {
  static const Integer z = 0;
  return z;
}

inline const Integer& lookup(const SparseRow& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const Entry& e, std::size_t c) { return e.col < c; });
  if (it != row.end() && it->col == col) return it->value;
  return zero_integer();
}

/// dst + q * src
inline SparseRow axpy(const SparseRow& dst, const Integer& q, const SparseRow& src) {
  if (q == 0 || src.empty()) return dst;
  SparseRow out;
  out.reserve(dst.size() + src.size());
  auto a = dst.begin();
  auto b = src.begin();
  while (a != dst.end() || b != src.end()) {
    if (b == src.end() || (a != dst.end() && a->col < b->col)) {
      out.push_back(*a++);
    } else if (a == dst.end() || b->col < a->col) {
      out.push_back({b->col, q * b->value});
      ++b;
    } else {
      Integer v = a->value + q * b->value;
      if (v != 0) out.push_back({a->col, std::move(v)});
      ++a;
      ++b;
    }
  }
  return out;
}

/// p * x + q * y
inline SparseRow combine(const Integer& p, const SparseRow& x, const Integer& q, const SparseRow& y) {
  SparseRow out;
  out.reserve(x.size() + y.size());
  auto a = x.begin();
  auto b = y.begin();
  while (a != x.end() || b != y.end()) {
    Integer v;
    std::size_t col;
    if (b == y.end() || (a != x.end() && a->col < b->col)) {
      col = a->col;
      v = p * a->value;
      ++a;
    } else if (a == x.end() || b->col < a->col) {
      col = b->col;
      v = q * b->value;
      ++b;
    } else {
      col = a->col;
      v = p * a->value + q * b->value;
      ++a;
      ++b;
    }
    if (v != 0) out.push_back({col, std::move(v)});
  }
  return out;
}

inline void scale(SparseRow& row, const Integer& q) {
  if (q == 0) {
    row.clear();
    return;
  }
  for (auto& e : row) e.value *= q;
}

inline void set_entry(SparseRow& row, std::size_t col, Integer value) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const Entry& e, std::size_t c) { return e.col < c; });
  if (it != row.end() && it->col == col) {
    if (value == 0)
      row.erase(it);
    else
      it->value = std::move(value);
  } else if (value != 0) {
    row.insert(it, Entry{col, std::move(value)});
  }
}

}  // namespace detail

/// Exact integer matrix stored as sorted sparse rows. Presentation matrices in
/// this library are large but very sparse (direct sums of hundreds of small
/// blocks), so only nonzero entries are kept.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i].push_back({i, 1});
    return m;
  }

  static IntMatrix diagonal(std::span<const Integer> d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] != 0) m.data_[i].push_back({i, d[i]});
    return m;
  }

  static IntMatrix from_dense(const std::vector<std::vector<Integer>>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = rows.front().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j)
        if (rows[i][j] != 0) m.data_[i].push_back({j, rows[i][j]});
    }
    return m;
  }

  static IntMatrix of(std::initializer_list<std::initializer_list<long long>> rows) {
    std::vector<std::vector<Integer>> dense;
    for (const auto& r : rows) dense.emplace_back(r.begin(), r.end());
    return from_dense(dense);
  }

  static IntMatrix column(std::span<const Integer> v) {
    IntMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0) m.data_[i].push_back({0, v[i]});
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const Integer& at(std::size_t i, std::size_t j) const { return detail::lookup(data_.at(i), j); }

  void set(std::size_t i, std::size_t j, Integer v) {
    if (i >= rows_ || j >= cols_) throw DimensionMismatch("matrix index out of range");
    detail::set_entry(data_[i], j, std::move(v));
  }

  const SparseRow& row(std::size_t i) const { return data_.at(i); }

  void set_row(std::size_t i, SparseRow r) {
    for (const auto& e : r)
      if (e.col >= cols_) throw DimensionMismatch("row entry out of range");
    data_.at(i) = std::move(r);
  }

  void append_row(SparseRow r) {
    for (const auto& e : r)
      if (e.col >= cols_) throw DimensionMismatch("row entry out of range");
    data_.push_back(std::move(r));
    ++rows_;
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const SparseRow& r) { return r.empty(); });
  }

  std::vector<std::vector<Integer>> to_dense() const {
    std::vector<std::vector<Integer>> out(rows_, std::vector<Integer>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& e : data_[i]) out[i][e.col] = e.value;
    return out;
  }

  std::vector<Integer> column_vector(std::size_t j) const {
    std::vector<Integer> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& e : data_[i]) t.data_[e.col].push_back({i, e.value});
    return t;
  }

  /// M x
  std::vector<Integer> apply(std::span<const Integer> x) const {
    if (x.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
    std::vector<Integer> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& e : data_[i]) out[i] += e.value * x[e.col];
    return out;
  }

  IntMatrix operator*(const IntMatrix& other) const {
    if (cols_ != other.rows_) throw DimensionMismatch("matrix product size mismatch");
    IntMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      SparseRow acc;
      for (const auto& e : data_[i]) acc = detail::axpy(acc, e.value, other.data_[e.col]);
      out.data_[i] = std::move(acc);
    }
    return out;
  }

  IntMatrix operator+(const IntMatrix& other) const { return combined(1, other); }
  IntMatrix operator-(const IntMatrix& other) const { return combined(-1, other); }

  IntMatrix operator-() const {
    IntMatrix out = *this;
    for (auto& r : out.data_) detail::scale(r, -1);
    return out;
  }

  IntMatrix scaled(const Integer& q) const {
    IntMatrix out = *this;
    for (auto& r : out.data_) detail::scale(r, q);
    return out;
  }

  /// Columns [first, first + count).
  IntMatrix column_block(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw DimensionMismatch("column block out of range");
    IntMatrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& e : data_[i])
        if (e.col >= first && e.col < first + count) out.data_[i].push_back({e.col - first, e.value});
    return out;
  }

  IntMatrix row_block(std::size_t first, std::size_t count) const {
    if (first + count > rows_) throw DimensionMismatch("row block out of range");
    IntMatrix out(count, cols_);
    for (std::size_t i = 0; i < count; ++i) out.data_[i] = data_[first + i];
    return out;
  }

  static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_) throw DimensionMismatch("hstack row mismatch");
    IntMatrix out(a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      out.data_[i] = a.data_[i];
      for (const auto& e : b.data_[i]) out.data_[i].push_back({e.col + a.cols_, e.value});
    }
    return out;
  }

  static IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.cols_) throw DimensionMismatch("vstack column mismatch");
    IntMatrix out(a.rows_ + b.rows_, a.cols_);
    std::copy(a.data_.begin(), a.data_.end(), out.data_.begin());
    std::copy(b.data_.begin(), b.data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(a.rows_));
    return out;
  }

  /// Block-diagonal sum.
  static IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix out(a.rows_ + b.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) out.data_[i] = a.data_[i];
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (const auto& e : b.data_[i]) out.data_[a.rows_ + i].push_back({e.col + a.cols_, e.value});
    return out;
  }

  bool operator==(const IntMatrix& other) const = default;

 private:
  IntMatrix combined(const Integer& sign, const IntMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix sum size mismatch");
    IntMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = detail::axpy(data_[i], sign, other.data_[i]);
    return out;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseRow> data_;
};

}  // namespace uext
