#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "uext/group.hpp"

namespace uext::testing {

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo = -9, int hi = 9) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, d(rng));
  return m;
}

// Bareiss elimination; exact for square integer matrices.
inline Integer determinant(const IntMatrix& m) {
  auto a = m.to_dense();
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline FinGenAb random_group(std::mt19937_64& rng, unsigned max_order = 24, std::size_t max_rank = 0) {
  auto all = groups_up_to_order(max_order);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1), rank(0, max_rank);
  const FinGenAb& g = all[pick(rng)];
  return FinGenAb(rank(rng), g.factors());
}

// Random well-defined map: entry (j, i) is a multiple of t_j / gcd(s_i, t_j).
inline AbMap random_map(std::mt19937_64& rng, const FinGenAb& s, const FinGenAb& t) {
  std::uniform_int_distribution<int> d(-12, 12);
  IntMatrix m(t.generator_count(), s.generator_count());
  for (std::size_t j = 0; j < t.generator_count(); ++j)
    for (std::size_t i = 0; i < s.generator_count(); ++i) {
      const Integer& si = s.modulus(i);
      const Integer& tj = t.modulus(j);
      if (si == 0) {
        m.set(j, i, d(rng));
      } else if (tj != 0) {
        m.set(j, i, tj / gcd(si, tj) * d(rng));
      }
    }
  return AbMap(s, t, m);
}

// Every element of a finite group in normal form.
inline std::vector<std::vector<Integer>> elements(const FinGenAb& g) {
  std::vector<std::vector<Integer>> out;
  std::vector<Integer> x(g.generator_count());
  while (true) {
    out.push_back(x);
    std::size_t k = 0;
    while (k < x.size() && ++x[k] == g.modulus(k)) x[k++] = 0;
    if (k == x.size()) return out;
  }
}

inline std::size_t kernel_size(const AbMap& f) {
  std::size_t n = 0;
  for (const auto& x : elements(f.source())) {
    auto y = f(x);
    if (std::all_of(y.begin(), y.end(), [](const Integer& v) { return v == 0; })) ++n;
  }
  return n;
}

inline std::size_t image_size(const AbMap& f) {
  std::set<std::vector<Integer>> seen;
  for (const auto& x : elements(f.source())) seen.insert(f(x));
  return seen.size();
}

}  // namespace uext::testing
