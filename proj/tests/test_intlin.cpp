#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "uext/snf.hpp"

using namespace uext;
using uext::testing::determinant;
using uext::testing::random_matrix;

namespace {

bool is_diagonal_chain(const IntMatrix& d) {
  std::size_t k = std::min(d.rows(), d.cols());
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (const auto& e : d.row(i))
      if (e.col != i) return false;
  for (std::size_t i = 0; i < k; ++i) {
    if (d.at(i, i) < 0) return false;
    if (i + 1 < k && d.at(i + 1, i + 1) != 0 && (d.at(i, i) == 0 || d.at(i + 1, i + 1) % d.at(i, i) != 0)) return false;
    if (i + 1 < k && d.at(i, i) == 0 && d.at(i + 1, i + 1) != 0) return false;
  }
  return true;
}

void expect_valid(const IntMatrix& m) {
  auto [u, d, v] = snf(m);
  ASSERT_EQ(u.rows(), m.rows());
  ASSERT_EQ(v.cols(), m.cols());
  EXPECT_EQ(u * m * v, d);
  EXPECT_EQ(abs(determinant(u)), 1);
  EXPECT_EQ(abs(determinant(v)), 1);
  EXPECT_TRUE(is_diagonal_chain(d));
}

// Brute force over the box [0, bound)^n.
bool exists_solution(const IntMatrix& m, const std::vector<Integer>& b, const std::vector<Integer>& moduli, int bound) {
  const std::size_t n = m.cols();
  std::vector<Integer> x(n);
  while (true) {
    auto y = m.apply(x);
    bool ok = true;
    for (std::size_t i = 0; i < y.size() && ok; ++i) ok = reduce(y[i] - b[i], moduli[i]) == 0;
    if (ok) return true;
    std::size_t k = 0;
    while (k < n && ++x[k] == bound) x[k++] = 0;
    if (k == n) return false;
  }
}

}  // namespace

TEST(Snf, TwoByTwoExample) {
  auto m = IntMatrix::of({{2, 4}, {6, 8}});
  auto dec = snf(m);
  EXPECT_EQ(dec.D, IntMatrix::of({{2, 0}, {0, 4}}));
  expect_valid(m);
  // d1 = gcd of entries, d1 d2 = |det|
  EXPECT_EQ(dec.D.at(0, 0), 2);
  EXPECT_EQ(dec.D.at(0, 0) * dec.D.at(1, 1), abs(determinant(m)));
}

TEST(Snf, EmptyAndIdentity) {
  auto e = snf(IntMatrix(0, 0));
  EXPECT_EQ(e.D.rows(), 0u);
  EXPECT_EQ(e.U.rows(), 0u);
  EXPECT_EQ(snf(IntMatrix::identity(3)).D, IntMatrix::identity(3));
  expect_valid(IntMatrix(0, 4));
  expect_valid(IntMatrix(3, 0));
  expect_valid(IntMatrix(3, 2));
}

TEST(Snf, RandomMatricesSatisfyInvariants) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dim(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    auto m = random_matrix(rng, dim(rng), dim(rng));
    SCOPED_TRACE(trial);
    expect_valid(m);
  }
}

TEST(Snf, SparseRandomMatrices) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 12), coin(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = random_matrix(rng, dim(rng), dim(rng), -30, 30);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (coin(rng) != 0) m.set(i, j, 0);
    expect_valid(m);
  }
}

TEST(Snf, Deterministic) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_matrix(rng, 5, 4);
    auto a = snf(m), b = snf(m);
    EXPECT_EQ(a.U, b.U);
    EXPECT_EQ(a.D, b.D);
    EXPECT_EQ(a.V, b.V);
  }
}

TEST(Snf, DiagonalMatchesDeterminantalDivisors) {
  // For square nonsingular M the product of invariant factors is |det M|.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = random_matrix(rng, 4, 4);
    Integer det = determinant(m);
    auto d = smith_diagonal(m);
    if (det == 0) {
      EXPECT_LT(d.size(), 4u);
      continue;
    }
    Integer prod = 1;
    for (const auto& x : d) prod *= x;
    EXPECT_EQ(prod, abs(det));
  }
}

TEST(Snf, LargeEntriesStayExact) {
  IntMatrix m(2, 2);
  Integer big = ipow(Integer(10), 60);
  m.set(0, 0, big);
  m.set(0, 1, big + 1);
  m.set(1, 0, big - 1);
  m.set(1, 1, big);
  expect_valid(m);
  EXPECT_EQ(smith_diagonal(m), (std::vector<Integer>{1, 1}));
}

TEST(Snf, KernelAndIntegerSolver) {
  auto m = IntMatrix::of({{1, 2, 3}, {2, 4, 6}});
  auto k = integer_kernel(m);
  EXPECT_EQ(k.rows(), 2u);
  EXPECT_TRUE((m * k.transpose()).is_zero());
  IntegerSolver s(m);
  auto x = s.solve(std::vector<Integer>{5, 10});
  ASSERT_TRUE(x);
  EXPECT_EQ(m.apply(*x), (std::vector<Integer>{5, 10}));
  EXPECT_FALSE(s.solve(std::vector<Integer>{5, 11}));
}

TEST(SolveMod, Examples) {
  EXPECT_FALSE(solve_mod(IntMatrix::of({{2}}), std::vector<Integer>{1}, std::vector<Integer>{4}));
  auto x = solve_mod(IntMatrix::of({{1}}), std::vector<Integer>{7}, std::vector<Integer>{0});
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, std::vector<Integer>{7});
  auto m = IntMatrix::of({{2, 0}, {0, 3}});
  std::vector<Integer> b{2, 3}, mod{4, 9};
  auto y = solve_mod(m, b, mod);
  ASSERT_TRUE(y);
  auto image = m.apply(*y);
  EXPECT_EQ(reduce(image[0] - 2, 4), 0);
  EXPECT_EQ(reduce(image[1] - 3, 9), 0);
}

TEST(SolveMod, DimensionMismatch) {
  EXPECT_THROW(solve_mod(IntMatrix::of({{1, 2}}), std::vector<Integer>{1, 2}, std::vector<Integer>{3, 3}),
               DimensionMismatch);
}

TEST(SolveMod, AgreesWithExhaustiveSearch) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> dim(1, 3), mod(2, 6), val(-6, 6);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t r = dim(rng), c = dim(rng);
    auto m = random_matrix(rng, r, c, -6, 6);
    std::vector<Integer> b(r), moduli(r);
    for (std::size_t i = 0; i < r; ++i) {
      moduli[i] = mod(rng);
      b[i] = val(rng);
    }
    auto x = solve_mod(m, b, moduli);
    // lcm of moduli bounds every residue class that matters
    Integer l = 1;
    for (const auto& q : moduli) l = lcm(l, q);
    bool brute = exists_solution(m, b, moduli, static_cast<int>(l));
    EXPECT_EQ(x.has_value(), brute) << trial;
    if (x) {
      auto y = m.apply(*x);
      for (std::size_t i = 0; i < r; ++i) EXPECT_EQ(reduce(y[i] - b[i], moduli[i]), 0);
    }
  }
}

TEST(IsSurjectiveMod, Examples) {
  EXPECT_TRUE(is_surjective_mod(IntMatrix::of({{1}}), std::vector<Integer>{5}));
  EXPECT_FALSE(is_surjective_mod(IntMatrix::of({{2}}), std::vector<Integer>{4}));
}

TEST(IsSurjectiveMod, AgreesWithImageEnumeration) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> dim(1, 3), mod(2, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = dim(rng), c = dim(rng);
    auto m = random_matrix(rng, r, c, -5, 5);
    std::vector<Integer> moduli(r);
    for (auto& q : moduli) q = mod(rng);
    bool all = true;
    std::vector<Integer> target(r);
    Integer l = 1;
    for (const auto& q : moduli) l = lcm(l, q);
    // enumerate every target element
    while (all) {
      all = exists_solution(m, target, moduli, static_cast<int>(l));
      std::size_t k = 0;
      while (k < r && ++target[k] == moduli[k]) target[k++] = 0;
      if (k == r) break;
    }
    EXPECT_EQ(is_surjective_mod(m, moduli), all) << trial;
  }
  // Z -> Z(4) + Z(9), 1 |-> (2, 3): image has order lcm(2, 3) = 6 < 36
  EXPECT_FALSE(is_surjective_mod(IntMatrix::of({{2}, {3}}), std::vector<Integer>{4, 9}));
}

TEST(IntegerHelpers, Basics) {
  EXPECT_EQ(reduce(-3, 5), 2);
  EXPECT_EQ(reduce(-3, 0), -3);
  auto b = extended_gcd(12, 18);
  EXPECT_EQ(b.g, 6);
  EXPECT_EQ(b.s * 12 + b.t * 18, 6);
  EXPECT_TRUE(is_prime(Integer(1000003)));
  EXPECT_FALSE(is_prime(Integer(1000001)));
  auto f = factorize(360);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0].prime, 2);
  EXPECT_EQ(f[0].exponent, 3u);
  EXPECT_THROW(parse_decimal("12a"), InvalidArgument);
}
