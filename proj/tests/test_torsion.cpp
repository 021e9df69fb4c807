#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "uext/torsion.hpp"

using namespace uext;

namespace {

TorsionExpr T(std::string_view s) { return parse_torsion(s); }

std::size_t error_offset(std::string_view s) {
  try {
    parse_torsion(s);
  } catch (const ParseError& e) {
    return e.offset();
  }
  return SIZE_MAX;
}

const std::vector<int> kPrimes = {2, 3, 5, 7};

// Random expression text over a small alphabet of atoms.
std::string random_text(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 4), kind(0, 9), prime(0, 3), exp(1, 4), mult(0, 5);
  std::string s;
  for (int t = len(rng); t > 0; --t) {
    if (!s.empty()) s += "+";
    int p = kPrimes[prime(rng)];
    switch (kind(rng)) {
      case 0: case 1: case 2: s += "Z(" + std::to_string(p) + "^" + std::to_string(exp(rng)) + ")"; break;
      case 3: s += "Z(" + std::to_string(p * kPrimes[prime(rng)]) + ")"; break;
      case 4: case 5: s += "Z(" + std::to_string(p) + "^inf)"; break;
      case 6: case 7: s += "U(" + std::to_string(p) + ")"; break;
      case 8: s += "W"; break;
      default: s += "Z(" + std::to_string(p) + ")"; break;
    }
    int m = mult(rng);
    if (m == 5) s += "^inf";
    else if (m >= 2) s += "^" + std::to_string(m);
  }
  return s;
}

// Minimal order of a tuple in prod_{n<=N} Z(p^n) satisfying pred, found by
// listing every element and computing its order by repeated addition.
template <class Map>
std::uint64_t naive_min_order(std::uint64_t p, unsigned n, Map map) {
  std::vector<std::uint64_t> mod(n);
  std::uint64_t size = 1;
  for (unsigned i = 0; i < n; ++i) {
    mod[i] = i == 0 ? p : mod[i - 1] * p;
    size *= mod[i];
  }
  std::uint64_t best = UINT64_MAX;
  for (std::uint64_t code = 0; code < size; ++code) {
    std::vector<std::uint64_t> a(n);
    std::uint64_t c = code;
    for (unsigned i = 0; i < n; ++i) {
      a[i] = c % mod[i];
      c /= mod[i];
    }
    std::vector<std::uint64_t> y;
    if (!map(a, mod, y)) continue;
    std::vector<std::uint64_t> acc = y;
    std::uint64_t order = 1;
    while (std::any_of(acc.begin(), acc.end(), [](auto v) { return v != 0; })) {
      for (unsigned i = 0; i < n; ++i) acc[i] = (acc[i] + y[i]) % mod[i];
      ++order;
    }
    best = std::min(best, order);
  }
  return best;
}

}  // namespace

TEST(TorsionParse, Examples) {
  auto e = T("Z(8)+Z(2)^3");
  ASSERT_EQ(e.terms().size(), 2u);
  EXPECT_EQ(e.multiplicity(TorsionAtom::cyclic(2, 3))->n, 1);
  EXPECT_EQ(e.multiplicity(TorsionAtom::cyclic(2, 1))->n, 3);
  auto c = T("Z(12)");
  EXPECT_TRUE(c.has(TorsionAtom::cyclic(2, 2)));
  EXPECT_TRUE(c.has(TorsionAtom::cyclic(3, 1)));
  EXPECT_EQ(c.terms().size(), 2u);
  auto u = T("U(3)+Z(3^inf)");
  EXPECT_TRUE(u.has(TorsionAtom::unbounded(3)));
  EXPECT_TRUE(u.has(TorsionAtom::prufer(3)));
  EXPECT_TRUE(T("0").empty());
  EXPECT_TRUE(T("Z(1)").empty());
}

TEST(TorsionParse, MergesAndAbsorbs) {
  EXPECT_EQ(T("Z(2)+Z(2)^2"), T("Z(2)^3"));
  EXPECT_EQ(T("Z(2)^inf+Z(2)^4"), T("Z(2)^inf"));
  EXPECT_EQ(T("Z(6)+Z(3)"), T("Z(3)^2+Z(2)"));
  EXPECT_EQ(T(" W + U(5) "), T("U(5)+W"));
}

TEST(TorsionParse, ErrorsCarryOffsets) {
  EXPECT_EQ(error_offset("Z(4^2)"), 2u);
  EXPECT_EQ(error_offset("Z(2^0)"), 4u);
  EXPECT_EQ(error_offset("U(9)"), 2u);
  EXPECT_EQ(error_offset("Z(2)+"), 5u);
  EXPECT_EQ(error_offset("Z(2)*Z(3)"), 4u);
  EXPECT_EQ(error_offset("Q"), 0u);
  EXPECT_EQ(error_offset("Z(2"), 3u);
  EXPECT_EQ(error_offset(""), 0u);
  EXPECT_EQ(error_offset("Z(2)^0"), 5u);
  EXPECT_EQ(error_offset("Z(0)"), 2u);
  EXPECT_EQ(error_offset("Z+Z(2)"), 0u);
  EXPECT_EQ(error_offset("Z(2)^x"), 5u);
}

TEST(TorsionParse, PrintedFormReparses) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto e = T(random_text(rng));
    EXPECT_EQ(T(e.to_string()), e) << e.to_string();
  }
}

TEST(GroupParse, FiniteInputs) {
  EXPECT_EQ(parse_group("Z(4)+Z(6)"), FinGenAb(0, {2, 12}));
  EXPECT_EQ(parse_group("Z^2+Z(6)"), FinGenAb(2, {6}));
  EXPECT_EQ(parse_group("Z"), FinGenAb::free(1));
  EXPECT_EQ(parse_group("Z(2^3)^2"), FinGenAb(0, {8, 8}));
  EXPECT_EQ(parse_group("0"), FinGenAb::zero());
  EXPECT_THROW(parse_group("U(2)"), ParseError);
  EXPECT_THROW(parse_group("Z(2)^inf"), ParseError);
  EXPECT_THROW(parse_torsion("Z^2"), ParseError);
}

TEST(PComponent, Examples) {
  EXPECT_EQ(p_component(T("Z(12)"), 2), T("Z(4)"));
  EXPECT_EQ(p_component(T("W"), 5), T("Z(5)"));
  EXPECT_TRUE(p_component(T("U(3)"), 2).empty());
  EXPECT_EQ(p_component(T("W^inf+U(2)"), 2), T("Z(2)^inf+U(2)"));
  EXPECT_THROW(p_component(T("W"), 4), InvalidArgument);
}

TEST(DivisibleReducedSplit, Examples) {
  auto s = divisible_reduced_split(T("Z(2^inf)^inf + Z(4)"));
  EXPECT_EQ(s.divisible, T("Z(2^inf)^inf"));
  EXPECT_EQ(s.reduced, T("Z(4)"));
  auto pure = divisible_reduced_split(T("Z(3^inf)+Z(5^inf)^2"));
  EXPECT_EQ(pure.divisible, T("Z(3^inf)+Z(5^inf)^2"));
  EXPECT_TRUE(pure.reduced.empty());
  auto u = divisible_reduced_split(T("U(2)"));
  EXPECT_TRUE(u.divisible.empty());
  EXPECT_EQ(u.reduced, T("U(2)"));
}

TEST(ClassifyTorsion, Examples) {
  auto u = classify_torsion(T("U(2)"));
  EXPECT_FALSE(u.verdict_tz);
  ASSERT_TRUE(u.witness_prime);
  EXPECT_EQ(*u.witness_prime, 2);
  EXPECT_FALSE(u.cotorsion);

  auto b = classify_torsion(T("Z(5^inf)^3 + Z(5^2)^inf"));
  EXPECT_TRUE(b.verdict_tz);
  EXPECT_TRUE(b.cotorsion);
  ASSERT_EQ(b.primes.size(), 1u);
  EXPECT_EQ(*b.primes[0].bound, 25);

  auto w = classify_torsion(T("W"));
  EXPECT_TRUE(w.verdict_tz);
  EXPECT_FALSE(w.cotorsion);
  EXPECT_TRUE(w.all_primes_cyclic);

  auto mixed = classify_torsion(T("U(3)+U(7)+Z(2)"));
  EXPECT_EQ(*mixed.witness_prime, 3);
  EXPECT_TRUE(mixed.verdict_tp(2));
  EXPECT_FALSE(mixed.verdict_tp(3));
  EXPECT_TRUE(mixed.verdict_tp(11));

  auto zero = classify_torsion(T("0"));
  EXPECT_TRUE(zero.verdict_tz);
  EXPECT_TRUE(zero.cotorsion);
  EXPECT_EQ(*zero.cotorsion_bound, 1);
}

TEST(Cotorsion, Examples) {
  auto z = is_cotorsion(T("Z(2)^inf"));
  EXPECT_TRUE(z.cotorsion);
  EXPECT_EQ(*z.bound, 2);
  EXPECT_FALSE(is_cotorsion(T("U(7)")).cotorsion);
  EXPECT_FALSE(is_cotorsion(T("W")).cotorsion);
  auto m = is_cotorsion(T("Z(4)+Z(9)^inf+Z(5^inf)"));
  EXPECT_EQ(*m.bound, 36);
  EXPECT_EQ(m.decomposition.divisible, T("Z(5^inf)"));
}

TEST(ClassifyTorsion, InvariantUnderRewriting) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    std::string text = random_text(rng);
    // split into terms, shuffle, and duplicate a finite term as two halves
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t j = 0; j <= text.size(); ++j)
      if (j == text.size() || text[j] == '+') {
        parts.push_back(text.substr(start, j - start));
        start = j + 1;
      }
    std::shuffle(parts.begin(), parts.end(), rng);
    std::string shuffled;
    for (const auto& p : parts) shuffled += (shuffled.empty() ? "" : "+") + p;
    auto a = classify_torsion(T(text));
    auto b = classify_torsion(T(shuffled));
    EXPECT_EQ(T(text), T(shuffled));
    EXPECT_EQ(a.verdict_tz, b.verdict_tz);
    EXPECT_EQ(a.cotorsion, b.cotorsion);
    EXPECT_EQ(a.witness_prime, b.witness_prime);
  }
}

TEST(ClassifyTorsion, AgreesWithPrimaryComponents) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    auto e = T(random_text(rng));
    auto r = classify_torsion(e);
    bool all = true;
    for (int p : kPrimes) {
      auto rp = classify_torsion(p_component(e, p));
      EXPECT_EQ(rp.verdict_tz, r.verdict_tp(p));
      all = all && rp.verdict_tz;
    }
    EXPECT_EQ(all, r.verdict_tz) << e.to_string();
    if (r.cotorsion) EXPECT_TRUE(r.verdict_tz) << e.to_string();
  }
}

TEST(QuotientClosure, Examples) {
  auto a = quotient_closure_check(T("Z(4)^inf"), T("Z(2)^inf"));
  EXPECT_TRUE(a.source_universal);
  EXPECT_TRUE(a.quotient_universal);
  auto b = quotient_closure_check(T("Z(2^inf)"), T("Z(2^inf)"));
  EXPECT_TRUE(b.source_universal && b.quotient_universal);
  auto c = quotient_closure_check(T("U(2)"), T("Z(2^5)"));
  EXPECT_FALSE(c.source_universal);
  EXPECT_TRUE(c.quotient_universal);
  EXPECT_TRUE(c.consistent());
  EXPECT_THROW(quotient_closure_check(T("Z(2)"), T("Z(4)")), NotAQuotient);
  EXPECT_THROW(quotient_closure_check(T("Z(2)"), T("Z(2)^2")), NotAQuotient);
  EXPECT_THROW(quotient_closure_check(T("Z(2^inf)"), T("Z(2)")), NotAQuotient);
  EXPECT_THROW(quotient_closure_check(T("Z(3)"), T("W")), NotAQuotient);
  EXPECT_NO_THROW(quotient_closure_check(T("W"), T("Z(3)")));
  EXPECT_NO_THROW(quotient_closure_check(T("Z(8)+Z(2)"), T("Z(4)+Z(2)")));
  EXPECT_THROW(quotient_closure_check(T("Z(8)+Z(2)"), T("Z(4)^2")), NotAQuotient);
}

TEST(QuotientClosure, MonotoneOnRandomQuotients) {
  std::mt19937_64 rng(14);
  std::bernoulli_distribution coin(0.5);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    auto e = T(random_text(rng));
    // shrink: drop terms, lower exponents, turn U(p) into cyclics
    TorsionExpr q;
    for (const auto& [a, m] : e.terms()) {
      if (coin(rng)) continue;
      switch (a.kind) {
        case TorsionAtom::Kind::cyclic: q.add(TorsionAtom::cyclic(a.p, 1 + (a.k - 1) / 2), m); break;
        case TorsionAtom::Kind::unbounded:
          if (coin(rng)) q.add(TorsionAtom::cyclic(a.p, 7), Multiplicity::infinite());
          else q.add(a, m);
          break;
        default: q.add(a, m);
      }
    }
    auto r = quotient_closure_check(e, q);
    EXPECT_TRUE(r.consistent()) << e.to_string() << " -> " << q.to_string();
    ++checked;
  }
  EXPECT_EQ(checked, 500);
}

TEST(Witness, Examples) {
  EXPECT_EQ(counterexample_witness(2, 1).order, 2);
  auto w = counterexample_witness(2, 4);
  EXPECT_EQ(w.order, 16);
  EXPECT_EQ(w.method, "brute-force");
  EXPECT_EQ(w.search_space, 1024);
  EXPECT_EQ(counterexample_witness(3, 3).order, 27);
  EXPECT_EQ(ab4star_failure_witness(2, 1).order, 2);
  EXPECT_EQ(ab4star_failure_witness(2, 5).order, 32);
  EXPECT_EQ(ab4star_failure_witness(5, 2).order, 25);
}

TEST(Witness, MatchesNaiveEnumeration) {
  for (auto [p, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}}) {
    auto cx = naive_min_order(p, n, [p](const auto& a, const auto& mod, auto& y) {
      y.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) y[i] = ((1 + mod[i] * p) - (p * a[i]) % mod[i]) % mod[i];
      return true;
    });
    auto ab = naive_min_order(p, n, [p](const auto& a, const auto&, auto& y) {
      for (auto v : a)
        if (v % p != 1 % p) return false;
      y = a;
      return true;
    });
    EXPECT_EQ(counterexample_witness(p, n).order, cx);
    EXPECT_EQ(ab4star_failure_witness(p, n).order, ab);
  }
}

TEST(Witness, GrowthAndFastPath) {
  Integer prev = 0;
  for (unsigned n = 1; n <= 8; ++n) {
    auto a = counterexample_witness(2, n);
    auto b = ab4star_failure_witness(2, n);
    EXPECT_EQ(a.order, ipow(Integer(2), n));
    EXPECT_EQ(a.order, b.order);
    EXPECT_GT(a.order, prev);
    prev = a.order;
    EXPECT_EQ(a.method, n <= 6 ? "brute-force" : "unit-argument");
  }
  auto fast = counterexample_witness(2, 4, 0);
  EXPECT_EQ(fast.method, "unit-argument");
  EXPECT_EQ(fast.order, counterexample_witness(2, 4).order);
  EXPECT_THROW(counterexample_witness(2, 8, kWitnessBudget, false), BudgetExceeded);
  EXPECT_THROW(counterexample_witness(4, 2), InvalidArgument);
  EXPECT_THROW(ab4star_failure_witness(2, 0), InvalidArgument);
}
