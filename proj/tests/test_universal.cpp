#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "uext/oracle.hpp"
#include "uext/universal.hpp"

using namespace uext;
using namespace uext::testing;

namespace {

FinGenAb Z(long long n) { return FinGenAb::cyclic(n); }
FinGenAb G(std::vector<Integer> f, std::size_t rank = 0) { return FinGenAb(rank, std::move(f)); }

ExtClass random_class(std::mt19937_64& rng, const FinGenAb& a, const FinGenAb& b) {
  auto m = ext_coordinate_moduli(a, b);
  std::vector<Integer> c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::uniform_int_distribution<long long> d(0, static_cast<long long>(m[i]) - 1);
    c[i] = d(rng);
  }
  return ExtClass(a, b, c);
}

std::vector<FinGenAb> random_family(std::mt19937_64& rng, unsigned max_order, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::vector<FinGenAb> out;
  for (std::size_t k = len(rng); k > 0; --k) out.push_back(random_group(rng, max_order));
  return out;
}

}  // namespace

TEST(Psi, Examples) {
  auto single = psi({G({2, 4})}, Z(2));
  EXPECT_EQ(single.map, AbMap::identity(single.map.source()));
  auto two = psi({Z(2), Z(2)}, Z(2));
  EXPECT_EQ(two.domain.group().order(), 4);
  EXPECT_TRUE(two.bijective);
  EXPECT_EQ(oracle::ext_by_cocycles(G({2, 2}), Z(2)).order, 4);
  auto none = psi({}, Z(5));
  EXPECT_TRUE(none.map.source().is_trivial());
  EXPECT_TRUE(none.map.target().is_trivial());
  EXPECT_TRUE(none.bijective);
}

TEST(Psi, BijectiveOnRandomFamilies) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    auto fam = random_family(rng, 16, 3);
    auto b = random_group(rng, 16, 1);
    auto p = psi(fam, b);
    EXPECT_TRUE(p.injective);
    EXPECT_TRUE(p.bijective);
    EXPECT_EQ(p.domain.group().order(), p.codomain.total.order());
  }
}

TEST(Phi, BijectiveOnRandomFamilies) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    auto fam = random_family(rng, 16, 3);
    auto b = random_group(rng, 16, 1);
    auto p = phi(b, fam);
    EXPECT_TRUE(p.injective);
    EXPECT_TRUE(p.bijective);
  }
}

TEST(PsiInverse, Examples) {
  auto eta = ExtClass(Z(2), Z(2), {1});
  auto one = psi_inverse_via_colim(Z(2), {eta});
  EXPECT_TRUE(equivalent(one.sequence, realize(eta)) ||
              classify(pullback_sequence(one.sequence, one.quotients.injections[0])) == eta);
  auto split = ExtClass::split(Z(2), Z(2));
  auto both_split = psi_inverse_via_colim(Z(2), {split, split});
  EXPECT_TRUE(classify(both_split.sequence).is_split());
  auto mixed = psi_inverse_via_colim(Z(2), {split, eta});
  EXPECT_EQ(mixed.sequence.middle().order(), 8);
  EXPECT_EQ(pullback_action(classify(mixed.sequence), mixed.quotients.injections[0]), split);
  EXPECT_EQ(pullback_action(classify(mixed.sequence), mixed.quotients.injections[1]), eta);
  // geometric pullback agrees
  EXPECT_EQ(classify(pullback_sequence(mixed.sequence, mixed.quotients.injections[1])), eta);
}

TEST(PsiInverse, RoundTripsOnRandomFamilies) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    auto fam = random_family(rng, 16, 3);
    auto a = random_group(rng, 16, 1);
    std::vector<ExtClass> classes;
    for (const auto& b : fam) classes.push_back(random_class(rng, b, a));
    auto r = psi_inverse_via_colim(a, classes);
    auto eta = classify(r.sequence);
    for (std::size_t i = 0; i < fam.size(); ++i) EXPECT_EQ(pullback_action(eta, r.quotients.injections[i]), classes[i]);
  }
}

TEST(PhiInverse, RoundTripsOnRandomFamilies) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    auto fam = random_family(rng, 16, 3);
    auto q = random_group(rng, 16);
    std::vector<ExtClass> classes;
    for (const auto& a : fam) classes.push_back(random_class(rng, q, a));
    auto r = phi_inverse_via_lim(q, classes);
    auto eta = classify(r.sequence);
    for (std::size_t i = 0; i < fam.size(); ++i) EXPECT_EQ(pushout_action(eta, r.subs.projections[i]), classes[i]);
  }
}

TEST(UniversalExtension, Examples) {
  auto deg = build_universal_extension(Z(2), Z(3));
  EXPECT_TRUE(deg.degenerate);
  EXPECT_TRUE(deg.x.empty());
  EXPECT_TRUE(deg.universal());
  EXPECT_EQ(deg.sequence.middle(), Z(3));

  auto c = build_universal_extension(Z(2), Z(2));
  EXPECT_FALSE(c.degenerate);
  EXPECT_EQ(c.x.size(), 2u);
  EXPECT_EQ(c.sequence.middle().order(), 8);
  EXPECT_TRUE(c.condition_a.pass);
  EXPECT_TRUE(c.condition_b.pass);
  EXPECT_TRUE(c.condition_c.pass);
  EXPECT_TRUE(c.universal());

  auto d = build_universal_extension(Z(4), Z(2));
  EXPECT_EQ(d.x.size(), 2u);
  EXPECT_TRUE(d.universal());
}

TEST(UniversalExtension, DeltaWitnessesReproduceGenerators) {
  auto c = build_universal_extension(G({2, 4}), Z(4));
  ExtGroup ext(G({2, 4}), Z(4));
  ASSERT_EQ(c.delta_witnesses.size(), ext.group().generator_count());
  for (std::size_t i = 0; i < c.delta_witnesses.size(); ++i)
    EXPECT_EQ(classify(pullback_sequence(c.sequence, c.delta_witnesses[i])), ext.generator(i));
}

TEST(UniversalExtension, NonUniversalSequencesFailAllThree) {
  // a single split copy cannot reach the nonsplit class
  auto split = realize(ExtClass::split(Z(2), Z(2)));
  auto cs = extension_conditions(split, Z(2));
  EXPECT_FALSE(cs.a.pass);
  EXPECT_FALSE(cs.b.pass);
  EXPECT_FALSE(cs.c.pass);
  // random sequences: the verdicts always agree
  std::mt19937_64 rng(5);
  int positive = 0, negative = 0;
  for (int trial = 0; trial < 80; ++trial) {
    auto b = random_group(rng, 8), a = random_group(rng, 8);
    std::uniform_int_distribution<int> copies(1, 3);
    std::vector<ExtClass> classes;
    for (int k = copies(rng); k > 0; --k) classes.push_back(random_class(rng, b, a));
    auto r = psi_inverse_via_colim(a, classes);
    auto cs2 = extension_conditions(r.sequence, b);
    EXPECT_TRUE(cs2.agree());
    (cs2.a.pass ? positive : negative)++;
    auto l = phi_inverse_via_lim(a, std::vector<ExtClass>{random_class(rng, a, b)});
    EXPECT_TRUE(coextension_conditions(l.sequence, b).agree());
  }
  EXPECT_GT(positive, 0);
  EXPECT_GT(negative, 0);
}

TEST(UniversalCoextension, Examples) {
  auto deg = build_universal_coextension(Z(2), Z(3));
  EXPECT_TRUE(deg.degenerate);
  EXPECT_TRUE(deg.universal());
  auto c = build_universal_coextension(Z(2), Z(2));
  EXPECT_EQ(c.x.size(), 2u);
  EXPECT_TRUE(c.universal());
  auto d = build_universal_coextension(Z(2), Z(4));
  EXPECT_EQ(d.x.size(), 2u);
  // |E| = |B|^|X| * |A|
  EXPECT_EQ(d.sequence.middle().order(), 16);
  for (std::size_t i = 0; i < d.x.size(); ++i)
    EXPECT_EQ(classify(pushout_sequence(d.sequence, d.power.projections[i])), d.x[i]);
}

TEST(UniversalExtension, ExistsForAllSmallPairs) {
  auto all = groups_up_to_order(4);
  for (const auto& b : all)
    for (const auto& a : all) {
      EXPECT_TRUE(build_universal_extension(b, a).universal()) << b.to_string() << " " << a.to_string();
      EXPECT_TRUE(build_universal_coextension(b, a).universal()) << b.to_string() << " " << a.to_string();
    }
}

TEST(UniversalExtension, InfiniteExtIsRejected) {
  EXPECT_NO_THROW(build_universal_extension(Z(0), Z(2)));
  EXPECT_TRUE(build_universal_extension(Z(2), Z(0)).universal());
  EXPECT_TRUE(build_universal_extension(Z(0), Z(0)).degenerate);
}

TEST(CyclicGeneration, Examples) {
  auto deg = cyclic_generation_check(build_universal_extension(Z(3), Z(2)));
  EXPECT_TRUE(deg.pass);
  auto c = build_universal_extension(Z(2), Z(2));
  auto r = cyclic_generation_check(c, 7);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.ext.order(), 4);
  EXPECT_EQ(r.witnesses.size(), 5u);
  for (const auto& w : r.witnesses) EXPECT_EQ(classify(pullback_sequence(c.sequence, w.gamma)), w.target);
  auto r4 = cyclic_generation_check(build_universal_extension(Z(4), Z(4)), 3);
  EXPECT_TRUE(r4.pass);
}

TEST(SufficientCondition, Examples) {
  auto r = sufficient_condition_check(Z(2), Z(2));
  EXPECT_TRUE(r.sum_of_inclusions_monic);
  EXPECT_TRUE(r.universal_extension_exists);
  EXPECT_TRUE(r.consistent);
  auto z = sufficient_condition_check(Z(3), Z(2));
  EXPECT_TRUE(z.vacuous);
  EXPECT_TRUE(z.consistent);
  for (const auto& a : groups_up_to_order(6))
    for (const auto& v : groups_up_to_order(6)) EXPECT_TRUE(sufficient_condition_check(a, v).consistent);
}

TEST(Closure, CoproductsAndSummands) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    auto b1 = random_group(rng, 4), b2 = random_group(rng, 4), a = random_group(rng, 4);
    bool e1 = build_universal_extension(b1, a).universal();
    bool e2 = build_universal_extension(b2, a).universal();
    auto sum = direct_sum({b1, b2}).total;
    bool es = build_universal_extension(sum, a).universal();
    if (e1 && e2) EXPECT_TRUE(es);
    if (es) EXPECT_TRUE(e1);
  }
}
