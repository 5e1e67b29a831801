#include "oracles.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace plqi;

namespace {

PLQMap counter_g() { return counterexample_pair().g; }

PLQMap noncommute_f() { return anchored_two_slope(4, rat(5, 2), rat(2, 3)); }
PLQMap noncommute_g() { return anchored_two_slope(4, rat(5, 2), rat(3, 2)); }

AnchorSequence anchors(const Rat &t, const Rat &P) { return {t, P, Rat(1), Rat(1)}; }

} // namespace

TEST(RatioGap, Examples)
{
  auto g = g_lambda(2);
  EXPECT_EQ(ratio_gap_sup(g, g).value, 0);
  EXPECT_EQ(ratio_gap_sup(identity_map(), counter_g()).value, 0);
  auto r = ratio_gap_sup(identity_map(), linear_map(2));
  EXPECT_EQ(r.value, 1);
  EXPECT_EQ(r.mode, LimitMode::Exact);
}

TEST(RatioGap, WitnessRealizesLimsup)
{
  gen::Rng rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    Rat rho = gen::pick(rng, gen::ratios());
    auto f = gen::random_exact_map(rng, rho);
    auto g = gen::random_exact_map(rng, rho);
    auto r = ratio_gap_sup(f, g);
    double far = std::abs(oracle::far_ratio(f, r.witness, r.period, 60) - oracle::far_ratio(g, r.witness, r.period, 60));
    EXPECT_NEAR(r.value.get_d(), far, 1e-8);
    // No grid point in a far block beats the reported limsup.
    Rat a = f.anchor() * rpow(rho, 50);
    EXPECT_LE(oracle::grid_gap(f, g, a, a * rho, 200), r.value.get_d() + 1e-8);
  }
}

TEST(SlopeTuples, EqualMapsHaveZeroGap)
{
  auto f = interval_representative(1, 2, Rat(4));
  auto fn = normalize_to_unit(f).map;
  auto st = slope_tuple_seq(fn, fn, anchors(rat(5, 2), 4));
  EXPECT_EQ(st.d_limit(), 0);
  for (long n = st.n0; n < st.n0 + 5; ++n)
    EXPECT_EQ(st.at(n).d, 0);
}

TEST(SlopeTuples, TwoSlopeMaps)
{
  auto st = slope_tuple_seq(noncommute_f(), noncommute_g(), anchors(1, 4));
  ASSERT_EQ(st.pieces(), 2u);
  Rat mu = (4 - 1 - rat(2, 3) * rat(3, 2)) / (4 - rat(5, 2));
  Rat mu_p = (4 - 1 - rat(3, 2) * rat(3, 2)) / (4 - rat(5, 2));
  auto blk = st.at(3);
  EXPECT_EQ(blk.a, (std::vector<Rat>{rat(2, 3), mu}));
  EXPECT_EQ(blk.b, (std::vector<Rat>{rat(3, 2), mu_p}));
  EXPECT_EQ(st.d_limit(), rmax(Rat(rat(3, 2) - rat(2, 3)), rabs(Rat(mu - mu_p))));
}

TEST(SlopeTuples, CounterexampleGapIsConstant)
{
  auto st = slope_tuple_seq(identity_map(), counter_g(), anchors(1, 2));
  EXPECT_EQ(st.d_limit(), rat(1, 2));
  for (long n = std::max(st.n0, 1L); n <= 30; ++n) {
    auto blk = st.at(n);
    ASSERT_EQ(blk.b.size(), 2u);
    EXPECT_EQ(blk.b[0], rat(1, 2));
    EXPECT_EQ(blk.b[1], 1 - rat(1, 4) * rpow(rat(1, 2), n));
    EXPECT_EQ(blk.d, rat(1, 2));
  }
}

TEST(SlopeTuples, AnchorsMustBeCommon)
{
  EXPECT_THROW(slope_tuple_seq(identity_map(), linear_map(2), anchors(1, 2)), AnchorsNotCommon);
}

TEST(Spacing, Examples)
{
  auto rep = interval_representative(1, 2, Rat(4));
  auto fn = normalize_to_unit(rep).map;
  auto st = slope_tuple_seq(fn, fn, anchors(rat(5, 2), 4));
  // The partition seen from 5/2 is the same three points shifted by one.
  EXPECT_EQ(spacing_check(st).K1, std::optional<Rat>(rat(8, 5)));
  auto ex = spacing_check(slope_tuple_seq(identity_map(), counter_g(), anchors(1, 2)));
  EXPECT_FALSE(ex.K1);
  ASSERT_TRUE(ex.offending);
  EXPECT_EQ(ex.offending->first.geo, ex.offending->second.geo);
  auto single = spacing_check(slope_tuple_seq(linear_map(1), identity_map(), anchors(1, 3)));
  EXPECT_EQ(single.K1, std::optional<Rat>(Rat(3)));
}

TEST(Decide, CounterexampleIsEqualThroughTheGap)
{
  auto v = decide_equiv_mod_H(identity_map(), counter_g());
  EXPECT_EQ(v.kind, EquivKind::Equal);
  EXPECT_EQ(v.method, EquivMethod::RatioGap);
  ASSERT_TRUE(v.tuples);
  EXPECT_EQ(v.tuples->d_limit(), rat(1, 2));
  ASSERT_TRUE(v.spacing);
  EXPECT_FALSE(v.spacing->K1);
  EXPECT_EQ(v.gap.value, 0);
}

TEST(Decide, ThresholdsHold)
{
  auto g = counter_g();
  auto v = decide_equiv_mod_H(identity_map(), g);
  ASSERT_EQ(v.thresholds.size(), 3u);
  for (auto &th : v.thresholds) {
    Rat X = th.X;
    for (long i = 1; i <= 300; ++i) {
      Rat x = X + X * rat(i, 20);
      EXPECT_LT(rabs(Rat(g(x) / x - 1)), th.eps);
    }
    for (auto &b : g.break_candidates(X, 8 * X))
      EXPECT_LT(rabs(Rat(g(b) / b - 1)), th.eps);
  }
}

TEST(Decide, CommutatorOfTwoSlopeMaps)
{
  auto v = decide_equiv_mod_H(compose(noncommute_g(), noncommute_f()), compose(noncommute_f(), noncommute_g()));
  EXPECT_EQ(v.kind, EquivKind::NotEqual);
  EXPECT_GT(v.delta, 0);
}

TEST(Decide, ReflexiveOnKnownMaps)
{
  for (auto m : {identity_map(), counter_g(), g_lambda(2), interval_representative(1, 2, Rat(4))})
    EXPECT_EQ(decide_equiv_mod_H(m, m).kind, EquivKind::Equal);
}

TEST(Decide, SeparatedTuplesUseSpacing)
{
  gen::Rng rng(47);
  auto p = gen::random_separated_pair(rng);
  auto v = decide_equiv_mod_H(p.f, p.g);
  EXPECT_EQ(v.kind, EquivKind::NotEqual);
  EXPECT_EQ(v.method, EquivMethod::TupleSpacing);
  ASSERT_TRUE(v.spacing && v.spacing->K1);
  EXPECT_EQ(*v.spacing->K1, p.K1);
  EXPECT_EQ(v.tuples->d_limit() * v.scale, p.gap);
}

TEST(EquivalenceProperties, SoundAgainstRatioGap)
{
  gen::Rng rng(53);
  int equal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rat rho = gen::pick(rng, gen::ratios());
    auto f = gen::random_exact_map(rng, rho);
    PLQMap g = f;
    switch (trial % 4) {
    case 0:
      g = gen::random_exact_map(rng, rho);
      break;
    case 1:
      g = compose(gen::random_h_general(rng, rho), f);
      break;
    case 2:
      g = compose(f, gen::random_h(rng, rho));
      break;
    default:
      g = compose(linear_map(gen::pick(rng, {rat(1, 2), Rat(2)})), f);
    }
    auto v = decide_equiv_mod_H(f, g);
    ASSERT_NE(v.kind, EquivKind::Inconclusive);
    EXPECT_FALSE(v.certified);
    auto gap = ratio_gap_sup(f, g);
    EXPECT_EQ(v.kind == EquivKind::Equal, gap.value == 0) << trial;
    equal += v.kind == EquivKind::Equal;
  }
  EXPECT_GE(equal, 40);
}

TEST(EquivalenceProperties, HPerturbationIsEqual)
{
  gen::Rng rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    Rat rho = gen::pick(rng, gen::ratios());
    auto f = gen::random_anchored_map(rng, rho, gen::uniform(rng, 1, 3));
    auto h = gen::random_h(rng, rho);
    EXPECT_EQ(limit_set(h).lo, 1);
    EXPECT_EQ(limit_set(h).hi, 1);
    auto hf = compose(h, f);
    EXPECT_TRUE(hf.has_exact_tail());
    auto v = decide_equiv_mod_H(hf, f);
    EXPECT_EQ(v.kind, EquivKind::Equal);
    EXPECT_EQ(v.method, EquivMethod::TupleConvergence);
  }
}

TEST(EquivalenceProperties, SeparatedPairsBoundDelta)
{
  gen::Rng rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    auto p = gen::random_separated_pair(rng);
    ASSERT_GE(p.K1, rat(6, 5));
    ASSERT_GE(p.gap, rat(1, 4));
    auto v = decide_equiv_mod_H(p.f, p.g);
    ASSERT_EQ(v.kind, EquivKind::NotEqual);
    Rat Mc = qi_certificate(p.f).M + qi_certificate(p.g).M;
    Rat bound = p.gap * (1 - 1 / p.K1) / Mc;
    EXPECT_GE(v.delta, bound);
    ASSERT_TRUE(v.delta_bound);
    EXPECT_EQ(*v.delta_bound, bound);
  }
}

TEST(EquivalenceProperties, RelationAxioms)
{
  gen::Rng rng(67);
  auto A = gen::random_anchored_map(rng, 2, 3);
  auto B = g_lambda(2);
  std::vector<PLQMap> pool{A,
                           compose(gen::random_h(rng, 2), A),
                           compose(A, gen::random_h(rng, 2)),
                           B,
                           compose(gen::random_h_general(rng, 2), B),
                           identity_map(),
                           counter_g(),
                           gen::random_h_general(rng, 2),
                           linear_map(2),
                           compose(linear_map(2), gen::random_h(rng, 2))};
  const std::size_t n = pool.size();
  std::vector<std::vector<bool>> eq(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto v = decide_equiv_mod_H(pool[i], pool[j]);
      ASSERT_NE(v.kind, EquivKind::Inconclusive);
      eq[i][j] = v.kind == EquivKind::Equal;
    }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_TRUE(eq[i][i]);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_EQ(eq[i][j], eq[j][i]) << i << " " << j;
      for (std::size_t k = 0; k < n; ++k)
        if (eq[i][j] && eq[j][k])
          EXPECT_TRUE(eq[i][k]) << i << " " << j << " " << k;
    }
  }
  // Four classes: A, g_lambda(2), H and f_2.
  EXPECT_TRUE(eq[0][1] && eq[0][2] && eq[3][4] && eq[5][6] && eq[5][7] && eq[8][9]);
  EXPECT_FALSE(eq[0][3] || eq[0][5] || eq[3][5] || eq[5][8]);
}
