#include "oracles.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace plqi;

namespace {

PLQMap counter_g() { return counterexample_pair().g; }

} // namespace

TEST(Validate, IdentityHasUnitSlopes)
{
  auto r = validate(identity_map());
  EXPECT_EQ(r.slopes.inf, 1);
  EXPECT_EQ(r.slopes.sup, 1);
  EXPECT_TRUE(r.exact_tail);
}

TEST(Validate, CounterexampleSlopeRange)
{
  auto r = validate(counter_g());
  EXPECT_EQ(r.slopes.inf, rat(1, 2));
  EXPECT_LE(r.slopes.sup, 1);
  // 1 - (1/4)(1/2)^n only approaches 1.
  for (long n = 0; n < 30; ++n)
    EXPECT_LT(counter_g().slope_right(rpow(Rat(2), n) + 1), 1);
}

TEST(Validate, DecayingSlopeIsUnbounded)
{
  auto m = PLQMap::from_parts({{{Rat(0), Rat(1)}}, Rat(0)}, {Rat(2), Rat(1), {{{Rat(1), Rat(0)}, {Rat(0), Rat(1), rat(1, 2)}}}});
  EXPECT_THROW(validate(m), UnboundedSlope);
}

TEST(Validate, RejectsBadStructure)
{
  auto gap = PLQMap::from_parts({{{Rat(0), Rat(1)}}, Rat(0)}, {Rat(2), Rat(1), {{{rat(3, 2), Rat(0)}, {Rat(1)}}}});
  EXPECT_THROW(validate(gap), DiscontinuityAt);
  auto neg = PLQMap::from_parts({{{Rat(0), Rat(-1)}}, Rat(0)}, {Rat(2), Rat(1), {{{Rat(1), Rat(0)}, {Rat(1)}}}});
  EXPECT_THROW(validate(neg), NonmonotoneSlope);
  auto unordered = PLQMap::from_parts({{{Rat(0), Rat(1)}}, Rat(0)},
                                      {Rat(2), Rat(1), {{{Rat(1), Rat(0)}, {Rat(1)}}, {{rat(5, 2), Rat(0)}, {Rat(1)}}}});
  EXPECT_THROW(validate(unordered), DiscontinuityAt);
}

TEST(Evaluate, CounterexampleValues)
{
  auto g = counter_g();
  EXPECT_EQ(g(3), rat(3, 2));
  EXPECT_EQ(Rat(3 - g(3)), rat(3, 2));
  EXPECT_GT(Rat(3 - g(3)), rat(3, 4) + rat(1, 2));
  EXPECT_EQ(g(4), rat(19, 8));
  EXPECT_EQ(g(2), 1);
}

TEST(Evaluate, CounterexampleMatchesDefinition)
{
  auto g = counter_g();
  for (long i = 0; i <= 400; ++i) {
    Rat x = rat(i, 7);
    EXPECT_EQ(g(x), oracle::counterexample_g(x)) << to_string(x);
  }
}

TEST(Evaluate, Identity) { EXPECT_EQ(identity_map()(rat(7, 3)), rat(7, 3)); }

TEST(Evaluate, NegativeInputRejected) { EXPECT_THROW(identity_map()(Rat(-1)), NegativeInput); }

TEST(Evaluate, AgreesWithWalkOnRandomMaps)
{
  gen::Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    auto m = gen::random_exact_map(rng);
    validate(m);
    Rat hi = m.anchor() * rpow(m.ratio(), 8);
    for (int k = 0; k < 20; ++k) {
      Rat x = gen::random_point(rng, hi);
      ASSERT_EQ(m(x), oracle::walk(m.head(), m.tail(), x)) << to_string(x);
    }
  }
}

TEST(AnchorValue, IntervalRepresentative)
{
  auto g = interval_representative(1, 2, Rat(4));
  EXPECT_EQ(g.anchor_value(2), 31);
  for (long n = 0; n <= 12; ++n)
    EXPECT_EQ(g.anchor_value(n), oracle::rep_anchor(2, 4, n));
}

TEST(AnchorValue, GLambdaTwo)
{
  auto g = g_lambda(2);
  EXPECT_EQ(g.anchor_value(3), 13);
  for (long n = 0; n <= 20; ++n)
    EXPECT_EQ(g.anchor_value(n), oracle::g2_anchor(n));
}

TEST(AnchorValue, ZeroIsHeadValue)
{
  gen::Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = gen::random_exact_map(rng);
    EXPECT_EQ(m.anchor_value(0), oracle::walk(m.head(), m.tail(), m.anchor()));
    EXPECT_EQ(m.anchor_value(5), m(m.anchor() * rpow(m.ratio(), 5)));
  }
  EXPECT_THROW(identity_map().anchor_value(-1), std::invalid_argument);
}

TEST(Breakpoints, IdentityHasNone) { EXPECT_TRUE(identity_map().breakpoints_in(0, 100).empty()); }

TEST(Breakpoints, CounterexampleOnSecondBlock)
{
  auto bps = counter_g().breakpoints_in(2, 4);
  ASSERT_EQ(bps.size(), 1u);
  EXPECT_EQ(bps[0].position, 3);
  EXPECT_EQ(bps[0].left_slope, rat(1, 2));
  EXPECT_EQ(bps[0].right_slope, rat(7, 8));
}

TEST(Breakpoints, IntervalRepresentative)
{
  auto bps = interval_representative(1, 2, Rat(4)).breakpoints_in(4, 16);
  ASSERT_EQ(bps.size(), 1u);
  EXPECT_EQ(bps[0].position, 10);
  EXPECT_EQ(bps[0].left_slope, rat(1, 3));
  EXPECT_EQ(bps[0].right_slope, rat(11, 3));
  auto wide = interval_representative(1, 2, Rat(4)).breakpoints_in(3, 17);
  ASSERT_EQ(wide.size(), 3u);
  EXPECT_EQ(wide[0].position, 4);
  EXPECT_EQ(wide[2].position, 16);
}

TEST(Breakpoints, WindowErrors)
{
  EXPECT_THROW(identity_map().breakpoints_in(2, 2), EmptyWindow);
  EXPECT_THROW(identity_map().breakpoints_in(-1, 2), NegativeInput);
}

TEST(Inverse, SimpleCases)
{
  auto id = inverse(identity_map());
  for (long i = 0; i < 50; ++i)
    EXPECT_EQ(id(rat(i, 3)), rat(i, 3));
  auto f = inverse(linear_map(3));
  EXPECT_EQ(f.linear_factor(), std::optional<Rat>(rat(1, 3)));
  EXPECT_EQ(inverse(counter_g())(rat(3, 2)), 3);
}

TEST(Compose, SimpleCases)
{
  EXPECT_EQ(compose(linear_map(2), linear_map(3)).linear_factor(), std::optional<Rat>(Rat(6)));
  auto g = counter_g();
  auto gi = compose(g, identity_map());
  for (long i = 0; i < 200; ++i)
    EXPECT_EQ(gi(rat(i, 5)), g(rat(i, 5)));
}

TEST(Compose, AlignedCompositeHasBlockRule)
{
  auto f = anchored_two_slope(4, rat(5, 2), rat(2, 3));
  auto g = anchored_two_slope(4, rat(5, 2), rat(3, 2));
  auto gf = compose(g, f);
  EXPECT_TRUE(gf.has_exact_tail());
  validate(gf);
  for (long i = 0; i < 300; ++i) {
    Rat x = rat(i * i, 11);
    EXPECT_EQ(gf(x), g(f(x)));
  }
}

TEST(QICertificate, KnownMaps)
{
  auto id = qi_certificate(identity_map());
  EXPECT_EQ(id.M, 1);
  EXPECT_EQ(id.additive, 0);
  EXPECT_EQ(qi_certificate(counter_g()).M, 2);
  EXPECT_EQ(qi_certificate(interval_representative(1, 2, Rat(4))).M, rat(11, 3));
}

TEST(QICertificate, InequalityOnRandomPairs)
{
  gen::Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    auto m = gen::random_exact_map(rng);
    auto w = qi_certificate(m);
    Rat hi = m.anchor() * rpow(m.ratio(), 6);
    for (int k = 0; k < 10; ++k) {
      Rat x = gen::random_point(rng, hi), y = gen::random_point(rng, hi);
      Rat d = rabs(Rat(x - y)), e = rabs(Rat(m(x) - m(y)));
      EXPECT_LE(d / w.M - w.additive, e);
      EXPECT_LE(e, w.M * d + w.additive);
    }
  }
}
