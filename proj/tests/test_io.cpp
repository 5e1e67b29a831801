#include "support/generators.hpp"

#include <plqi/io.hpp>

#include <gtest/gtest.h>

using namespace plqi;

namespace {

void expect_same(const PLQMap &a, const PLQMap &b)
{
  for (long n = 0; n <= 10; ++n)
    EXPECT_EQ(a.anchor_value(n), b.anchor_value(n));
  Rat hi = a.anchor() * rpow(a.ratio(), 4);
  for (long i = 0; i <= 64; ++i)
    EXPECT_EQ(a(hi * rat(i, 64)), b(hi * rat(i, 64)));
}

} // namespace

TEST(MapDocument, RoundTripFactories)
{
  for (auto m : {identity_map(), counterexample_pair().g, g_lambda(3), interval_representative(1, 2, Rat(4)),
                 anchored_two_slope(4, rat(5, 2), rat(2, 3)), embed_profile(ProfileFn::affine(2), 3)}) {
    auto back = parse_map(emit_map(m));
    expect_same(m, back);
    EXPECT_EQ(back.name(), m.name());
  }
}

TEST(MapDocument, RoundTripRandom)
{
  gen::Rng rng(83);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = gen::random_exact_map(rng);
    expect_same(m, parse_map(emit_map(m)));
  }
}

TEST(MapDocument, ConstantSlopesOmitDecay)
{
  auto j = to_json(g_lambda(2));
  EXPECT_FALSE(j["tail"]["pieces"][0]["slope"].contains("q"));
  auto k = to_json(counterexample_pair().g);
  EXPECT_EQ(k["tail"]["pieces"][1]["slope"]["c1"], "-1/4");
}

TEST(MapDocument, IntegerFieldsAccepted)
{
  auto m = parse_map(R"({"head": [{"break": 0, "slope": 1}],
                         "tail": {"ratio": 2, "anchor": 1, "pieces": [{"pos": {"geo": 1, "const": 0}, "slope": {"c0": 1}}]}})");
  EXPECT_EQ(m(rat(7, 3)), rat(7, 3));
}

TEST(MapDocument, Errors)
{
  EXPECT_THROW(parse_map("{"), ParseError);
  EXPECT_THROW(parse_map("[]"), ParseError);
  EXPECT_THROW(parse_map(R"({"head": []})"), ParseError);
  EXPECT_THROW(parse_map(R"({"head": [{"break": "0", "slope": "x"}], "tail": {}})"), ParseError);
  EXPECT_THROW(parse_map(R"({"head": [{"break": "0", "slope": "1"}],
                            "tail": {"ratio": "2", "anchor": "1", "pieces": [{"pos": {"geo": "1"}, "slope": {"c0": "1"}}]}})"),
               ParseError);
  EXPECT_THROW(emit_map(compose(g_lambda(2), g_lambda(3))), NoClosedForm);
  EXPECT_THROW(load_map("/nonexistent/file.map"), ParseError);
}

TEST(Rational, ParseAndFormat)
{
  EXPECT_EQ(parse_rat("-6/4"), rat(-3, 2));
  EXPECT_EQ(to_string(rat(6, 4)), "3/2");
  EXPECT_EQ(to_string(Rat(5)), "5");
  EXPECT_THROW(parse_rat("1/0"), ParseError);
  EXPECT_THROW(parse_rat("1.5"), ParseError);
  EXPECT_EQ(to_decimal(rat(1, 3), 4), "0.3333");
  EXPECT_EQ(to_decimal(rat(-2, 3), 3), "-0.667");
  EXPECT_EQ(to_decimal(rat(1, 7), 30), "0.142857142857142857142857142857");
  EXPECT_EQ(to_decimal(Rat(12), 0), "12");
  EXPECT_EQ(floor_log(Rat(8), Rat(2)), 3);
  EXPECT_EQ(floor_log(rat(15, 2), Rat(2)), 2);
  EXPECT_EQ(rpow(rat(1, 2), 3), rat(1, 8));
}

TEST(Profile, ComposeAndInverse)
{
  auto F = *g_lambda(2).profile();
  auto I = F.inverse();
  for (long i = 1; i <= 40; ++i) {
    Rat x = 1 + rat(i, 20);
    EXPECT_EQ(I(F(x)), x);
    EXPECT_EQ(F(2 * x), 2 * F(x));
  }
  auto C = compose(F, I);
  ASSERT_TRUE(C);
  EXPECT_TRUE(C->is_linear());
  EXPECT_FALSE(common_period(2, 3));
  EXPECT_EQ(common_period(4, 8), std::optional<Rat>(Rat(64)));
}
