#include <gtest/gtest.h>

#include "descentlab/scalars/scalar_traits.hpp"
#include "support/random.hpp"

using namespace descentlab;
using testing_support::Rng;

TEST(Rational, Arithmetic)
{
    EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
    EXPECT_EQ(Rational(1) / Rational(1), Rational(1));
    EXPECT_TRUE((Rational(7, 6) - Rational(7, 6)).is_zero());
    EXPECT_EQ(Rational(4, -6).to_string(), "-2/3");
    EXPECT_THROW(Rational(1) / Rational(0), DivisionByZero);
    EXPECT_THROW(Rational(1, 0), DivisionByZero);
}

TEST(Rational, ParseRoundTrip)
{
    EXPECT_EQ(Rational::parse("3/9"), Rational(1, 3));
    EXPECT_EQ(Rational::parse(" -7 "), Rational(-7));
    EXPECT_THROW(Rational::parse("1/0"), DivisionByZero);
    EXPECT_THROW(Rational::parse("x"), ParseError);
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        Rational r = rng.rational(100);
        EXPECT_EQ(Rational::parse(r.to_string()), r);
    }
}

TEST(Rational, FieldAxioms)
{
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        Rational a = rng.rational(), b = rng.rational(), c = rng.rational();
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        if (!a.is_zero()) {
            EXPECT_EQ(a * a.inverse(), Rational(1));
        }
    }
}

namespace {
NovikovRing ring(int den, Rational e) { return NovikovRing(den, e); }
NovikovElem parse(const NovikovRing& r, const char* s) { return NovikovElem::parse(r, s); }
} // namespace

TEST(Novikov, Arithmetic)
{
    auto R = ring(2, Rational(2));
    EXPECT_EQ(parse(R, "1 + T^(1/2)") * parse(R, "1 - T^(1/2)"), parse(R, "1 - T"));
    EXPECT_TRUE((parse(R, "T^(3/2)") * parse(R, "T^(3/2)")).is_zero());
    EXPECT_EQ(parse(R, "T^(1/2) + T") + parse(R, "-T^(1/2)"), parse(R, "T"));
    EXPECT_THROW(parse(R, "1") + parse(ring(1, Rational(2)), "1"), RingMismatch);
    EXPECT_THROW(parse(R, "T^(1/3)"), InputError);
}

TEST(Novikov, TextFormat)
{
    auto R = ring(2, Rational(3));
    auto x = parse(R, "3*T^(1/2) - 2*T^(5/2) + 1");
    EXPECT_EQ(x.to_string(), "1 + 3*T^(1/2) - 2*T^(5/2)");
    EXPECT_EQ(NovikovElem::parse(R, x.to_string()), x);
    EXPECT_EQ(parse(R, "T").to_string(), "1*T^(1)");
}

TEST(Novikov, Valuation)
{
    auto R = ring(2, Rational(2));
    EXPECT_EQ(*parse(R, "3*T^(1/2) + T").valuation(), Rational(1, 2));
    EXPECT_FALSE(NovikovElem(R).valuation().has_value());
    EXPECT_EQ(*parse(R, "5").valuation(), Rational(0));
}

TEST(Novikov, Unitize)
{
    auto R = ring(1, Rational(4));
    auto x = parse(R, "1 + T");
    auto inv = x.unitize();
    // geometric series oracle
    EXPECT_EQ(inv, parse(R, "1 - T + T^(2) - T^(3)"));
    EXPECT_EQ(inv * x, parse(R, "1"));
    EXPECT_EQ(parse(R, "2").unitize(), parse(R, "1/2"));
    EXPECT_THROW(parse(ring(2, Rational(2)), "T^(1/2)").unitize(), NotInvertible);
}

TEST(Novikov, RingAxiomsAndValuation)
{
    Rng rng(5);
    for (int den : {1, 2, 3}) {
        auto R = ring(den, Rational(5, 2));
        for (int i = 0; i < 100; ++i) {
            auto a = rng.novikov(R), b = rng.novikov(R), c = rng.novikov(R);
            EXPECT_EQ((a + b) + c, a + (b + c));
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_EQ(a * b, b * a);
            if (a.valuation() && b.valuation() && *a.valuation() + *b.valuation() < R.cutoff) {
                EXPECT_EQ(*(a * b).valuation(), *a.valuation() + *b.valuation());
            }
            if (a.valuation() && a.valuation()->is_zero()) {
                EXPECT_EQ(a.unitize() * a, NovikovElem(R, Rational(1)));
            }
        }
    }
}
