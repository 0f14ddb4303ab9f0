#include <gtest/gtest.h>

#include <limits>

#include "zakharov/errors.hpp"
#include "zakharov/rational.hpp"

using zakharov::InvalidArgument;
using zakharov::Rational;

TEST(Rational, NormalizesSignAndTerms) {
  const Rational a(6, -8);
  EXPECT_EQ(a.num(), -3);
  EXPECT_EQ(a.den(), 4);
  EXPECT_EQ(Rational(0, 5), Rational(0));
  EXPECT_EQ(Rational(0, 5).den(), 1);
  EXPECT_THROW(Rational(1, 0), InvalidArgument);
}

TEST(Rational, Parse) {
  EXPECT_EQ(Rational::parse("3"), Rational(3));
  EXPECT_EQ(Rational::parse("-5/4"), Rational(-5, 4));
  EXPECT_EQ(Rational::parse("0.375"), Rational(3, 8));
  EXPECT_EQ(Rational::parse("-1.25"), Rational(-5, 4));
  EXPECT_EQ(Rational::parse("7/14"), Rational(1, 2));
  for (const char* bad : {"", "1/", "/2", "a", "1/0", "1.2.3", " 1"})
    EXPECT_THROW(Rational::parse(bad), InvalidArgument) << bad;
}

TEST(Rational, StrRoundTrip) {
  for (const auto& r : {Rational(5, 4), Rational(-3, 8), Rational(7), Rational(0)})
    EXPECT_EQ(Rational::parse(r.str()), r);
  EXPECT_EQ(Rational(5, 4).str(), "5/4");
  EXPECT_EQ(Rational(2).str(), "2");
}

TEST(Rational, Arithmetic) {
  const Rational a(1, 2), b(1, 3);
  EXPECT_EQ(a + b, Rational(5, 6));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 6));
  EXPECT_EQ(a / b, Rational(3, 2));
  EXPECT_EQ(-a, Rational(-1, 2));
  EXPECT_THROW(a / Rational(0), InvalidArgument);
  // 3/8 = (3/2)(1/2 - 1/4)
  EXPECT_EQ(Rational(3, 2) * (Rational(1, 2) - Rational(1, 4)), Rational(3, 8));
}

TEST(Rational, OrderingIsExact) {
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_GT(Rational(-1, 3), Rational(-1, 2));
  const std::int64_t big = std::numeric_limits<std::int64_t>::max() / 2;
  // cross products overflow 64 bits but not 128
  EXPECT_LT(Rational(big - 1, big), Rational(big, big + 1));
  EXPECT_EQ(max(Rational(5, 4), Rational(3, 2)), Rational(3, 2));
  EXPECT_EQ(min(Rational(5, 4), Rational(3, 2)), Rational(5, 4));
}

TEST(Rational, FromDoubleIsExact) {
  EXPECT_EQ(Rational::from_double(0.375), Rational(3, 8));
  EXPECT_EQ(Rational::from_double(-2.5), Rational(-5, 2));
  EXPECT_EQ(Rational::from_double(0.1).to_double(), 0.1);
  EXPECT_DOUBLE_EQ(Rational(5, 4).to_double(), 1.25);
}
