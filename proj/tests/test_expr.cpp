#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fdwave/expr.hpp"

using fdwave::Expression;
using fdwave::ParseError;

TEST(Expression, ArithmeticAndPrecedence) {
  EXPECT_DOUBLE_EQ(Expression::parse("1 + 2*3")(0, 0, 0), 7.0);
  EXPECT_DOUBLE_EQ(Expression::parse("(1 + 2)*3")(0, 0, 0), 9.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2^3^2")(0, 0, 0), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("-2^2")(0, 0, 0), -4.0);
  EXPECT_DOUBLE_EQ(Expression::parse("8/4/2")(0, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(Expression::parse("1.5e1 - +3")(0, 0, 0), 12.0);
}

TEST(Expression, VariablesAndFunctions) {
  const auto e = Expression::parse("sin(x)*cos(y) + exp(t) - sqrt(4)");
  EXPECT_DOUBLE_EQ(e(0.3, 0.4, 0.5), std::sin(0.3) * std::cos(0.4) + std::exp(0.5) - 2.0);
  EXPECT_FALSE(e.is_constant());
  EXPECT_DOUBLE_EQ(Expression::parse("pi")(0, 0, 0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(Expression::parse("e")(0, 0, 0), std::numbers::e);
}

TEST(Expression, ParametersAndGammaConstants) {
  const auto e = Expression::parse("t^alpha/gamma(1+alpha)", {{"alpha", 0.5}});
  EXPECT_NEAR(e(0, 0, 4.0), 2.0 / (std::sqrt(std::numbers::pi) / 2.0), 1e-14);
  EXPECT_TRUE(Expression::parse("gamma(4.5)/2").is_constant());
  EXPECT_THROW(Expression::parse("gamma(t)"), ParseError);
}

TEST(Expression, SyntaxErrors) {
  EXPECT_THROW(Expression::parse(""), ParseError);
  EXPECT_THROW(Expression::parse("1 +"), ParseError);
  EXPECT_THROW(Expression::parse("(1"), ParseError);
  EXPECT_THROW(Expression::parse("z + 1"), ParseError);
  EXPECT_THROW(Expression::parse("log(x)"), ParseError);
  EXPECT_THROW(Expression::parse("1 2"), ParseError);
  EXPECT_THROW(Expression::parse("x # y"), ParseError);
}
