// ballgeo - tests for the scalar-field expression module
#include "doctest.h"

#include "ballgeo/common.hpp"
#include "ballgeo/fieldexpr.hpp"

#include <cmath>

using namespace ballgeo;

namespace {
Vec pt2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("constants and direct substitution") {
  CHECK(FieldExpr::parse("1", 2).eval(pt2(0.3, -0.4)) == 1.0);
  CHECK(FieldExpr::parse("1 + 0.1*exp(-(x1^2+x2^2))", 2).eval(pt2(0, 0)) ==
        doctest::Approx(1.1).epsilon(1e-15));
  CHECK(FieldExpr::parse("2^3", 2).eval(pt2(0, 0)) == 8.0);
  CHECK(FieldExpr::parse("sin(0)", 2).eval(pt2(0, 0)) == 0.0);
  CHECK(FieldExpr::parse("exp(1)", 2).eval(pt2(0, 0)) ==
        doctest::Approx(2.718281828459045).epsilon(1e-15));
}

TEST_CASE("precedence and associativity") {
  // a + b*c == a + (b*c)
  CHECK(FieldExpr::parse("2 + 3*4", 2).eval(pt2(0, 0)) == 14.0);
  // ^ binds tightest and right-associates
  CHECK(FieldExpr::parse("2*3^2", 2).eval(pt2(0, 0)) == 18.0);
  CHECK(FieldExpr::parse("2^3^2", 2).eval(pt2(0, 0)) == 512.0);
  // unary minus below ^: -2^2 = -(2^2)
  CHECK(FieldExpr::parse("-2^2", 2).eval(pt2(0, 0)) == -4.0);
  CHECK(FieldExpr::parse("2^-1", 2).eval(pt2(0, 0)) == 0.5);
  // subtraction/division left-associate
  CHECK(FieldExpr::parse("8-3-2", 2).eval(pt2(0, 0)) == 3.0);
  CHECK(FieldExpr::parse("8/4/2", 2).eval(pt2(0, 0)) == 1.0);

  Rng rng(123);
  const FieldExpr grouped = FieldExpr::parse("x1+(x2*x1)", 2);
  const FieldExpr flat = FieldExpr::parse("x1+x2*x1", 2);
  for (int i = 0; i < 50; ++i) {
    const Vec p = pt2(rng.uniform(-2, 2), rng.uniform(-2, 2));
    CHECK(grouped.eval(p) == flat.eval(p));
  }
}

TEST_CASE("rejection cases") {
  CHECK_THROWS_AS(FieldExpr::parse("x1*x3", 2), ValidationError);
  CHECK_THROWS_AS(FieldExpr::parse("x0", 2), ValidationError);
  CHECK_THROWS_AS(FieldExpr::parse("foo(x1)", 2), ValidationError);
  CHECK_THROWS_AS(FieldExpr::parse("1 +", 2), ValidationError);
  CHECK_THROWS_AS(FieldExpr::parse("(x1", 2), ValidationError);
  CHECK_THROWS_AS(FieldExpr::parse("x1 x2", 2), ValidationError);
  CHECK_THROWS_AS(FieldExpr::parse("", 2), ValidationError);
  // error message carries a position
  try {
    FieldExpr::parse("1 + @", 2);
    CHECK(false);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("domain guards raise instead of NaN") {
  CHECK_THROWS_AS(FieldExpr::parse("1/(x1-x1)", 2).eval(pt2(1, 1)), NumericalError);
  CHECK_THROWS_AS(FieldExpr::parse("sqrt(x1)", 2).eval(pt2(-1, 0)), NumericalError);
  CHECK_THROWS_AS(FieldExpr::parse("(-2)^0.5", 2).eval(pt2(0, 0)), NumericalError);
  CHECK_THROWS_AS(FieldExpr::parse("(x1-x1)^-1", 2).eval(pt2(1, 0)), NumericalError);
}

TEST_CASE("print/parse round-trip evaluates identically") {
  const char* sources[] = {
      "1 + 0.1*exp(-(x1^2+x2^2))",
      "x1*x2 - x2/(1+x1^2)",
      "-x1^2 + 2^-x2",
      "sin(x1)*cos(x2) + tanh(x1*x2)",
      "sqrt(1 + x1^2) - (x1-x2)*(x1+x2)",
      "2^3^x1",
      "8-3-x1",
      "8/(4/(1+x2^2))",
      "-(x1+x2)",
      "--x1",
  };
  Rng rng(99);
  for (const char* src : sources) {
    const FieldExpr a = FieldExpr::parse(src, 2);
    const FieldExpr b = FieldExpr::parse(a.print(), 2);
    for (int i = 0; i < 100; ++i) {
      Vec p = rng.unit_vector(2) * std::sqrt(rng.uniform());
      CHECK(a.eval(p) == b.eval(p));  // bitwise identical tapes expected
    }
  }
}

TEST_CASE("dimension handling") {
  Vec p3(3);
  p3 << 0.1, 0.2, 0.3;
  CHECK(FieldExpr::parse("x3^2", 3).eval(p3) == doctest::Approx(0.09));
  CHECK_THROWS_AS(FieldExpr::parse("x1", 2).eval(p3), ValidationError);
}
