#include <random>

#include "crsing/errors.hpp"
#include "crsing/series.hpp"
#include "crsing/series_parse.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace crs;
using crs::testing::lit;
using crs::testing::random_series;

namespace {

SpacePtr xyz() { return VarSpace::make({"x", "y", "z"}); }

// Naive product over all term pairs, truncated by hand.
Series naive_product(const Series& a, const Series& b) {
  const int trunc = std::min(a.trunc(), b.trunc());
  Series out(a.space(), trunc);
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      out.add_term(e, ca * cb);
    }
  return out;
}

}  // namespace

TEST_SUITE("series") {

TEST_CASE("gaussian rational arithmetic") {
  const GaussRational a(mpq_class(1, 2), mpq_class(1, 3));
  const GaussRational b(3, 4);
  CHECK(a * a.inverse() == GaussRational(1));
  CHECK((a + b) - b == a);
  CHECK(a.conj().conj() == a);
  CHECK(GaussRational::i() * GaussRational::i() == GaussRational(-1));
  CHECK(a.to_string(true) == "(1/2+1/3*i)");
  CHECK_THROWS_AS(GaussRational(0).inverse(), ArithmeticError);
}

TEST_CASE("ring axioms on random series") {
  std::mt19937 rng(11);
  const SpacePtr sp = xyz();
  for (int trial = 0; trial < 40; ++trial) {
    const Series a = random_series(rng, sp, 6, 6);
    const Series b = random_series(rng, sp, 5, 6);
    const Series c = random_series(rng, sp, 7, 6);
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
    CHECK(a * b == naive_product(a, b));
    CHECK((a * b).trunc() == 5);
  }
}

TEST_CASE("leibniz rule") {
  std::mt19937 rng(12);
  const SpacePtr sp = xyz();
  for (int trial = 0; trial < 30; ++trial) {
    const Series a = random_series(rng, sp, 6, 6);
    const Series b = random_series(rng, sp, 6, 6);
    for (std::size_t v = 0; v < 3; ++v)
      CHECK(partial_derivative(a * b, v) == partial_derivative(a, v) * b + a * partial_derivative(b, v));
    CHECK(partial_derivative(a, 0).trunc() == 5);
  }
}

TEST_CASE("reciprocal round trips") {
  std::mt19937 rng(13);
  const SpacePtr sp = xyz();
  std::uniform_int_distribution<int> small(1, 4);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Series a = random_series(rng, sp, 6, 5, false);
    a += Series::constant(sp, 6, GaussRational(mpq_class(small(rng)), mpq_class(small(rng) - 2)));
    const Series one = a * reciprocal(a);
    CHECK(one == Series::constant(sp, 6, GaussRational(1)));
    ++checked;
  }
  CHECK(checked == 200);
  CHECK_THROWS_AS(reciprocal(lit(sp, "x + y", 4)), ArithmeticError);
}

TEST_CASE("exact series invert to the requested order") {
  const SpacePtr sp = VarSpace::univariate("u");
  const Series r = reciprocal(lit(sp, "1 - u"), 5);
  CHECK(r == lit(sp, "1 + u + u^2 + u^3 + u^4 + u^5", 5));
  CHECK(r.trunc() == 5);
}

TEST_CASE("conjugation and real parts") {
  const SpacePtr sp = VarSpace::cr(1);
  const Series a = lit(sp, "i*z1^2*c1 + (1+2*i)*s", 5);
  CHECK(conjugate(a) == lit(sp, "-i*z1*c1^2 + (1-2*i)*s", 5));
  CHECK(conjugate(conjugate(a)) == a);
  CHECK(real_part(a) + GaussRational::i() * imag_part(a) == a);
  CHECK(is_real(real_part(a)));
  CHECK(is_real(imag_part(a)));
}

TEST_CASE("division by powers") {
  const SpacePtr sp = VarSpace::cr(1);
  const Series a = lit(sp, "s^2*z1*c1 + s^3", 7);
  const Series q = divide_by_s_power(a, 2);
  CHECK(q == lit(sp, "z1*c1 + s", 5));
  CHECK(q.trunc() == 5);
  try {
    (void)divide_by_s_power(a, 3);
    FAIL("expected a divisibility failure");
  } catch (const ArithmeticError& e) {
    CHECK(std::string(e.what()).find("z1*c1*s^2") != std::string::npos);
  }
}

TEST_CASE("substitution truncation rule") {
  const SpacePtr uv = VarSpace::make({"u", "v"});
  const SpacePtr xy = VarSpace::make({"x", "y"});
  const Series a = lit(uv, "u + u*v + v^3", 4);
  const std::vector<Series> images{lit(xy, "x^2", 9), lit(xy, "x*y + y^2", 9)};
  const Series out = substitute(a, images);
  // v = 2, (trunc + 1) * v - 1 = 9
  CHECK(out.trunc() == 9);
  CHECK(out == lit(xy, "x^2 + x^3*y + x^2*y^2 + x^3*y^3 + 3*x^2*y^4 + 3*x*y^5 + y^6", 9));
  const std::vector<Series> bad{lit(xy, "1 + x", 9), lit(xy, "y", 9)};
  CHECK_THROWS(substitute(a, bad));
}

TEST_CASE("composition matches repeated multiplication") {
  const SpacePtr u = VarSpace::univariate("u");
  const SpacePtr xy = VarSpace::make({"x", "y"});
  const Series outer = lit(u, "u + 2*u^2 - u^3", 6);
  const Series inner = lit(xy, "x + y^2", 8);
  const Series expect = (inner + GaussRational(2) * inner * inner - inner * inner * inner).truncated(6);
  CHECK(compose(outer, inner) == expect);
}

TEST_CASE("arctan series integrates the geometric series") {
  const SpacePtr u = VarSpace::univariate("u");
  const Series at = arctan_series(u, 9);
  CHECK(at == lit(u, "u - 1/3*u^3 + 1/5*u^5 - 1/7*u^7 + 1/9*u^9", 9));
  const Series d = partial_derivative(at, 0);
  CHECK(d * lit(u, "1 + u^2", 8) == Series::constant(u, 8, GaussRational(1)));
}

TEST_CASE("implicit solve satisfies its equation") {
  const SpacePtr sp = VarSpace::make({"a", "b", "t"});
  const SpacePtr params = VarSpace::make({"a", "b"});
  const Series g = lit(sp, "a*b + a*t^2 + b*t^3 + t^2", 9);
  const Series t = implicit_solve(g, params);
  const std::vector<Series> images{Series::variable(params, 9, 0), Series::variable(params, 9, 1), t};
  CHECK(substitute(g, images) == t);
  CHECK(t.constant_term().is_zero());
  CHECK_THROWS(implicit_solve(lit(sp, "a + t", 5), params));
}

TEST_CASE("specialize keeps truncation") {
  const SpacePtr sp = VarSpace::make({"s", "x"});
  const SpacePtr s_only = VarSpace::univariate("s");
  const Series a = lit(sp, "s*x + s^2*x^2 + s^3", 6);
  const Series b = specialize(a, {{1, GaussRational(3)}}, s_only);
  CHECK(b == lit(s_only, "3*s + 9*s^2 + s^3", 6));
}

TEST_CASE("valuation and coefficients") {
  const SpacePtr sp = VarSpace::cr(1);
  const Series a = lit(sp, "z1*c1*s^2 + 3*s^4", 8);
  CHECK(a.valuation() == 4);
  CHECK(a.min_exponent(sp->s()) == 2);
  CHECK(coefficient_of_power(a, sp->s(), 2) == lit(sp, "z1*c1", 6));
  CHECK(a.coefficient({0, 0, 4}) == GaussRational(3));
}

}

TEST_SUITE("parse") {

TEST_CASE("literal forms") {
  const SpacePtr sp = VarSpace::cr(2);
  const Series a = parse_series("3/2*z1^2*c1*s - (1/2+1/3*i)*z2", sp, 6);
  Exponent e1{2, 0, 1, 0, 1};
  Exponent e2{0, 1, 0, 0, 0};
  CHECK(a.coefficient(e1) == GaussRational(3, 2));
  CHECK(a.coefficient(e2) == -GaussRational(mpq_class(1, 2), mpq_class(1, 3)));
  CHECK(parse_series(" s * z1 * c1 ", sp, 4) == parse_series("s*z1*c1", sp, 4));
  CHECK(parse_series("(z1 + c1)^2", sp, 4) == parse_series("z1^2 + 2*z1*c1 + c1^2", sp, 4));
  CHECK(parse_constant("-3/4*i") == GaussRational(mpq_class(0), mpq_class(-3, 4)));
}

TEST_CASE("printed literals reparse to equal series") {
  std::mt19937 rng(21);
  for (int n = 1; n <= 2; ++n) {
    const SpacePtr sp = VarSpace::cr(n);
    for (int trial = 0; trial < 50; ++trial) {
      const Series a = random_series(rng, sp, 6, 8);
      CHECK(parse_series(a.to_string(), sp, 6) == a);
    }
  }
}

TEST_CASE("errors carry positions") {
  const SpacePtr sp = VarSpace::cr(1);
  try {
    (void)parse_series("z1 + z2", sp, 4, 3, 10);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 15);
  }
  CHECK_THROWS_AS(parse_series("z1 +", sp, 4), ParseError);
  CHECK_THROWS_AS(parse_series("z1 / c1", sp, 4), ParseError);
  CHECK_THROWS_AS(parse_series("1.5*z1", sp, 4), ParseError);
  CHECK_THROWS_AS(parse_series("(z1", sp, 4), ParseError);
}

}
