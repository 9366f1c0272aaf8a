#include <doctest.h>

#include <random>

#include "valkey/bipoly.hpp"
#include "valkey/error.hpp"
#include "valkey/series.hpp"

using namespace valkey;

namespace {

BiPoly P(const std::string& s) { return parse_bipoly(s); }

SeriesOracle small_oracle(long cap = 256) {
  return SeriesOracle::t_sqrt_1_plus_t(cap);
}

}  // namespace

TEST_CASE("parse and print") {
  CHECK(P("y^3 - x^5").str() == "y^3 - x^5");
  CHECK(P("3/2*x^2*y").str() == "3/2*x^2*y");
  CHECK(P("-x").str() == "-x");
  CHECK(P("x*x*2").str() == "2*x^2");
  CHECK(P("1 + x + x").str() == "2*x + 1");
  CHECK(P("x - x").is_zero());
  CHECK(P(P("y^2 - x^2 - x^3").str()) == P("y^2 - x^2 - x^3"));
  CHECK_THROWS_AS((void)P(""), error);
  CHECK_THROWS_AS((void)P("x +"), error);
  CHECK_THROWS_AS((void)P("z"), error);
  CHECK_THROWS_AS((void)P("x^1/2"), error);
  CHECK_THROWS_AS((void)P("x y"), error);
}

TEST_CASE("arithmetic") {
  BiPoly s = P("x + y");
  CHECK(s * s == P("x^2 + 2*x*y + y^2"));
  CHECK(s.pow(3) == P("x^3 + 3*x^2*y + 3*x*y^2 + y^3"));
  CHECK(s - s == BiPoly::zero());
  CHECK(P("y^2 - x^2 - x^3").scaled(Rational(-2)) ==
        P("2*x^3 + 2*x^2 - 2*y^2"));
  CHECK(P("y^3").d_dy() == P("3*y^2"));
  CHECK(P("x^2 + x*y^2").d_dy() == P("2*x*y"));
}

TEST_CASE("F_p coefficients normalize") {
  BaseField f5 = BaseField::prime_field(5);
  BiPoly f = parse_bipoly("7*x + 3*y", f5);
  CHECK(f == parse_bipoly("2*x - 2*y", f5));
  BiPoly g = parse_bipoly("x", f5) + parse_bipoly("4*x", f5);
  CHECK(g.is_zero());
}

TEST_CASE("ord_total") {
  CHECK(P("x^2*y + y^4").ord_total() == 3);
  CHECK(P("x").ord_total() == 1);
  CHECK((P("x + y") * P("x + y")).ord_total() == 2);
  CHECK_THROWS_AS((void)BiPoly::zero().ord_total(), error);
}

TEST_CASE("deg_y and monic flag") {
  BiPoly f = P("y^3 - x^5");
  CHECK(f.deg_y() == 3);
  CHECK(f.is_monic_in_y());
  CHECK(P("x^5").deg_y() == 0);
  // top y-coefficient must lie in the ground field; x^5 has a_0 = x^5
  CHECK(!P("x^5").is_monic_in_y());
  CHECK(P("3").is_monic_in_y());
  BiPoly g = P("x*y^2 + y^2");  // (x+1)y^2
  CHECK(g.deg_y() == 2);
  CHECK(!g.is_monic_in_y());
  CHECK(!P("2*x*y^2").is_monic_in_y());
  CHECK(P("2*y^2").is_monic_in_y());  // top coefficient is a constant
}

TEST_CASE("divmod_y") {
  BiPoly f = P("y^3 - x^5");
  auto [q, r] = f.divmod_y(P("y - x"));
  CHECK(q == P("y^2 + x*y + x^2"));
  CHECK(r == P("x^3 - x^5"));
  CHECK(q * P("y - x") + r == f);
  CHECK_THROWS_AS((void)f.divmod_y(P("x*y + 1")), error);
}

TEST_CASE("exact_divide") {
  BiPoly g = P("y^2 - x^2 - x^3");
  BiPoly f = g * g * P("x^3");
  auto q = f.exact_divide(g);
  REQUIRE(q.has_value());
  CHECK(*q == g * P("x^3"));
  CHECK(!P("y^3 - x^5").exact_divide(g).has_value());
  CHECK(!P("x").exact_divide(g).has_value());
  auto q2 = q->exact_divide(g);
  REQUIRE(q2.has_value());
  CHECK(*q2 == P("x^3"));
  CHECK(!q2->exact_divide(g).has_value());  // n was maximal
}

TEST_CASE("series oracle: t*sqrt(1+t)") {
  auto s = small_oracle();
  CHECK(s.coeff(1) == Rational(1));
  CHECK(s.coeff(2) == Rational(1, 2));
  CHECK(s.coeff(3) == Rational(-1, 8));
  CHECK(s.coeff(4) == Rational(1, 16));
  CHECK(s.coeff(5) == Rational(-5, 128));
  // determinism across queries
  CHECK(s.coeff(3) == Rational(-1, 8));
  CHECK(s.max_nonzero_seen() == 5);
  CHECK_THROWS_AS(s.set_cap(1), error);  // cap only grows
}

TEST_CASE("series oracle squares to t^2*(1+t)") {
  // the defining identity pins every coefficient: s(t)^2 = t^2 + t^3
  auto s = small_oracle();
  long N = 40;
  std::vector<Rational> sq(N, Rational(0));
  for (long i = 1; i < N; ++i)
    for (long j = 1; i + j < N; ++j) sq[i + j] += s.coeff(i) * s.coeff(j);
  for (long k = 0; k < N; ++k) {
    Rational expect = (k == 2 || k == 3) ? Rational(1) : Rational(0);
    CHECK(sq[k] == expect);
  }
}

TEST_CASE("series_value") {
  auto s = small_oracle();
  CHECK(series_value(P("y - x"), s) == 2);
  CHECK(series_value(P("x"), s) == 1);
  CHECK(series_value(P("y"), s) == 1);
  CHECK(series_value(P("y - x - 1/2*x^2"), s) == 3);
  // the kernel generator vanishes identically on the branch
  CHECK(!series_value(P("y^2 - x^2 - x^3"), s).has_value());
  CHECK_THROWS_AS((void)series_value(BiPoly::zero(), s), error);
}

TEST_CASE("composite valuation: worked values") {
  CompositeValuation cv(P("y^2 - x^2 - x^3"), small_oracle());
  CHECK(composite_value(P("y^2 - x^2 - x^3"), cv) ==
        Value(Rational(1), Rational(1), Mode::LEX));
  CHECK(composite_value(P("x"), cv) ==
        Value(Rational(0), Rational(1), Mode::LEX));
  BiPoly f = P("y^2 - x^2 - x^3").pow(2) * P("x^3");
  CHECK(composite_value(f, cv) == Value(Rational(2), Rational(5), Mode::LEX));
  CHECK_THROWS_AS((void)composite_value(BiPoly::zero(), cv), error);
}

TEST_CASE("composite valuation: key polynomials have value (0, i)") {
  // P_i = y - sum_{j<i} a_j x^j has branch order i
  auto s = small_oracle();
  CompositeValuation cv(P("y^2 - x^2 - x^3"), small_oracle());
  for (long i = 2; i <= 8; ++i) {
    BiPoly p = BiPoly::y();
    for (long j = 1; j < i; ++j)
      p = p - BiPoly::monomial(j, 0, s.coeff(j));
    CHECK(composite_value(p, cv) ==
          Value(Rational(0), Rational(i), Mode::LEX));
  }
}

TEST_CASE("composite valuation rejects a wrong branch") {
  CHECK_THROWS_AS(CompositeValuation(P("y - x"), small_oracle()), error);
  CHECK_THROWS_AS(CompositeValuation(P("2"), small_oracle()), error);
}

namespace {

BiPoly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-4, 4), e(0, 3);
  BiPoly f;
  for (int t = 0; t < 4; ++t)
    f = f + BiPoly::monomial(e(rng), e(rng), Rational(coef(rng)));
  return f;
}

}  // namespace

TEST_CASE("series_value is multiplicative") {
  auto s = small_oracle();
  std::mt19937 rng(101);
  int done = 0;
  while (done < 200) {
    BiPoly f = random_poly(rng), g = random_poly(rng);
    if (f.is_zero() || g.is_zero()) continue;
    auto vf = series_value(f, s), vg = series_value(g, s);
    if (!vf || !vg) continue;
    CHECK(series_value(f * g, s) == *vf + *vg);
    ++done;
  }
}

TEST_CASE("composite_value is multiplicative and subadditive") {
  CompositeValuation cv(P("y^2 - x^2 - x^3"), small_oracle());
  std::mt19937 rng(202);
  BiPoly k = P("y^2 - x^2 - x^3");
  int done = 0;
  while (done < 200) {
    BiPoly f = random_poly(rng), g = random_poly(rng);
    if (f.is_zero() || g.is_zero()) continue;
    if (done % 3 == 0) f = f * k;  // exercise nonzero first components
    Value vf = composite_value(f, cv), vg = composite_value(g, cv);
    CHECK(composite_value(f * g, cv) == vf + vg);
    BiPoly sum = f + g;
    if (!sum.is_zero()) {
      Value vs = composite_value(sum, cv);
      Value mn = vf <= vg ? vf : vg;
      CHECK(vs >= mn);
      if (vf != vg) CHECK(vs == mn);
    }
    ++done;
  }
}
