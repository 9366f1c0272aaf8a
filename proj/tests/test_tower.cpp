#include <doctest.h>

#include <random>

#include "valkey/error.hpp"
#include "valkey/tower.hpp"

using namespace valkey;

namespace {

// Q(sqrt(2)): f_1 = u^2 - 2
Tower sqrt2_tower() {
  Tower t(BaseField::rationals());
  t.push_level({t.from_int(-2), t.zero()});
  return t;
}

// Q(sqrt(2))(b) with f_2 = u^3 - a_1
Tower cube_tower() {
  Tower t = sqrt2_tower();
  t.push_level({t.neg(t.gen(1)), t.zero(1), t.zero(1)});
  return t;
}

}  // namespace

TEST_CASE("base field: prime check") {
  CHECK(BaseField::prime_field(2).p == 2);
  CHECK(BaseField::prime_field(5).p == 5);
  CHECK(BaseField::prime_field(2147483647).p == 2147483647);  // 2^31 - 1
  CHECK_THROWS_AS(BaseField::prime_field(1), error);
  CHECK_THROWS_AS(BaseField::prime_field(91), error);        // 7 * 13
  CHECK_THROWS_AS(BaseField::prime_field(1 << 20), error);
}

TEST_CASE("arithmetic in Q(sqrt 2)") {
  Tower t = sqrt2_tower();
  TowerElem a = t.gen(1);
  CHECK(t.equal(t.mul(a, a), t.from_int(2)));
  // (a+1)(a-1) = a^2 - 1 = 1
  TowerElem p = t.mul(t.add(a, t.one()), t.sub(a, t.one()));
  CHECK(t.equal(p, t.one()));
  CHECK(t.equal(t.add(a, t.zero()), a));
  CHECK(t.equal(tower_add(t, a, tower_neg(t, a)), t.zero(1)));
}

TEST_CASE("inverse in Q(sqrt 2)") {
  Tower t = sqrt2_tower();
  TowerElem a = t.gen(1);
  TowerElem ia = t.inv(a);
  CHECK(t.equal(t.mul(a, ia), t.one()));
  // inv(a) = a/2
  CHECK(t.equal(ia, t.mul(a, t.from_base(Rational(1, 2)))));
  CHECK(t.equal(t.inv(t.one()), t.one()));
  CHECK_THROWS_AS((void)t.inv(t.zero(1)), error);
  // 1/(1+a) = a - 1 ... check: (1+a)(a-1) = a^2-1 = 1
  CHECK(t.equal(t.inv(t.add(t.one(), a)), t.sub(a, t.one())));
}

TEST_CASE("reducible minimal polynomial raises ZERO_DIVISOR lazily") {
  // F_5 with f_1 = u^2 - u = u(u-1)
  Tower t(BaseField::prime_field(5));
  t.push_level({t.zero(), t.from_int(-1)});
  TowerElem a = t.gen(1);  // idempotent: a^2 = a
  CHECK(t.equal(t.mul(a, a), a));
  try {
    (void)t.inv(a);
    FAIL("expected ZERO_DIVISOR");
  } catch (const error& e) {
    CHECK(e.code() == errc::zero_divisor);
  }
  // the eager check catches it upfront
  try {
    t.check_irreducible(1);
    FAIL("expected INADMISSIBLE_DATA");
  } catch (const error& e) {
    CHECK(e.code() == errc::inadmissible_data);
  }
}

TEST_CASE("eager irreducibility check accepts irreducible polynomials") {
  // u^2 - 2 is irreducible over F_5 (2 is not a QR mod 5)
  Tower t(BaseField::prime_field(5));
  t.push_level({t.from_int(-2), t.zero()});
  CHECK_NOTHROW(t.check_irreducible(1));
  // second level: u^2 - a_1 over F_25; a_1 is a nonsquare there? a_1^((25-1)/2)
  // = a_1^12 = 2^6 = 64 = 4 = -1 mod 5, so yes, irreducible.
  t.push_level({t.neg(t.gen(1)), t.zero(1)});
  CHECK_NOTHROW(t.check_irreducible(2));
  Tower q = sqrt2_tower();
  CHECK_THROWS_AS(q.check_irreducible(1), error);  // rational base unsupported
}

TEST_CASE("minpoly_degree and dimension") {
  Tower t = cube_tower();
  CHECK(t.minpoly_degree(1) == 2);
  CHECK(t.minpoly_degree(2) == 3);
  CHECK(t.dimension() == 6);
  CHECK_THROWS_AS((void)t.minpoly_degree(0), error);
  CHECK_THROWS_AS((void)t.minpoly_degree(3), error);

  Tower triv(BaseField::rationals());
  triv.push_level({triv.from_int(-7)});  // u - 7
  CHECK(triv.minpoly_degree(1) == 1);
  CHECK(triv.equal(triv.gen(1), triv.lift(triv.from_int(7), 1)));
}

TEST_CASE("two-level arithmetic: b^3 = sqrt 2") {
  Tower t = cube_tower();
  TowerElem b = t.gen(2);
  CHECK(t.equal(t.pow(b, 3), t.gen(1)));
  CHECK(t.equal(t.pow(b, 6), t.from_int(2)));
  TowerElem ib = t.inv(b);
  CHECK(t.equal(t.mul(b, ib), t.one()));
  // 1/b = b^2/sqrt2 = b^2 * sqrt2/2
  TowerElem expect =
      t.mul(t.pow(b, 2), t.mul(t.gen(1), t.from_base(Rational(1, 2))));
  CHECK(t.equal(ib, expect));
}

TEST_CASE("express_in_basis") {
  Tower t = sqrt2_tower();
  TowerElem a = t.gen(1);
  TowerElem x = t.add(t.from_int(3), t.mul(t.from_int(2), a));
  auto e = t.express_in_basis(x, 1);
  REQUIRE(e.size() == 2);
  CHECK(t.equal(e[0], t.from_int(3)));
  CHECK(t.equal(e[1], t.from_int(2)));

  auto e2 = t.express_in_basis(t.mul(a, a), 1);
  CHECK(t.equal(e2[0], t.from_int(2)));
  CHECK(t.is_zero(e2[1]));

  TowerElem s = t.mul(t.add(t.one(), a), t.add(t.one(), a));  // (1+a)^2 = 3+2a
  auto e3 = t.express_in_basis(s, 1);
  CHECK(t.equal(e3[0], t.from_int(3)));
  CHECK(t.equal(e3[1], t.from_int(2)));

  // rebuild is the identity
  TowerElem back = t.zero(1);
  TowerElem pow_a = t.one(1);
  for (const auto& c : e3) {
    back = t.add(back, t.mul(c, pow_a));
    pow_a = t.mul(pow_a, a);
  }
  CHECK(t.equal(back, s));
}

namespace {

TowerElem random_elem(const Tower& t, int level, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-9, 9);
  if (level == 0) return t.from_base(Rational(coef(rng)));
  std::vector<TowerElem> c;
  for (long j = 0; j < t.minpoly_degree(level); ++j)
    c.push_back(random_elem(t, level - 1, rng));
  TowerElem e = t.zero(level);
  TowerElem pw = t.one(level);
  TowerElem g = t.gen(level);
  for (auto& cj : c) {
    e = t.add(e, t.mul(cj, pw));
    pw = t.mul(pw, g);
  }
  return e;
}

void field_axioms(const Tower& t, int level, int trials, unsigned seed) {
  std::mt19937 rng(seed);
  for (int i = 0; i < trials; ++i) {
    TowerElem x = random_elem(t, level, rng);
    TowerElem y = random_elem(t, level, rng);
    TowerElem z = random_elem(t, level, rng);
    CHECK(t.equal(t.add(t.add(x, y), z), t.add(x, t.add(y, z))));
    CHECK(t.equal(t.mul(t.mul(x, y), z), t.mul(x, t.mul(y, z))));
    CHECK(t.equal(t.mul(x, t.add(y, z)), t.add(t.mul(x, y), t.mul(x, z))));
    CHECK(t.equal(t.mul(x, y), t.mul(y, x)));
    if (!t.is_zero(x)) CHECK(t.equal(t.mul(x, t.inv(x)), t.one()));
  }
}

}  // namespace

TEST_CASE("field axioms, rational two-level tower") {
  field_axioms(cube_tower(), 2, 250, 11);
}

TEST_CASE("field axioms, F_7 tower") {
  Tower t(BaseField::prime_field(7));
  t.push_level({t.from_int(-3), t.zero()});  // u^2 - 3, 3 is a nonresidue
  t.check_irreducible(1);
  field_axioms(t, 1, 250, 13);
}

TEST_CASE("F_p scalars normalize into [0, p)") {
  Tower t(BaseField::prime_field(5));
  CHECK(t.equal(t.from_int(7), t.from_int(2)));
  CHECK(t.equal(t.from_base(Rational(1, 2)), t.from_int(3)));  // 2*3 = 1 mod 5
  CHECK(t.equal(t.from_int(-1), t.from_int(4)));
}
