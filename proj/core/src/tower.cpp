#include "valkey/tower.hpp"

#include <algorithm>

#include "valkey/error.hpp"

namespace valkey {

namespace {

bool miller_rabin(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long q : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul,
                          29ul, 31ul, 37ul}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  Integer nz(static_cast<unsigned long>(n));
  unsigned long d = n - 1;
  int r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  // These witnesses are exact for n < 3.3e24, far past the 2^31 contract.
  for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul,
                          29ul, 31ul, 37ul}) {
    Integer x, az(a), dz(d);
    mpz_powm(x.get_mpz_t(), az.get_mpz_t(), dz.get_mpz_t(), nz.get_mpz_t());
    if (x == 1 || x == Integer(n - 1)) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = (x * x) % nz;
      if (x == Integer(n - 1)) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace

BaseField BaseField::prime_field(long p) {
  if (p < 2 || !miller_rabin(static_cast<unsigned long>(p)))
    throw error(errc::inadmissible_data,
                "modulus " + std::to_string(p) + " is not prime");
  return BaseField{Kind::Fp, p};
}

Rational Tower::base_norm(const Rational& v) const {
  Rational r = v;
  r.canonicalize();
  if (base_.kind == BaseField::Kind::Q) return r;
  Integer p(base_.p);
  Integer num, den_inv;
  mpz_fdiv_r(num.get_mpz_t(), r.get_num().get_mpz_t(), p.get_mpz_t());
  if (mpz_invert(den_inv.get_mpz_t(), r.get_den().get_mpz_t(),
                 p.get_mpz_t()) == 0)
    throw error(errc::zero_divisor, "denominator divisible by the modulus");
  Integer out = (num * den_inv) % p;
  return Rational(out);
}

int Tower::push_level(std::vector<TowerElem> tail) {
  if (tail.empty())
    throw error(errc::inadmissible_data, "minimal polynomial of degree 0");
  int below = num_levels();
  for (auto& c : tail) {
    if (c.level > below)
      throw error(errc::inadmissible_data,
                  "minimal polynomial coefficient above its level");
    c = lift(c, below);
  }
  tails_.push_back(std::move(tail));
  return num_levels();
}

long Tower::minpoly_degree(int level) const {
  if (level < 1 || level > num_levels())
    throw error(errc::out_of_range, "level " + std::to_string(level));
  return static_cast<long>(tails_[level - 1].size());
}

const std::vector<TowerElem>& Tower::minpoly_tail(int level) const {
  if (level < 1 || level > num_levels())
    throw error(errc::out_of_range, "level " + std::to_string(level));
  return tails_[level - 1];
}

Integer Tower::dimension() const {
  Integer d(1);
  for (const auto& t : tails_) d *= static_cast<long>(t.size());
  return d;
}

TowerElem Tower::make(int level, std::vector<TowerElem> coeffs) const {
  TowerElem e;
  e.level = level;
  long d = minpoly_degree(level);
  coeffs.resize(static_cast<size_t>(d), zero(level - 1));
  e.coeffs = std::move(coeffs);
  return e;
}

TowerElem Tower::zero(int level) const {
  if (level == 0) {
    TowerElem e;
    e.scalar = 0;
    return e;
  }
  return make(level, {});
}

TowerElem Tower::one(int level) const { return lift(from_base(1), level); }

TowerElem Tower::from_base(const Rational& v) const {
  TowerElem e;
  e.scalar = base_norm(v);
  return e;
}

TowerElem Tower::gen(int level) const {
  long d = minpoly_degree(level);
  if (d == 1) {
    // u = -c_0 already at the level below.
    return make(level, {neg(tails_[level - 1][0])});
  }
  std::vector<TowerElem> c(2, zero(level - 1));
  c[1] = one(level - 1);
  return make(level, std::move(c));
}

TowerElem Tower::lift(const TowerElem& x, int level) const {
  if (x.level > level)
    throw error(errc::out_of_range, "cannot lower a tower element");
  TowerElem e = x;
  while (e.level < level) {
    TowerElem up;
    up.level = e.level + 1;
    long d = minpoly_degree(up.level);
    up.coeffs.assign(static_cast<size_t>(d), zero(e.level));
    up.coeffs[0] = std::move(e);
    e = std::move(up);
  }
  return e;
}

bool Tower::is_zero(const TowerElem& x) const {
  if (x.level == 0) return x.scalar == 0;
  for (const auto& c : x.coeffs)
    if (!is_zero(c)) return false;
  return true;
}

bool Tower::equal(const TowerElem& x, const TowerElem& y) const {
  int lv = std::max(x.level, y.level);
  return lift(x, lv) == lift(y, lv);
}

TowerElem Tower::add(const TowerElem& x, const TowerElem& y) const {
  int lv = std::max(x.level, y.level);
  TowerElem a = lift(x, lv), b = lift(y, lv);
  if (lv == 0) return from_base(a.scalar + b.scalar);
  for (size_t j = 0; j < a.coeffs.size(); ++j)
    a.coeffs[j] = add(a.coeffs[j], b.coeffs[j]);
  return a;
}

TowerElem Tower::neg(const TowerElem& x) const {
  TowerElem e = x;
  if (e.level == 0) return from_base(-e.scalar);
  for (auto& c : e.coeffs) c = neg(c);
  return e;
}

TowerElem Tower::sub(const TowerElem& x, const TowerElem& y) const {
  return add(x, neg(y));
}

TowerElem Tower::mul(const TowerElem& x, const TowerElem& y) const {
  int lv = std::max(x.level, y.level);
  TowerElem a = lift(x, lv), b = lift(y, lv);
  if (lv == 0) return from_base(a.scalar * b.scalar);
  size_t d = a.coeffs.size();
  std::vector<TowerElem> prod(2 * d - 1, zero(lv - 1));
  for (size_t i = 0; i < d; ++i) {
    if (is_zero(a.coeffs[i])) continue;
    for (size_t j = 0; j < d; ++j)
      prod[i + j] = add(prod[i + j], mul(a.coeffs[i], b.coeffs[j]));
  }
  const auto& tail = tails_[lv - 1];
  for (size_t k = prod.size(); k-- > d;) {
    TowerElem c = std::move(prod[k]);
    if (is_zero(c)) continue;
    // u^k = -sum tail[j] u^{k-d+j}
    for (size_t j = 0; j < d; ++j)
      prod[k - d + j] = sub(prod[k - d + j], mul(c, tail[j]));
  }
  prod.resize(d);
  return make(lv, std::move(prod));
}

namespace {

using Poly = std::vector<TowerElem>;  // coefficients low to high, trimmed

void trim(const Tower& t, Poly& p) {
  while (!p.empty() && t.is_zero(p.back())) p.pop_back();
}

Poly poly_sub(const Tower& t, const Poly& a, const Poly& b) {
  Poly r = a;
  if (b.size() > r.size()) r.resize(b.size(), t.zero(r.empty() ? 0 : 0));
  for (size_t i = 0; i < b.size(); ++i) r[i] = t.sub(r[i], b[i]);
  trim(t, r);
  return r;
}

Poly poly_scale_shift(const Tower& t, const Poly& p, const TowerElem& c,
                      size_t shift) {
  Poly r(p.size() + shift, t.zero(c.level));
  for (size_t i = 0; i < p.size(); ++i) r[i + shift] = t.mul(p[i], c);
  trim(t, r);
  return r;
}

// a = q*b + r with deg r < deg b; b nonempty. May throw ZERO_DIVISOR from the
// leading-coefficient inversion one level down.
std::pair<Poly, Poly> poly_divmod(const Tower& t, Poly a, const Poly& b) {
  TowerElem lead_inv = t.inv(b.back());
  Poly q;
  trim(t, a);
  while (a.size() >= b.size()) {
    size_t shift = a.size() - b.size();
    TowerElem c = t.mul(a.back(), lead_inv);
    if (q.size() < shift + 1) q.resize(shift + 1, t.zero(c.level));
    q[shift] = t.add(q[shift], c);
    a = poly_sub(t, a, poly_scale_shift(t, b, c, shift));
    if (!a.empty() && a.size() > shift + b.size() - 1) a.resize(shift + b.size() - 1);
    trim(t, a);
  }
  trim(t, q);
  return {std::move(q), std::move(a)};
}

Poly poly_mul(const Tower& t, const Poly& a, const Poly& b, int level) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, t.zero(level));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = t.add(r[i + j], t.mul(a[i], b[j]));
  trim(t, r);
  return r;
}

}  // namespace

TowerElem Tower::inv(const TowerElem& x) const {
  if (is_zero(x)) throw error(errc::zero_input, "inverse of zero");
  if (x.level == 0) {
    if (base_.kind == BaseField::Kind::Q) return from_base(1 / x.scalar);
    Integer r, p(base_.p);
    if (mpz_invert(r.get_mpz_t(), x.scalar.get_num().get_mpz_t(),
                   p.get_mpz_t()) == 0)
      throw error(errc::internal, "nonzero residue without inverse");
    return from_base(Rational(r));
  }
  int lv = x.level;
  // Extended Euclid against the level's minimal polynomial. Track only the
  // cofactor of x: s*x = r (mod f).
  Poly f = tails_[lv - 1];
  f.push_back(one(lv - 1));
  Poly r0 = f, r1 = x.coeffs;
  trim(*this, r1);
  Poly s0, s1 = {one(lv - 1)};
  while (r1.size() > 1) {
    auto [q, r2] = poly_divmod(*this, r0, r1);
    Poly s2 = poly_sub(*this, s0, poly_mul(*this, q, s1, lv - 1));
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
    if (r1.empty())
      throw error(errc::zero_divisor,
                  "noninvertible element: reducible minimal polynomial at "
                  "level " +
                      std::to_string(lv));
  }
  TowerElem c_inv = inv(r1[0]);
  Poly out;
  out.reserve(s1.size());
  for (const auto& s : s1) out.push_back(mul(s, c_inv));
  return make(lv, std::move(out));
}

TowerElem Tower::div(const TowerElem& x, const TowerElem& y) const {
  return mul(x, inv(y));
}

TowerElem Tower::pow(const TowerElem& x, const Integer& e) const {
  if (e < 0) return pow(inv(x), -e);
  TowerElem base = lift(x, x.level);
  TowerElem acc = one(x.level);
  Integer k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) acc = mul(acc, base);
    base = mul(base, base);
    k >>= 1;
  }
  return acc;
}

std::vector<TowerElem> Tower::express_in_basis(const TowerElem& x,
                                               int level) const {
  if (level < 1 || level > num_levels())
    throw error(errc::out_of_range, "level " + std::to_string(level));
  if (x.level > level)
    throw error(errc::out_of_range, "element above the requested level");
  return lift(x, level).coeffs;
}

void Tower::check_irreducible(int level) const {
  if (base_.kind != BaseField::Kind::Fp)
    throw error(errc::unsupported,
                "eager irreducibility check needs a finite base field");
  long d = minpoly_degree(level);
  if (d == 1) return;
  // Order of the field below this level.
  Integer q(base_.p);
  for (int i = 1; i < level; ++i) {
    Integer e(minpoly_degree(i));
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), q.get_mpz_t(), e.get_ui());
    q = r;
  }
  Poly f = tails_[level - 1];
  f.push_back(one(level - 1));
  // u as a residue mod f
  Poly u(2, zero(level - 1));
  u[1] = one(level - 1);
  auto modmul = [&](const Poly& a, const Poly& b) {
    return poly_divmod(*this, poly_mul(*this, a, b, level - 1), f).second;
  };
  Poly frob = u;  // will hold u^{q^j} mod f
  for (long j = 1; 2 * j <= d; ++j) {
    // frob <- frob^q mod f by square and multiply
    Poly acc = {one(level - 1)};
    Poly sq = frob;
    Integer k = q;
    while (k > 0) {
      if (mpz_odd_p(k.get_mpz_t())) acc = modmul(acc, sq);
      sq = modmul(sq, sq);
      k >>= 1;
    }
    frob = std::move(acc);
    // gcd(f, u^{q^j} - u) nontrivial => factor of degree dividing j
    Poly g = poly_sub(*this, frob, u);
    Poly a = f, b = g;
    trim(*this, b);
    while (!b.empty()) {
      Poly r = poly_divmod(*this, a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    if (a.size() > 1)
      throw error(errc::inadmissible_data,
                  "reducible minimal polynomial at level " +
                      std::to_string(level));
  }
}

std::string Tower::str(const TowerElem& x) const {
  if (x.level == 0) return rat_str(x.scalar);
  std::string out;
  for (size_t j = 0; j < x.coeffs.size(); ++j) {
    if (is_zero(x.coeffs[j])) continue;
    if (!out.empty()) out += " + ";
    std::string c = str(x.coeffs[j]);
    if (j == 0) {
      out += c;
      continue;
    }
    if (c != "1") out += "(" + c + ")*";
    out += "a" + std::to_string(x.level);
    if (j > 1) out += "^" + std::to_string(j);
  }
  return out.empty() ? "0" : out;
}

}  // namespace valkey
