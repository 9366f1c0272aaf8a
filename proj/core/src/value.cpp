#include "valkey/value.hpp"

#include <algorithm>

#include "valkey/error.hpp"

namespace valkey {

namespace {

void require_same_mode(const Value& u, const Value& v) {
  if (u.mode != v.mode)
    throw error(errc::mode_mismatch,
                mode_str(u.mode) + " vs " + mode_str(v.mode));
}

int sgn(const Rational& r) { return mpq_sgn(r.get_mpq_t()); }

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

}  // namespace

std::string mode_str(Mode m) {
  switch (m) {
    case Mode::RANK1: return "RANK1";
    case Mode::LEX: return "LEX";
    case Mode::TAU: return "TAU";
  }
  return "?";
}

Mode mode_parse(const std::string& s) {
  if (s == "RANK1") return Mode::RANK1;
  if (s == "LEX") return Mode::LEX;
  if (s == "TAU") return Mode::TAU;
  throw error(errc::parse_error, "unknown mode " + s);
}

int tau_sign(const Rational& a, const Rational& b) {
  int sa = sgn(a), sb = sgn(b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: a + b*sqrt(2) has the sign of the dominant square.
  Rational d = a * a - 2 * b * b;  // sign(a^2 - 2b^2)
  int sd = sgn(d);
  // sqrt(2) irrational: d == 0 only when a == b == 0.
  return sa > 0 ? sd : -sd;
}

Ord compare(const Value& u, const Value& v) {
  require_same_mode(u, v);
  switch (u.mode) {
    case Mode::RANK1: {
      int c = cmp(u.a, v.a);
      return c < 0 ? Ord::LT : (c > 0 ? Ord::GT : Ord::EQ);
    }
    case Mode::LEX: {
      int c = cmp(u.a, v.a);
      if (c == 0) c = cmp(u.b, v.b);
      return c < 0 ? Ord::LT : (c > 0 ? Ord::GT : Ord::EQ);
    }
    case Mode::TAU: {
      int s = tau_sign(u.a - v.a, u.b - v.b);
      return s < 0 ? Ord::LT : (s > 0 ? Ord::GT : Ord::EQ);
    }
  }
  throw error(errc::internal, "bad mode");
}

Value Value::operator+(const Value& o) const {
  require_same_mode(*this, o);
  return Value(a + o.a, b + o.b, mode);
}

Value Value::operator-(const Value& o) const {
  require_same_mode(*this, o);
  return Value(a - o.a, b - o.b, mode);
}

Value Value::operator-() const { return Value(-a, -b, mode); }

Value Value::scaled(const Integer& n) const {
  return Value(Rational(n) * a, Rational(n) * b, mode);
}

bool Value::operator==(const Value& o) const {
  return mode == o.mode && a == o.a && b == o.b;
}

bool Value::operator<(const Value& o) const {
  return compare(*this, o) == Ord::LT;
}

bool Value::operator<=(const Value& o) const {
  return compare(*this, o) != Ord::GT;
}

std::string Value::str() const {
  if (mode == Mode::RANK1) return rat_str(a);
  return "(" + rat_str(a) + "," + rat_str(b) + ")";
}

// ---------------------------------------------------------------------------
// Lattices
// ---------------------------------------------------------------------------

namespace {

// Accumulating 2-column integer Hermite form: first row (p, q), second (0, r),
// p, r >= 0, built by folding in one generator row at a time.
struct Hnf2 {
  Integer p{0}, q{0}, r{0};

  void insert(const Integer& w0, const Integer& w1) {
    if (w0 == 0) {
      if (w1 != 0) r = gcd(r, w1);
      return;
    }
    if (p == 0) {
      if (q != 0) r = gcd(r, q);
      if (w0 > 0) {
        p = w0;
        q = w1;
      } else {
        p = -w0;
        q = -w1;
      }
      return;
    }
    Integer g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t(),
               w0.get_mpz_t());
    Integer comp = (p * w1 - w0 * q) / g;
    if (comp != 0) r = gcd(r, comp);
    q = u * q + v * w1;
    p = g;
  }

  void finalize() {
    if (r < 0) r = -r;
    if (p == 0 && q != 0) {
      r = gcd(r, q);
      q = 0;
    }
    if (p != 0 && r != 0) {
      Integer qq;
      mpz_fdiv_r(qq.get_mpz_t(), q.get_mpz_t(), r.get_mpz_t());
      q = qq;
    }
  }

  int rank() const { return (p != 0 ? 1 : 0) + (r != 0 ? 1 : 0); }
};

bool value_positive(Mode m, const Rational& a, const Rational& b) {
  switch (m) {
    case Mode::RANK1: return sgn(a) > 0;
    case Mode::LEX: return sgn(a) > 0 || (sgn(a) == 0 && sgn(b) > 0);
    case Mode::TAU: return tau_sign(a, b) > 0;
  }
  return false;
}

}  // namespace

bool ValueLattice::operator==(const ValueLattice& o) const {
  return mode == o.mode && rank == o.rank && basis == o.basis;
}

bool ValueLattice::contains(const Value& v) const {
  if (v.mode != mode) throw error(errc::mode_mismatch, "lattice membership");
  if (v.is_zero()) return true;
  if (rank == 0) return false;
  if (rank == 1) {
    const auto& [p, q] = basis[0];
    Rational t;
    if (p != 0) {
      t = v.a / p;
      if (v.b != t * q) return false;
    } else {
      if (v.a != 0) return false;
      t = v.b / q;
    }
    t.canonicalize();
    return is_integer(t);
  }
  const auto& [p, q] = basis[0];
  const auto& r = basis[1].second;
  Rational x = v.a / p;
  x.canonicalize();
  if (!is_integer(x)) return false;
  Rational y = (v.b - x * q) / r;
  y.canonicalize();
  return is_integer(y);
}

bool ValueLattice::contains(const ValueLattice& sub) const {
  if (sub.mode != mode) throw error(errc::mode_mismatch, "lattice containment");
  for (const auto& [a, b] : sub.basis)
    if (!contains(Value(a, b, mode))) return false;
  return true;
}

ValueLattice lattice_from(const std::vector<Value>& generators) {
  if (generators.empty()) throw error(errc::empty_input, "lattice_from");
  Mode mode = generators.front().mode;
  Integer den(1);
  for (const auto& g : generators) {
    if (g.mode != mode) throw error(errc::mode_mismatch, "lattice_from");
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), g.a.get_den().get_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), g.b.get_den().get_mpz_t());
  }
  Hnf2 h;
  for (const auto& g : generators) {
    Rational sa = g.a * den, sb = g.b * den;
    sa.canonicalize();
    sb.canonicalize();
    h.insert(sa.get_num(), sb.get_num());
  }
  h.finalize();

  ValueLattice lat;
  lat.mode = mode;
  lat.rank = h.rank();
  Rational d(den);
  if (lat.rank == 2) {
    lat.basis = {{Rational(h.p) / d, Rational(h.q) / d},
                 {Rational(0), Rational(h.r) / d}};
  } else if (lat.rank == 1) {
    Rational a = h.p != 0 ? Rational(h.p) / d : Rational(0);
    Rational b = h.p != 0 ? Rational(h.q) / d : Rational(h.r) / d;
    a.canonicalize();
    b.canonicalize();
    if (!value_positive(mode, a, b)) {
      a = -a;
      b = -b;
    }
    lat.basis = {{a, b}};
  }
  for (auto& [a, b] : lat.basis) {
    a.canonicalize();
    b.canonicalize();
  }
  return lat;
}

std::optional<Integer> group_index(const ValueLattice& sub,
                                   const ValueLattice& sup) {
  if (!sup.contains(sub))
    throw error(errc::not_in_group, "group_index: sub not contained in sup");
  if (sub.rank < sup.rank) return std::nullopt;  // infinite index
  if (sub.rank == 0) return Integer(1);
  if (sub.rank == 1) {
    const auto& [a1, b1] = sub.basis[0];
    const auto& [a2, b2] = sup.basis[0];
    Rational t = a2 != 0 ? a1 / a2 : b1 / b2;
    t.canonicalize();
    Integer n = t.get_num();
    if (n < 0) n = -n;
    return n;
  }
  Rational det_sub = sub.basis[0].first * sub.basis[1].second;
  Rational det_sup = sup.basis[0].first * sup.basis[1].second;
  Rational t = det_sub / det_sup;
  t.canonicalize();
  return t.get_num();
}

// ---------------------------------------------------------------------------
// Lemma 2
// ---------------------------------------------------------------------------

namespace {

// Incremental lattices G(beta_0), G(beta_0,beta_1), ...
std::vector<ValueLattice> prefix_lattices(const std::vector<Value>& betas) {
  std::vector<ValueLattice> lats;
  std::vector<Value> prefix;
  for (const auto& b : betas) {
    prefix.push_back(b);
    lats.push_back(lattice_from(prefix));
  }
  return lats;
}

void check_nbars(const std::vector<Value>& betas, const NbarList& nbars,
                 const std::vector<ValueLattice>& lats) {
  if (nbars.size() + 1 != betas.size())
    throw error(errc::inadmissible_data, "nbars/betas length mismatch");
  for (size_t i = 1; i < betas.size(); ++i) {
    auto idx = group_index(lats[i - 1], lats[i]);
    if (idx != nbars[i - 1])
      throw error(errc::inadmissible_data,
                  "supplied nbar[" + std::to_string(i) +
                      "] disagrees with the computed group index");
  }
}

// Largest t >= 0 with t*beta <= rem, for a positive beta. For LEX generators
// with zero first component and rem.a != 0 there is no finite bound; callers
// handle that case by ordering (such generators are only used once the first
// component of the remainder is exhausted).
std::optional<Integer> fit_bound(const Value& beta, const Value& rem) {
  switch (beta.mode) {
    case Mode::RANK1: {
      if (rem.a < 0) return Integer(0);
      Rational t = rem.a / beta.a;
      t.canonicalize();
      return rat_floor(t);
    }
    case Mode::LEX: {
      if (beta.a != 0) {
        if (rem.a < 0) return Integer(0);
        Rational t = rem.a / beta.a;
        t.canonicalize();
        return rat_floor(t);
      }
      if (rem.a != 0) return std::nullopt;  // unbounded or unusable
      if (rem.b < 0) return Integer(0);
      Rational t = rem.b / beta.b;
      t.canonicalize();
      return rat_floor(t);
    }
    case Mode::TAU: {
      // Archimedean: double then binary-search with exact comparison.
      Value zero(Rational(0), Rational(0), beta.mode);
      if (compare(rem, zero) == Ord::LT) return Integer(0);
      Integer hi(1);
      while (compare(beta.scaled(hi), rem) != Ord::GT) hi *= 2;
      Integer lo(0);
      while (hi - lo > 1) {
        Integer mid = (lo + hi) / 2;
        if (compare(beta.scaled(mid), rem) == Ord::GT)
          hi = mid;
        else
          lo = mid;
      }
      return lo;
    }
  }
  return Integer(0);
}

bool semigroup_dfs(const std::vector<Value>& betas, size_t idx,
                   const Value& rem, std::vector<Integer>& coeffs) {
  if (rem.is_zero()) {
    for (size_t j = idx; j < betas.size(); ++j) coeffs[j] = 0;
    return true;
  }
  if (idx == betas.size()) return false;
  auto bound = fit_bound(betas[idx], rem);
  if (!bound) {
    // LEX generator with zero first component but nonzero remaining first
    // component: it cannot contribute; skip it.
    coeffs[idx] = 0;
    return semigroup_dfs(betas, idx + 1, rem, coeffs);
  }
  for (Integer t = *bound; t >= 0; t -= 1) {
    coeffs[idx] = t;
    if (semigroup_dfs(betas, idx + 1, rem - betas[idx].scaled(t), coeffs))
      return true;
  }
  return false;
}

}  // namespace

std::optional<Lemma2Rep> lemma2_representation(const Value& gamma,
                                               const std::vector<Value>& betas,
                                               const NbarList& nbars) {
  if (betas.empty()) throw error(errc::empty_input, "lemma2_representation");
  auto lats = prefix_lattices(betas);
  check_nbars(betas, nbars, lats);
  size_t k = betas.size() - 1;
  if (!lats[k].contains(gamma)) return std::nullopt;

  Lemma2Rep rep;
  rep.rest.assign(k, Integer(0));
  Value cur = gamma;
  for (size_t i = k; i >= 1; --i) {
    if (!nbars[i - 1]) {
      // Rank jump: the coefficient of beta_i is forced. Solve by projecting
      // off the span of the lower lattice (2x2 determinant).
      const auto& [wa, wb] = lats[i - 1].basis[0];
      Rational det = betas[i].a * wb - betas[i].b * wa;
      Rational t = (cur.a * wb - cur.b * wa) / det;
      t.canonicalize();
      if (!is_integer(t) || t < 0) return std::nullopt;
      rep.rest[i - 1] = t.get_num();
      cur = cur - betas[i].scaled(t.get_num());
      if (!lats[i - 1].contains(cur)) return std::nullopt;
      continue;
    }
    bool found = false;
    for (Integer a(0); a < *nbars[i - 1]; a += 1) {
      Value rem = cur - betas[i].scaled(a);
      if (lats[i - 1].contains(rem)) {
        rep.rest[i - 1] = a;
        cur = rem;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;  // not in the group after all
  }
  // cur must be an integer multiple of beta_0.
  const Value& b0 = betas[0];
  Rational t = b0.a != 0 ? cur.a / b0.a : cur.b / b0.b;
  t.canonicalize();
  if (!is_integer(t) || b0.scaled(t.get_num()) != cur) return std::nullopt;
  rep.a0 = t.get_num();
  return rep;
}

MembershipResult lemma2_membership(const Value& gamma,
                                   const std::vector<Value>& betas,
                                   const NbarList& nbars) {
  MembershipResult res;
  bool in_group;
  {
    auto lats = prefix_lattices(betas);
    check_nbars(betas, nbars, lats);
    in_group = lats.back().contains(gamma);
  }
  if (!in_group) {
    res.reason = "NOT_IN_GROUP";
    return res;
  }
  auto rep = lemma2_representation(gamma, betas, nbars);
  size_t k = betas.size() - 1;
  bool finite_top = k == 0 || nbars[k - 1].has_value();
  if (rep && k > 0 && finite_top) {
    Value threshold = betas[k].scaled(*nbars[k - 1]);
    if (compare(gamma, threshold) != Ord::LT) {
      // Lemma 2 part 2: above the threshold a0 is positive for admissible
      // data; for inadmissible inputs fall through to the enumeration.
      if (rep->a0 > 0) {
        res.member = true;
        res.witness = rep;
        return res;
      }
    }
  }
  if (rep && rep->a0 >= 0) {
    res.member = true;
    res.witness = rep;
    return res;
  }
  // Otherwise: exact bounded enumeration over nonnegative coefficients
  // (no nbar caps here; this is semigroup membership).
  std::vector<Integer> coeffs(betas.size());
  if (semigroup_dfs(betas, 0, gamma, coeffs)) {
    Lemma2Rep w;
    w.a0 = coeffs[0];
    w.rest.assign(coeffs.begin() + 1, coeffs.end());
    res.member = true;
    res.witness = w;
    return res;
  }
  res.reason = "in group, not representable with nonnegative coefficients";
  return res;
}

SemigroupDataReport validate_semigroup_data(
    const std::vector<Value>& betas,
    const std::optional<std::vector<std::optional<Integer>>>& dees,
    bool non_complete) {
  SemigroupDataReport rep;
  if (betas.size() < 2)
    throw error(errc::inadmissible_data, "need at least two generators");
  Mode mode = betas.front().mode;
  Value zero(Rational(0), Rational(0), mode);
  for (const auto& b : betas) {
    if (b.mode != mode) throw error(errc::mode_mismatch, "mixed value modes");
    if (compare(b, zero) != Ord::GT)
      throw error(errc::inadmissible_data, "nonpositive generator " + b.str());
  }
  size_t lam = betas.size() - 1;
  if (dees && dees->size() != lam)
    throw error(errc::inadmissible_data, "dees must have one entry per i >= 1");

  auto lats = prefix_lattices(betas);
  for (size_t i = 1; i <= lam; ++i)
    rep.nbars.push_back(group_index(lats[i - 1], lats[i]));

  auto violate = [&](size_t i, const std::string& msg) {
    if (rep.ok) {
      rep.ok = false;
      rep.first_violation = static_cast<int>(i);
      rep.message = msg;
    }
  };

  for (size_t i = 1; i < lam; ++i) {
    const auto& nbar = rep.nbars[i - 1];
    if (!nbar) {
      violate(i, "interior index with infinite group index");
      continue;
    }
    Integer mult = *nbar;
    if (dees) {
      const auto& d = (*dees)[i - 1];
      if (!d) {
        violate(i, "interior index with infinite residue degree");
        continue;
      }
      mult *= *d;
    }
    if (compare(betas[i + 1], betas[i].scaled(mult)) != Ord::GT)
      violate(i, "beta[" + std::to_string(i + 1) + "] <= nbar*d*beta[" +
                     std::to_string(i) + "]");
  }

  if (dees) {
    const auto& nbar = rep.nbars[lam - 1];
    const auto& d = (*dees)[lam - 1];
    bool terminal_ok =
        (!nbar && d && *d == 1) || (nbar && !d) || (non_complete && nbar && d);
    if (!terminal_ok)
      violate(lam,
              "terminal index: need nbar = infinity with d = 1, or nbar "
              "finite with d = infinity" +
                  std::string(non_complete ? " (or both finite)" : ""));
  }
  return rep;
}

}  // namespace valkey
