#include "valkey/birat.hpp"

#include <numeric>
#include <optional>

#include "valkey/error.hpp"

namespace valkey {

namespace {

long to_long(const Integer& n) {
  if (!n.fits_slong_p()) throw error(errc::unsupported, "count out of range");
  return n.get_si();
}

// ceiling of p/q for q > 0
long ceil_div(long p, long q) {
  long f = p / q;
  if (p % q != 0 && (p > 0) == (q > 0)) ++f;
  return f;
}

std::optional<Rational> as_scalar(const TowerElem& e) {
  if (e.level == 0) return e.scalar;
  for (size_t k = 1; k < e.coeffs.size(); ++k) {
    auto s = as_scalar(e.coeffs[k]);
    if (!s || *s != 0) return std::nullopt;
  }
  if (e.coeffs.empty()) return Rational(0);
  return as_scalar(e.coeffs[0]);
}

Rational rat_pow(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  bool inv = e < 0;
  unsigned long k = static_cast<unsigned long>(inv ? -e : e);
  if (inv && base == 0) throw error(errc::zero_input, "0^negative");
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), k);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), k);
  r.canonicalize();
  if (inv) r = 1 / r;
  return r;
}

Value value_div(const Value& v, long n) {
  Rational a = v.a / n, b = v.b / n;
  a.canonicalize();
  b.canonicalize();
  return Value(a, b, v.mode);
}

}  // namespace

TransformData make_transform(long nbar1, long w, int eps) {
  if (eps != 1 && eps != -1)
    throw error(errc::out_of_range, "eps must be +-1");
  if (nbar1 < 1 || w < 1)
    throw error(errc::out_of_range, "nbar1 and w must be positive");
  if (std::gcd(nbar1, w) != 1)
    throw error(errc::inadmissible_data, "nbar1 and w are not coprime");
  TransformData t;
  t.nbar1 = nbar1;
  t.w = w;
  t.eps = eps;
  if (nbar1 == 1) {
    if (eps == -1)
      throw error(errc::inadmissible_data,
                  "no nonnegative solution with nbar1 = 1 and eps = -1");
    t.a = 0;
    t.b = 1;
    return t;
  }
  // w*a == -eps (mod nbar1), unique in [0, nbar1)
  long a = 0;
  for (; a < nbar1; ++a)
    if (((w * a + eps) % nbar1 + nbar1) % nbar1 == 0) break;
  t.a = a;
  t.b = (w * a + eps) / nbar1;
  if (t.nbar1 * t.b - t.w * t.a != eps)
    throw error(errc::internal, "bad Bezout solution");
  return t;
}

BiPoly substitute(const TransformData& t, const BiPoly& f) {
  BiPoly out(f.field());
  for (const auto& [e, c] : f.terms()) {
    long ex = t.nbar1 * e.first + t.w * e.second;
    long ey = t.a * e.first + t.b * e.second;
    out.set_coeff(ex, ey, out.coeff(ex, ey) + c);
  }
  return out;
}

QuadraticTransform quadratic_transform(const GenSeq& seq) {
  if (seq.mode() != Mode::RANK1)
    throw error(errc::unsupported, "rank-1 sequences only");
  if (seq.steps() < 2)
    throw error(errc::depth_exceeded,
                "need two constructed keys to transform");
  auto nb1 = seq.nbar(1);
  if (!nb1)
    throw error(errc::unsupported, "infinite first index");
  long nbar1 = to_long(*nb1);
  const auto& u1 = seq.U(1);
  if (u1.size() != 1 || u1[0] < 1)
    throw error(errc::internal, "first reference monomial is not a power of x");
  long w = u1[0];
  TransformData td = make_transform(nbar1, w, 1);

  // transformed values, in the original units
  Value bh0 = value_div(seq.beta(0), nbar1);
  std::vector<Value> bhats = {bh0};
  Integer prod(w);
  for (int i = 1; i + 1 < seq.known_betas(); ++i) {
    std::optional<Integer> ni;
    try {
      ni = seq.little_n(i);
    } catch (const error& e) {
      if (e.code() == errc::out_of_range) break;
      throw;
    }
    if (!ni) break;
    prod *= *ni;
    bhats.push_back(seq.beta(i + 1) - bh0.scaled(prod));
  }
  int new_depth = std::min<int>(seq.steps() - 1,
                                static_cast<int>(bhats.size()) - 1);

  // residue data: alpha_hat_i = alpha_{i+1} * alpha_1^(eps*(a*w0 + b*w1))
  // where (w0, w1) are the x/y exponents of the reference monomial U_{i+1};
  // scalar residue steps only
  auto scalar_alpha = [&](int i) {
    auto s = as_scalar(seq.alpha(i));
    if (!s)
      throw error(errc::unsupported,
                  "transforms of residue-extension steps are not supported");
    return *s;
  };
  Rational c1 = scalar_alpha(1);
  Tower nt(seq.field());
  for (int i = 1; i <= new_depth; ++i) {
    const auto& u = seq.U(i + 1);
    long w0 = u.empty() ? 0 : u[0];
    long w1 = u.size() > 1 ? u[1] : 0;
    long m = td.eps * (td.a * w0 + td.b * w1);
    Rational ahat = scalar_alpha(i + 1) * rat_pow(c1, m);
    ahat.canonicalize();
    nt.push_level({nt.from_base(-ahat)});
  }
  QuadraticTransform out{td, GenSeq::synthesize(std::move(bhats),
                                                std::move(nt), new_depth)};
  return out;
}

std::vector<QuadraticTransform> transform_chain(const GenSeq& seq,
                                                int steps) {
  if (steps < 0) throw error(errc::out_of_range, "negative step count");
  std::vector<QuadraticTransform> out;
  const GenSeq* cur = &seq;
  for (int j = 0; j < steps; ++j) {
    out.push_back(quadratic_transform(*cur));
    cur = &out.back().transformed;
  }
  return out;
}

DeltaShift delta_shift(long lambda, long d1, long nbar1, long w, long a,
                       long b, int eps) {
  if (eps != 1 && eps != -1)
    throw error(errc::out_of_range, "eps must be +-1");
  if (d1 < 1 || nbar1 < 1 || w < 1)
    throw error(errc::out_of_range, "d1, nbar1, w must be positive");
  if (nbar1 * b - w * a != eps)
    throw error(errc::inadmissible_data, "a, b do not solve the unimodularity");
  long n1 = nbar1 * d1;
  if (lambda < n1 * w)
    throw error(errc::out_of_range, "lambda below the n1*w threshold");
  long lea = lambda * eps * a;
  long r = ceil_div(lea, nbar1);
  DeltaShift s;
  s.delta1 = r * nbar1 - lea;
  s.delta0 = (lambda * eps * b - r * w) - (d1 - 1) * w;
  s.z = a * s.delta0 + b * (s.delta1 + (d1 - 1) * nbar1);
  if (s.delta0 < 0 || s.delta1 < 0 || s.delta1 >= nbar1)
    throw error(errc::internal, "delta out of range");
  for (long i = 0; i < d1; ++i) {
    long p = s.delta0 + i * w;
    long q = s.delta1 + (d1 - 1 - i) * nbar1;
    if (nbar1 * p + w * q != lambda || a * p + b * q != s.z - i * eps)
      throw error(errc::internal, "monomial identity failed");
  }
  return s;
}

std::vector<TowerElem> reciprocal_minpoly_tail(const Tower& t, int level) {
  const auto& tail = t.minpoly_tail(level);
  long d = t.minpoly_degree(level);
  TowerElem inv_b0 = t.inv(tail[0]);
  std::vector<TowerElem> out;
  out.reserve(static_cast<size_t>(d));
  out.push_back(inv_b0);  // coefficient of u^0
  for (long j = 1; j < d; ++j)
    out.push_back(t.mul(tail[static_cast<size_t>(d - j)], inv_b0));
  return out;
}

}  // namespace valkey
