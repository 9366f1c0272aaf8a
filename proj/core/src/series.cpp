#include "valkey/series.hpp"

#include <algorithm>

#include "valkey/error.hpp"

namespace valkey {

SeriesOracle::SeriesOracle(CoefFn fn, long hard_cap)
    : fn_(std::move(fn)), cap_(hard_cap) {
  if (cap_ < 1) throw error(errc::out_of_range, "series cap must be positive");
}

SeriesOracle SeriesOracle::t_sqrt_1_plus_t(long hard_cap) {
  // binomial(1/2, j) computed incrementally would need state; closed form:
  // binom(1/2, j) = prod_{m=0}^{j-1} (1/2 - m) / j!
  return SeriesOracle(
      [](long j) {
        long n = j - 1;  // a_j = binom(1/2, n)
        Rational r(1);
        for (long m = 0; m < n; ++m)
          r *= (Rational(1, 2) - Rational(m)) / Rational(m + 1);
        r.canonicalize();
        return r;
      },
      hard_cap);
}

Rational SeriesOracle::coeff(long j) const {
  if (j < 1) throw error(errc::out_of_range, "series index " + std::to_string(j));
  while (static_cast<long>(cache_.size()) < j)
    cache_.push_back(fn_(static_cast<long>(cache_.size()) + 1));
  return cache_[j - 1];
}

void SeriesOracle::set_cap(long cap) {
  if (cap < cap_)
    throw error(errc::out_of_range, "truncation depth only grows");
  cap_ = cap;
}

long SeriesOracle::max_nonzero_seen() const {
  for (long j = static_cast<long>(cache_.size()); j >= 1; --j)
    if (cache_[j - 1] != 0) return j;
  return 0;
}

namespace {

// Truncated series arithmetic mod t^N; v[i] = coefficient of t^i.
using Trunc = std::vector<Rational>;

Trunc trunc_mul(const Trunc& a, const Trunc& b, long N) {
  Trunc r(N, Rational(0));
  for (long i = 0; i < static_cast<long>(a.size()) && i < N; ++i) {
    if (a[i] == 0) continue;
    for (long j = 0; j < static_cast<long>(b.size()) && i + j < N; ++j)
      if (b[j] != 0) r[i + j] += a[i] * b[j];
  }
  return r;
}

std::optional<std::pair<long, Rational>> lead_at_depth(const BiPoly& f,
                                                       const SeriesOracle& s,
                                                       long N) {
  Trunc sv(N, Rational(0));
  for (long j = 1; j < N; ++j) sv[j] = s.coeff(j);
  long dy = f.deg_y();
  // powers of s(t) mod t^N
  std::vector<Trunc> spow(dy + 1);
  spow[0] = Trunc(N, Rational(0));
  if (N > 0) spow[0][0] = 1;
  for (long j = 1; j <= dy; ++j) spow[j] = trunc_mul(spow[j - 1], sv, N);
  Trunc acc(N, Rational(0));
  for (const auto& [e, c] : f.terms()) {
    const Trunc& p = spow[e.second];
    for (long i = 0; i + e.first < N; ++i)
      if (p[i] != 0) acc[i + e.first] += c * p[i];
  }
  for (long i = 0; i < N; ++i)
    if (acc[i] != 0) return std::make_pair(i, acc[i]);
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<long, Rational>> series_lead(const BiPoly& f,
                                                     const SeriesOracle& s) {
  if (f.is_zero()) throw error(errc::zero_input, "series_lead of 0");
  if (f.field().kind != BaseField::Kind::Q)
    throw error(errc::unsupported, "series oracles are rational-coefficient");
  long depth = std::max(4L, 2 * f.deg_total() + 2);
  while (true) {
    long N = std::min(depth, s.cap());
    auto lead = lead_at_depth(f, s, N);
    if (lead) return lead;
    if (N >= s.cap()) return std::nullopt;  // CAP_EXCEEDED
    depth *= 2;
  }
}

std::optional<long> series_value(const BiPoly& f, const SeriesOracle& s) {
  if (f.is_zero()) throw error(errc::zero_input, "series_value of 0");
  auto lead = series_lead(f, s);
  if (!lead) return std::nullopt;
  return lead->first;
}

bool vanishes_to_depth(const BiPoly& f, const SeriesOracle& s, long depth) {
  if (f.is_zero()) return true;
  return !lead_at_depth(f, s, depth).has_value();
}

CompositeValuation::CompositeValuation(BiPoly g, SeriesOracle s)
    : curve(std::move(g)), oracle(std::move(s)) {
  if (curve.is_zero() || curve.deg_total() == 0)
    throw error(errc::inadmissible_data, "curve must be a nonunit");
  long depth = std::min(oracle.cap(), 16 * (curve.deg_total() + 1));
  if (!vanishes_to_depth(curve, oracle, depth))
    throw error(errc::inadmissible_data,
                "curve does not vanish on the supplied branch");
}

Value composite_value(const BiPoly& f, const CompositeValuation& cv) {
  if (f.is_zero()) throw error(errc::zero_input, "composite_value of 0");
  long n = 0;
  BiPoly r = f;
  while (true) {
    auto q = r.exact_divide(cv.curve);
    if (!q) break;
    r = std::move(*q);
    ++n;
  }
  auto ord = series_value(r, cv.oracle);
  if (!ord)
    throw error(errc::cap_exceeded,
                "curve-free part vanishes on the branch to the cap");
  long correction = 0;
  if (n > 0) {
    // curve = (branch factor) * conjugate cofactor; the cofactor equals the
    // y-derivative of the curve on the branch, so each factored-out curve
    // power contributes its branch order to the second component.
    auto w = series_value(cv.curve.d_dy(), cv.oracle);
    if (!w)
      throw error(errc::cap_exceeded,
                  "curve derivative vanishes on the branch to the cap");
    correction = n * *w;
  }
  return Value(Rational(n), Rational(*ord + correction), Mode::LEX);
}

}  // namespace valkey
