#include "valkey/valuation.hpp"

#include <algorithm>
#include <cstdlib>

#include "valkey/error.hpp"

namespace valkey {

namespace {

constexpr long kSieveLimit = 1L << 26;

long to_long(const Integer& n) {
  if (!n.fits_slong_p()) throw error(errc::unsupported, "count out of range");
  return n.get_si();
}

Integer lcm_denoms(const std::vector<Rational>& vals) {
  Integer d = 1;
  for (const auto& v : vals)
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den().get_mpz_t());
  return d;
}

std::vector<Rational> rank1_parts(const SemigroupDescription& desc,
                                  const char* who) {
  if (desc.mode != Mode::RANK1)
    throw error(errc::unsupported,
                std::string(who) +
                    ": rank-1 rational descriptions only; project other value "
                    "groups to a rank-1 quotient first");
  if (desc.generators.empty())
    throw error(errc::empty_input, std::string(who) + ": no generators");
  std::vector<Rational> out;
  out.reserve(desc.generators.size());
  for (const auto& g : desc.generators) {
    if (g.a <= 0)
      throw error(errc::inadmissible_data,
                  std::string(who) + ": nonpositive generator " + g.str());
    out.push_back(g.a);
  }
  return out;
}

/// reach[v] = can v be written as a nonnegative combination of gens.
std::vector<char> reach_sieve(const std::vector<long>& gens, long n) {
  std::vector<char> reach(static_cast<size_t>(n) + 1, 0);
  reach[0] = 1;
  for (long g : gens) {
    if (g <= 0 || g > n) continue;
    for (long v = g; v <= n; ++v)
      if (reach[v - g]) reach[v] = 1;
  }
  return reach;
}

std::vector<long> scale_to_int(const std::vector<Rational>& vals,
                               const Integer& den) {
  std::vector<long> out;
  out.reserve(vals.size());
  for (const auto& v : vals) {
    Rational t = v * Rational(den);
    t.canonicalize();
    out.push_back(to_long(t.get_num()));
  }
  return out;
}

}  // namespace

std::string semigroup_case_str(SemigroupCase c) {
  switch (c) {
    case SemigroupCase::RANK1: return "rank-1";
    case SemigroupCase::CASE1: return "case-1";
    case SemigroupCase::CASE2: return "case-2";
    case SemigroupCase::CASE3: return "case-3";
  }
  throw error(errc::internal, "bad case tag");
}

SemigroupDescription describe_generators(std::vector<Value> gens) {
  if (gens.empty()) throw error(errc::empty_input, "no generators");
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  SemigroupDescription d;
  d.mode = gens.front().mode;
  for (const auto& g : gens) {
    if (g.mode != d.mode) throw error(errc::mode_mismatch, "mixed modes");
    if (!(Value(Rational(0), Rational(0), d.mode) < g))
      throw error(errc::inadmissible_data,
                  "nonpositive generator " + g.str());
  }
  d.generators = std::move(gens);
  d.nbars.push_back(Integer(1));
  for (size_t i = 1; i < d.generators.size(); ++i) {
    std::vector<Value> prefix(d.generators.begin(),
                              d.generators.begin() + i);
    auto sub = lattice_from(prefix);
    prefix.push_back(d.generators[i]);
    auto sup = lattice_from(prefix);
    d.nbars.push_back(group_index(sub, sup));
  }
  return d;
}

Valuation Valuation::synthetic(GenSeq seq) {
  Valuation v(Kind::SYNTHETIC);
  v.seq_depth_ = seq.steps();
  v.seq_ = std::move(seq);
  return v;
}

Valuation Valuation::from_series(SeriesOracle s) {
  Valuation v(Kind::SERIES);
  v.series_ = std::move(s);
  return v;
}

Valuation Valuation::from_composite(CompositeValuation cv) {
  Valuation v(Kind::COMPOSITE);
  v.comp_ = std::move(cv);
  return v;
}

Mode Valuation::mode() const {
  switch (kind_) {
    case Kind::SYNTHETIC: return seq_->mode();
    case Kind::SERIES: return Mode::RANK1;
    case Kind::COMPOSITE: return Mode::LEX;
  }
  throw error(errc::internal, "bad kind");
}

Value Valuation::value_of(const BiPoly& f) const {
  switch (kind_) {
    case Kind::SYNTHETIC:
      return seq_->value_of(f);
    case Kind::SERIES: {
      auto v = series_value(f, *series_);
      if (!v)
        throw error(errc::cap_exceeded,
                    "no finite value certified to the series cap");
      return Value::rank1(Rational(*v));
    }
    case Kind::COMPOSITE:
      return composite_value(f, *comp_);
  }
  throw error(errc::internal, "bad kind");
}

const GenSeq& Valuation::sequence(int depth) const {
  switch (kind_) {
    case Kind::SYNTHETIC:
      if (seq_->state() == TermState::OPEN && seq_->steps() < depth)
        seq_ = seq_->deepened(depth - seq_->steps());
      return *seq_;
    case Kind::SERIES:
      if (!seq_ || (seq_depth_ < depth && seq_->state() == TermState::OPEN)) {
        SeriesValOracle o(*series_);
        seq_ = GenSeq::analyze(o, depth);
        seq_depth_ = depth;
      }
      return *seq_;
    case Kind::COMPOSITE:
      if (!seq_ || (seq_depth_ < depth && seq_->state() == TermState::OPEN)) {
        CompositeValOracle o(*comp_);
        seq_ = GenSeq::analyze(o, depth);
        seq_depth_ = depth;
      }
      return *seq_;
  }
  throw error(errc::internal, "bad kind");
}

SemigroupDescription semigroup(const Valuation& v, int depth) {
  const GenSeq& s = v.sequence(depth);
  SemigroupDescription d;
  d.mode = s.mode();
  d.depth = depth;
  d.generators.push_back(s.beta(0));
  d.nbars.push_back(Integer(1));
  for (int i = 1; i <= depth; ++i) {
    std::optional<Integer> nb;
    try {
      nb = s.nbar(i);
    } catch (const error& e) {
      if (e.code() == errc::out_of_range) break;
      throw;
    }
    if (!nb || *nb > 1) {
      d.generators.push_back(s.beta(i));
      d.nbars.push_back(std::move(nb));
    }
  }
  if (d.mode != Mode::LEX) {
    d.case_tag = SemigroupCase::RANK1;
    return d;
  }
  if (!s.case3_curve()) {
    d.case_tag = SemigroupCase::CASE1;
    return d;
  }
  const BiPoly& g = *s.case3_curve();
  bool is_key = false;
  for (int i = 0; i <= s.top_index(); ++i)
    if (s.key_poly(i) == g) {
      is_key = true;
      break;
    }
  if (is_key) {
    d.case_tag = SemigroupCase::CASE2;
    return d;
  }
  d.case_tag = SemigroupCase::CASE3;
  d.curve_value = s.case3_value();
  if (d.curve_value) {
    d.generators.push_back(*d.curve_value);
    d.nbars.push_back(std::nullopt);
  }
  return d;
}

std::vector<Value> enumerate_semigroup(const SemigroupDescription& desc,
                                       const Value& bound) {
  auto gens = rank1_parts(desc, "enumerate_semigroup");
  if (bound.mode != Mode::RANK1)
    throw error(errc::mode_mismatch, "bound mode");
  if (bound.a <= 0) throw error(errc::out_of_range, "bound must be positive");
  Integer den = lcm_denoms(gens);
  auto gi = scale_to_int(gens, den);
  Rational b = bound.a * Rational(den);
  b.canonicalize();
  Integer top = is_integer(b) ? Integer(b.get_num() - 1) : rat_floor(b);
  if (top < 1) return {};
  long n = to_long(top);
  if (n > kSieveLimit)
    throw error(errc::unsupported, "bound too large for dense enumeration");
  auto reach = reach_sieve(gi, n);
  std::vector<Value> out;
  for (long vv = 1; vv <= n; ++vv)
    if (reach[vv]) {
      Rational r(vv);
      r /= Rational(den);
      r.canonicalize();
      out.push_back(Value::rank1(r));
    }
  return out;
}

SymmetryResult is_symmetric(const SemigroupDescription& desc) {
  auto gens = rank1_parts(desc, "is_symmetric");
  Integer den = lcm_denoms(gens);
  auto scaled = scale_to_int(gens, den);
  Integer gcd = 0;
  for (long g : scaled) mpz_gcd_ui(gcd.get_mpz_t(), gcd.get_mpz_t(), g);
  long common = to_long(gcd);
  std::vector<long> ni;
  ni.reserve(scaled.size());
  for (long g : scaled) ni.push_back(g / common);
  long m0 = *std::min_element(ni.begin(), ni.end());
  long maxg = *std::max_element(ni.begin(), ni.end());

  // sieve until a run of m0 consecutive members certifies the conductor
  long bound = m0 * maxg + 2 * maxg + 2;
  std::vector<char> reach;
  long conductor = -1;
  for (;;) {
    if (bound > kSieveLimit)
      throw error(errc::unsupported, "conductor search exceeded sieve limit");
    reach = reach_sieve(ni, bound);
    long run = 0;
    for (long vv = 0; vv <= bound; ++vv) {
      run = reach[vv] ? run + 1 : 0;
      if (run == m0) {
        conductor = vv - m0 + 1;
        break;
      }
    }
    if (conductor >= 0) break;
    bound *= 2;
  }
  long frob = -1;
  for (long vv = conductor - 1; vv >= 0; --vv)
    if (!reach[vv]) {
      frob = vv;
      break;
    }

  long hi = conductor + std::labs(frob) + m0 + 1;
  auto member = [&](long s) {
    if (s < 0) return false;
    if (s >= conductor) return true;
    return reach[s] != 0;
  };
  bool ok = true;
  for (long s = -hi; s <= hi && ok; ++s)
    ok = member(s) == !member(frob - s);

  SymmetryResult r;
  r.symmetric = ok;
  r.frobenius = Integer(frob);
  Rational scale = Rational(den) / Rational(common);
  scale.canonicalize();
  r.scale = scale;
  Rational orig = Rational(frob) / scale;
  orig.canonicalize();
  r.frobenius_original = Value::rank1(orig);
  return r;
}

std::vector<DensityPoint> density(const SemigroupDescription& desc,
                                  long n_max) {
  auto gens = rank1_parts(desc, "density");
  if (n_max < 1) throw error(errc::out_of_range, "n_max must be positive");
  Rational g0 = *std::min_element(gens.begin(), gens.end());
  for (auto& g : gens) {
    g /= g0;
    g.canonicalize();
  }
  Integer den = lcm_denoms(gens);
  auto gi = scale_to_int(gens, den);
  Integer top = n_max * den - 1;
  long n = to_long(top);
  if (n > kSieveLimit)
    throw error(errc::unsupported, "n_max too large for dense enumeration");
  auto reach = reach_sieve(gi, n);
  std::vector<long> prefix(reach.size(), 0);
  for (long vv = 1; vv <= n; ++vv)
    prefix[vv] = prefix[vv - 1] + (reach[vv] ? 1 : 0);
  long d = to_long(den);
  std::vector<DensityPoint> out;
  out.reserve(static_cast<size_t>(n_max));
  for (long k = 1; k <= n_max; ++k) {
    DensityPoint p;
    p.n = k;
    p.phi = Integer(prefix[k * d - 1]);
    Rational r = Rational(p.phi) / Rational(Integer(k) * Integer(k));
    r.canonicalize();
    p.ratio = r;
    out.push_back(std::move(p));
  }
  return out;
}

std::string density_csv(const std::vector<DensityPoint>& pts, int digits) {
  std::string out = "n,phi,ratio,ratio_decimal\n";
  for (const auto& p : pts) {
    out += std::to_string(p.n);
    out += ',';
    out += p.phi.get_str();
    out += ',';
    out += rat_str(p.ratio);
    out += ',';
    out += decimal_str(p.ratio, digits);
    out += '\n';
  }
  return out;
}

std::string decimal_str(const Rational& r, int digits) {
  if (digits < 0) throw error(errc::out_of_range, "negative digit count");
  Rational a = r;
  a.canonicalize();
  bool neg = a < 0;
  if (neg) a = -a;
  Integer ip = a.get_num() / a.get_den();
  std::string out = (neg ? "-" : "") + ip.get_str();
  if (digits == 0) return out;
  out += '.';
  Integer num = a.get_num() - ip * a.get_den();
  const Integer& d = a.get_den();
  for (int i = 0; i < digits; ++i) {
    num *= 10;
    Integer q = num / d;
    out += q.get_str();
    num -= q * d;
  }
  return out;
}

}  // namespace valkey
