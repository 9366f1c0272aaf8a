#include "valkey/subring.hpp"

#include <algorithm>

#include "valkey/error.hpp"

namespace valkey {

namespace {

constexpr long kSieveLimit = 1L << 26;

long to_long(const Integer& n) {
  if (!n.fits_slong_p())
    throw error(errc::cap_exceeded, "sieve bound does not fit in a machine word");
  return n.get_si();
}

Integer lcm_denoms(const std::vector<Value>& vals, const Integer& seed) {
  Integer l = seed;
  for (const auto& v : vals)
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.a.get_den().get_mpz_t());
  return l;
}

long scaled_int(const Rational& q, const Integer& den) {
  Rational s = q * Rational(den);
  s.canonicalize();
  if (s.get_den() != 1)
    throw error(errc::internal, "scaling did not clear the denominator");
  return to_long(s.get_num());
}

void require_rank1(const SemigroupDescription& desc) {
  if (desc.mode != Mode::RANK1)
    throw error(errc::unsupported, "rank-1 semigroups only");
  if (desc.generators.empty())
    throw error(errc::empty_input, "no generators");
}

// unbounded coin sieve; adding one coin to an existing reach table
void add_coin(std::vector<unsigned char>& reach, long coin) {
  for (size_t v = static_cast<size_t>(coin); v < reach.size(); ++v)
    reach[v] = static_cast<unsigned char>(reach[v] | reach[v - coin]);
}

}  // namespace

bool odd_degree_keys(const GenSeq& seq) {
  for (int i = 0; i <= seq.top_index(); ++i)
    for (const auto& [e, c] : seq.key_poly(i).terms())
      if ((e.first + e.second) % 2 == 0) return false;
  return true;
}

A2Result a2_semigroup(const SemigroupDescription& desc, const Value& bound) {
  require_rank1(desc);
  if (bound.mode != Mode::RANK1 || bound.a <= 0)
    throw error(errc::out_of_range, "bound must be a positive rank-1 value");

  Integer den = lcm_denoms(desc.generators, bound.a.get_den());
  long sbound = scaled_int(bound.a, den);
  if (sbound > kSieveLimit)
    throw error(errc::cap_exceeded, "sieve bound too large");

  std::vector<long> coins;
  for (const auto& g : desc.generators) {
    long c = scaled_int(g.a, den);
    if (c <= 0) throw error(errc::inadmissible_data, "nonpositive generator");
    if (c <= sbound) coins.push_back(c);
  }

  // reach[p][v]: v is a sum of the coins with coefficient sum of parity p
  std::vector<unsigned char> even(static_cast<size_t>(sbound) + 1, 0);
  std::vector<unsigned char> odd(even.size(), 0);
  even[0] = 1;
  for (long c : coins)
    for (size_t v = static_cast<size_t>(c); v < even.size(); ++v) {
      unsigned char e = static_cast<unsigned char>(even[v] | odd[v - c]);
      unsigned char o = static_cast<unsigned char>(odd[v] | even[v - c]);
      even[v] = e;
      odd[v] = o;
    }

  A2Result out;
  std::vector<unsigned char> gen_reach(even.size(), 0);
  gen_reach[0] = 1;
  Rational d(den);
  for (long v = 1; v <= sbound; ++v) {
    if (!even[static_cast<size_t>(v)]) continue;
    Rational q = Rational(v) / d;
    q.canonicalize();
    out.elements.push_back(Value::rank1(q));
    if (!gen_reach[static_cast<size_t>(v)]) {
      out.generators.push_back(out.elements.back());
      add_coin(gen_reach, v);
    }
  }
  return out;
}

A2Result a2_semigroup(const GenSeq& seq, const Value& bound) {
  if (seq.mode() != Mode::RANK1)
    throw error(errc::unsupported, "rank-1 sequences only");
  if (!odd_degree_keys(seq))
    throw error(errc::inadmissible_data,
                "key polynomials must have all monomials of odd degree");
  std::vector<Value> betas;
  for (int i = 0; i < seq.known_betas(); ++i) betas.push_back(seq.beta(i));
  return a2_semigroup(describe_generators(std::move(betas)), bound);
}

GapWitness gap_witness(const SemigroupDescription& desc, int n) {
  require_rank1(desc);
  if (n < 1) throw error(errc::out_of_range, "need n >= 1");
  if (static_cast<size_t>(n) >= desc.generators.size())
    throw error(errc::depth_exceeded, "not enough generators for this index");
  const Value& b0 = desc.generators[0];
  const Value& b1 = desc.generators[1];
  const Value& bn = desc.generators[static_cast<size_t>(n)];

  A2Result r = a2_semigroup(desc, b1 + bn);
  auto it = std::find(r.generators.begin(), r.generators.end(), b0 + bn);
  if (it == r.generators.end())
    throw error(errc::internal, "beta_0 + beta_n is not a minimal generator");

  GapWitness w;
  w.n = n;
  w.l = it - r.generators.begin();
  w.gamma_l = *it;
  if (static_cast<size_t>(w.l) + 1 >= r.generators.size())
    throw error(errc::internal, "no minimal generator above beta_0 + beta_n");
  w.gamma_next = r.generators[static_cast<size_t>(w.l) + 1];
  if (w.gamma_next != b1 + bn)
    throw error(errc::internal,
                "successor generator is not beta_1 + beta_n");
  w.step = w.gamma_next - w.gamma_l;
  w.small_step = (w.step.scaled(3) == r.generators[0]);

  std::vector<Value> head(r.generators.begin(), it + 1);
  w.in_group = lattice_from(head).contains(w.gamma_next);
  return w;
}

std::vector<ModuleWitness> non_fg_module_witness(const SemigroupDescription& desc,
                                                 int bound_n) {
  require_rank1(desc);
  if (bound_n < 0) throw error(errc::out_of_range, "negative index bound");
  if (desc.generators.size() < static_cast<size_t>(bound_n) + 2)
    throw error(errc::depth_exceeded, "need a value past every tested index");

  std::vector<ModuleWitness> out;
  for (int n = 0; n <= bound_n; ++n) {
    const Value& target = desc.generators[static_cast<size_t>(n) + 1];
    std::vector<Value> involved(desc.generators.begin(),
                                desc.generators.begin() + n + 2);
    Integer den = lcm_denoms(involved, Integer(1));
    long starget = scaled_int(target.a, den);
    if (starget > kSieveLimit)
      throw error(errc::cap_exceeded, "sieve bound too large");

    // sums of pair values beta_i + beta_j that fit under the target
    std::vector<unsigned char> reach(static_cast<size_t>(starget) + 1, 0);
    reach[0] = 1;
    for (size_t i = 0; i < desc.generators.size(); ++i)
      for (size_t j = i; j < desc.generators.size(); ++j) {
        Value pair = desc.generators[i] + desc.generators[j];
        if (pair > target) break;
        add_coin(reach, scaled_int(pair.a, den));
      }

    // module membership: target = s or target = beta_k + s with k <= n
    bool member = reach[static_cast<size_t>(starget)] != 0;
    for (int k = 0; !member && k <= n; ++k) {
      long off = scaled_int(desc.generators[static_cast<size_t>(k)].a, den);
      if (off <= starget) member = reach[static_cast<size_t>(starget - off)] != 0;
    }
    if (member)
      throw error(errc::internal, "module witness refuted by the sieve");
    out.push_back({n, target});
  }
  return out;
}

}  // namespace valkey
