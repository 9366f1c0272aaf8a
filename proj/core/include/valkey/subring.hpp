#ifndef VALKEY_SUBRING_HPP
#define VALKEY_SUBRING_HPP

#include <vector>

#include "valkey/genseq.hpp"
#include "valkey/valuation.hpp"

namespace valkey {

/// True when every monomial of every constructed key polynomial has odd
/// total degree. Under this condition a polynomial lies in k[x^2, xy, y^2]
/// exactly when each term of its canonical expansion has an even exponent
/// sum, so the subring value semigroup is the even-coefficient-sum part of
/// the full one.
bool odd_degree_keys(const GenSeq& seq);

struct A2Result {
  /// All values a_0*g_0 + ... + a_k*g_k with even coefficient sum, in
  /// (0, bound], ascending.
  std::vector<Value> elements;
  /// Minimal generators of that sub-semigroup below the bound (greedy sieve:
  /// an element is kept when the previously kept ones miss it).
  std::vector<Value> generators;
};

/// Even-parity value sub-semigroup of the description's generators.
/// Rank-1 only.
A2Result a2_semigroup(const SemigroupDescription& desc, const Value& bound);

/// Convenience: checks the odd-degree-keys precondition on the sequence,
/// then runs on all of its known values.
A2Result a2_semigroup(const GenSeq& seq, const Value& bound);

struct GapWitness {
  int n = 0;
  long l = 0;          // index of beta_0 + beta_n among the minimal generators
  Value gamma_l;       // = beta_0 + beta_n
  Value gamma_next;    // = beta_1 + beta_n, the next minimal generator
  Value step;          // gamma_next - gamma_l
  bool small_step = false;  // step == gamma_0 / 3
  bool in_group = false;    // gamma_next in G(gamma_0, ..., gamma_l)
};

/// Adjacent minimal generators of the even-parity sub-semigroup whose gap is
/// a fraction of the smallest one: locates beta_0 + beta_n in the generator
/// list and certifies the two properties above by direct computation.
GapWitness gap_witness(const SemigroupDescription& desc, int n);

struct ModuleWitness {
  int n = 0;
  Value witness;  // beta_{n+1}, not in the module of stage n
};

/// For each n <= bound_n, certifies that the value beta_{n+1} is not of the
/// form beta_k + s (k <= n) or s alone, where s runs over sums of pair
/// values beta_i + beta_j. The search is finite: all values below the
/// witness live on a fixed 1/denominator grid. Shows the full chain is not a
/// finitely generated module over the even-parity part.
std::vector<ModuleWitness> non_fg_module_witness(const SemigroupDescription& desc,
                                                 int bound_n);

}  // namespace valkey

#endif
