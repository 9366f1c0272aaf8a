#ifndef VALKEY_VALUE_HPP
#define VALKEY_VALUE_HPP

#include <optional>
#include <string>
#include <vector>

#include "valkey/rational.hpp"

namespace valkey {

/// Value group element modes. RANK1 is a subgroup of Q. LEX is (Q^2)_lex.
/// TAU embeds aZ + bZ with rationally independent generators as a + b*sqrt(2),
/// ordered by the real embedding; all sign decisions are exact.
enum class Mode { RANK1, LEX, TAU };

std::string mode_str(Mode m);
Mode mode_parse(const std::string& s);

enum class Ord { LT, EQ, GT };

struct Value {
  Rational a;
  Rational b;
  Mode mode = Mode::RANK1;

  Value() = default;
  Value(Rational a_, Mode m) : a(std::move(a_)), b(0), mode(m) {}
  Value(Rational a_, Rational b_, Mode m)
      : a(std::move(a_)), b(std::move(b_)), mode(m) {}

  static Value rank1(Rational a_) { return Value(std::move(a_), Mode::RANK1); }

  bool is_zero() const { return a == 0 && b == 0; }

  Value operator+(const Value& o) const;
  Value operator-(const Value& o) const;
  Value operator-() const;
  /// Integer scaling.
  Value scaled(const Integer& n) const;
  Value scaled(long n) const { return scaled(Integer(n)); }

  bool operator==(const Value& o) const;
  bool operator!=(const Value& o) const { return !(*this == o); }
  bool operator<(const Value& o) const;
  bool operator<=(const Value& o) const;
  bool operator>(const Value& o) const { return o < *this; }
  bool operator>=(const Value& o) const { return o <= *this; }

  std::string str() const;
};

/// Total-order comparison. Throws valkey::error on mode mismatch.
Ord compare(const Value& u, const Value& v);

/// Exact sign of a + b*sqrt(2): -1, 0, +1.
int tau_sign(const Rational& a, const Rational& b);

/// Canonical Hermite-reduced basis for the subgroup generated by a finite
/// set of Values. rank is 0, 1 or 2; basis holds `rank` rows.
struct ValueLattice {
  Mode mode = Mode::RANK1;
  int rank = 0;
  // rank 1: basis[0] is the single generator (sign-normalized).
  // rank 2: basis[0] = (p, q), basis[1] = (0, r) with p > 0, r > 0, 0 <= q < r.
  std::vector<std::pair<Rational, Rational>> basis;

  bool operator==(const ValueLattice& o) const;

  /// Is v an integer combination of the basis?
  bool contains(const Value& v) const;
  /// Is every sub basis vector contained in *this?
  bool contains(const ValueLattice& sub) const;
};

/// Canonical lattice of the integer span of the generators.
/// Throws on empty input or mixed modes.
ValueLattice lattice_from(const std::vector<Value>& generators);

/// [sup : sub] as a positive integer, or nullopt for an infinite index
/// (sup of strictly larger rank). Throws if sub is not contained in sup.
std::optional<Integer> group_index(const ValueLattice& sub,
                                   const ValueLattice& sup);

/// Lemma-2 coefficients: gamma = a0*beta0 + sum ai*betai with a0 in Z and
/// 0 <= ai < nbar_i for i >= 1.
struct Lemma2Rep {
  Integer a0;
  std::vector<Integer> rest;  // a_1 .. a_k
};

/// nullopt entry = infinite index (rank jump, only sensible at the top).
using NbarList = std::vector<std::optional<Integer>>;

/// Unique Euclidean-division representation, or nullopt when gamma is not in
/// G(beta_0,...,beta_k) (or, for an infinite terminal index, when the forced
/// terminal coefficient is negative). Throws if the supplied nbars disagree
/// with the computed group indices.
std::optional<Lemma2Rep> lemma2_representation(const Value& gamma,
                                               const std::vector<Value>& betas,
                                               const NbarList& nbars);

struct MembershipResult {
  bool member = false;
  std::optional<Lemma2Rep> witness;  // nonnegative coefficients when member
  std::string reason;                // set when !member
};

/// Is gamma in the semigroup S(beta_0,...,beta_k)? Above the Lemma-2
/// threshold nbar_k*beta_k this is decided by the representation; below it a
/// bounded enumeration gives the exact answer.
MembershipResult lemma2_membership(const Value& gamma,
                                   const std::vector<Value>& betas,
                                   const NbarList& nbars);

constexpr long kInfiniteIndex = -1;  // sentinel in reports / JSON

struct SemigroupDataReport {
  bool ok = true;
  std::vector<std::optional<Integer>> nbars;  // nullopt = infinite, index i-1
  int first_violation = -1;                   // beta index i of the violation
  std::string message;
};

/// Admissibility checks for prospective semigroup generator data.
/// Without dees: beta_{i+1} > nbar_i * beta_i for interior i (Theorem-1.2
/// style). With dees: beta_{i+1} > nbar_i * d_i * beta_i and the terminal
/// alternatives (nbar = infinity with d = 1, or nbar finite with d =
/// infinity); non_complete additionally admits both finite at the last index.
/// dees entries use nullopt for an infinite residue degree.
SemigroupDataReport validate_semigroup_data(
    const std::vector<Value>& betas,
    const std::optional<std::vector<std::optional<Integer>>>& dees =
        std::nullopt,
    bool non_complete = false);

}  // namespace valkey

#endif
