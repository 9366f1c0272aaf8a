#ifndef VALKEY_TOWER_HPP
#define VALKEY_TOWER_HPP

#include <string>
#include <vector>

#include "valkey/rational.hpp"

namespace valkey {

struct BaseField {
  enum class Kind { Q, Fp };
  Kind kind = Kind::Q;
  long p = 0;  // prime modulus when kind == Fp

  static BaseField rationals() { return BaseField{Kind::Q, 0}; }
  /// Throws on composite or nonpositive p (deterministic test for p < 2^31).
  static BaseField prime_field(long p);

  bool operator==(const BaseField& o) const = default;
};

/// An element of the tower k(a_1,...,a_n). Level 0 is a base-field scalar;
/// level i >= 1 is a coefficient vector of length d_i in the basis
/// {1, a_i, ..., a_i^{d_i - 1}} with entries at level i-1. Canonical: the
/// coefficient vector always has exactly d_i entries, each fully reduced.
struct TowerElem {
  int level = 0;
  Rational scalar;                 // payload when level == 0
  std::vector<TowerElem> coeffs;   // payload when level >= 1

  bool operator==(const TowerElem& o) const = default;
};

/// Immutable tower of simple extensions. Levels are appended at build time;
/// all arithmetic goes through the tower (it owns the minimal polynomials).
/// Reducible "minimal polynomials" are detected lazily: inversion of a
/// nonzero noninvertible element raises ZERO_DIVISOR.
class Tower {
 public:
  explicit Tower(BaseField base) : base_(base) {}

  const BaseField& base() const { return base_; }
  int num_levels() const { return static_cast<int>(tails_.size()); }

  /// Appends a level with monic minimal polynomial
  /// u^d + tail[d-1] u^{d-1} + ... + tail[0], tail entries at the previous
  /// top level. Returns the new level index (1-based).
  int push_level(std::vector<TowerElem> tail);

  /// d_level. Throws OUT_OF_RANGE.
  long minpoly_degree(int level) const;
  const std::vector<TowerElem>& minpoly_tail(int level) const;
  /// Product of the d_i: dimension of the top level over the base.
  Integer dimension() const;

  TowerElem zero(int level = 0) const;
  TowerElem one(int level = 0) const;
  TowerElem from_base(const Rational& v) const;
  TowerElem from_int(long v) const { return from_base(Rational(v)); }
  /// alpha_level as a level-`level` element.
  TowerElem gen(int level) const;
  /// Embeds x at a (weakly) higher level.
  TowerElem lift(const TowerElem& x, int level) const;

  bool is_zero(const TowerElem& x) const;
  bool equal(const TowerElem& x, const TowerElem& y) const;

  TowerElem add(const TowerElem& x, const TowerElem& y) const;
  TowerElem sub(const TowerElem& x, const TowerElem& y) const;
  TowerElem neg(const TowerElem& x) const;
  TowerElem mul(const TowerElem& x, const TowerElem& y) const;
  /// Throws ZERO_INPUT on zero, ZERO_DIVISOR on nonzero noninvertible input.
  TowerElem inv(const TowerElem& x) const;
  TowerElem div(const TowerElem& x, const TowerElem& y) const;
  TowerElem pow(const TowerElem& x, const Integer& e) const;

  /// The unique coefficients of x at `level` in the basis {a_level^j},
  /// entries at level-1. Lifts x if it sits lower.
  std::vector<TowerElem> express_in_basis(const TowerElem& x, int level) const;

  /// Eager irreducibility check over F_p towers (gcd against u^{q^j} - u for
  /// j up to d/2, q the order of the level below). Throws INADMISSIBLE_DATA
  /// when the minimal polynomial at `level` is reducible, UNSUPPORTED for a
  /// rational base.
  void check_irreducible(int level) const;

  std::string str(const TowerElem& x) const;

 private:
  BaseField base_;
  std::vector<std::vector<TowerElem>> tails_;  // tails_[i] for level i+1

  Rational base_norm(const Rational& v) const;
  TowerElem make(int level, std::vector<TowerElem> coeffs) const;
};

inline TowerElem tower_add(const Tower& t, const TowerElem& x,
                           const TowerElem& y) {
  return t.add(x, y);
}
inline TowerElem tower_mul(const Tower& t, const TowerElem& x,
                           const TowerElem& y) {
  return t.mul(x, y);
}
inline TowerElem tower_neg(const Tower& t, const TowerElem& x) {
  return t.neg(x);
}
inline TowerElem tower_inv(const Tower& t, const TowerElem& x) {
  return t.inv(x);
}

}  // namespace valkey

#endif
