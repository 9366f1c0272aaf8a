#ifndef VALKEY_BIPOLY_HPP
#define VALKEY_BIPOLY_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "valkey/rational.hpp"
#include "valkey/tower.hpp"

namespace valkey {

/// Graded-lex order on exponent pairs: total degree first, then x-degree.
struct GrlexLess {
  bool operator()(const std::pair<long, long>& a,
                  const std::pair<long, long>& b) const {
    long da = a.first + a.second, db = b.first + b.second;
    if (da != db) return da < db;
    return a.first < b.first;
  }
};

/// Sparse bivariate polynomial over the base field (Q or F_p). No zero
/// coefficients are stored; term iteration order is graded-lex.
class BiPoly {
 public:
  using Exp = std::pair<long, long>;  // (x exponent, y exponent)
  using TermMap = std::map<Exp, Rational, GrlexLess>;

  explicit BiPoly(BaseField field = BaseField::rationals()) : field_(field) {}

  const BaseField& field() const { return field_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  static BiPoly zero(BaseField f = BaseField::rationals()) {
    return BiPoly(f);
  }
  static BiPoly constant(const Rational& c,
                         BaseField f = BaseField::rationals());
  static BiPoly monomial(long ex, long ey, const Rational& c,
                         BaseField f = BaseField::rationals());
  static BiPoly x(BaseField f = BaseField::rationals()) {
    return monomial(1, 0, 1, f);
  }
  static BiPoly y(BaseField f = BaseField::rationals()) {
    return monomial(0, 1, 1, f);
  }

  Rational coeff(long ex, long ey) const;
  void set_coeff(long ex, long ey, const Rational& c);

  BiPoly operator+(const BiPoly& o) const;
  BiPoly operator-(const BiPoly& o) const;
  BiPoly operator-() const;
  BiPoly operator*(const BiPoly& o) const;
  BiPoly scaled(const Rational& c) const;
  BiPoly pow(long e) const;

  bool operator==(const BiPoly& o) const;
  bool operator!=(const BiPoly& o) const { return !(*this == o); }

  /// Minimum total degree of a term. Throws ZERO_INPUT on 0.
  long ord_total() const;
  /// Maximum total degree.
  long deg_total() const;
  long deg_x() const;
  long deg_y() const;
  /// Is the coefficient of y^deg_y a nonzero constant (no x)?
  bool is_monic_in_y() const;
  /// Coefficient of y^j as a polynomial in x.
  BiPoly coeff_of_y(long j) const;
  /// Formal partial derivative with respect to y.
  BiPoly d_dy() const;

  /// Division in y by a divisor monic in y: *this = q*div + r with
  /// deg_y r < deg_y div. Requires div.is_monic_in_y().
  std::pair<BiPoly, BiPoly> divmod_y(const BiPoly& div) const;

  /// Exact quotient, or nullopt when g does not divide *this.
  std::optional<BiPoly> exact_divide(const BiPoly& g) const;

  /// Canonical text: descending graded-lex, e.g. "y^3 - 5/2*x^2*y + 1".
  std::string str() const;

 private:
  BaseField field_;
  TermMap terms_;

  Rational norm(const Rational& c) const;
  void check_field(const BiPoly& o) const;
};

/// Parses the sum-of-signed-terms format: terms are '*'-joined factors, a
/// factor is a rational literal "p/q" or x/y with an optional "^k".
/// Throws valkey::error(PARSE_ERROR).
BiPoly parse_bipoly(const std::string& text,
                    BaseField field = BaseField::rationals());

inline long ord_total(const BiPoly& f) { return f.ord_total(); }
inline long deg_y(const BiPoly& f) { return f.deg_y(); }
inline bool is_monic_in_y(const BiPoly& f) { return f.is_monic_in_y(); }

}  // namespace valkey

#endif
