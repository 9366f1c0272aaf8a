#ifndef VALKEY_VALUATION_HPP
#define VALKEY_VALUATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "valkey/genseq.hpp"
#include "valkey/series.hpp"
#include "valkey/value.hpp"

namespace valkey {

/// Terminal classification of a semigroup description. Rank-2 valuations
/// split by the trace of the height-one prime: the maximal ideal (CASE1),
/// a key polynomial (CASE2), or some other irreducible curve whose value is
/// appended as an extra generator (CASE3).
enum class SemigroupCase { RANK1, CASE1, CASE2, CASE3 };

std::string semigroup_case_str(SemigroupCase c);

struct SemigroupDescription {
  Mode mode = Mode::RANK1;
  std::vector<Value> generators;              // strictly increasing
  std::vector<std::optional<Integer>> nbars;  // parallel; nullopt = infinite
  SemigroupCase case_tag = SemigroupCase::RANK1;
  int depth = 0;                              // construction depth backing it
  std::optional<Value> curve_value;           // CASE3 appended value
};

/// Description straight from a generator list: sorts, dedups, computes the
/// group-index chain. Throws EMPTY_INPUT and INADMISSIBLE_DATA on
/// nonpositive entries.
SemigroupDescription describe_generators(std::vector<Value> gens);

/// A valuation of k(x, y) centered at the origin, backed by a synthesized
/// sequence, a series parametrization, or a rank-2 composite pair. Analysis
/// results are cached per depth.
class Valuation {
 public:
  enum class Kind { SYNTHETIC, SERIES, COMPOSITE };

  static Valuation synthetic(GenSeq seq);
  static Valuation from_series(SeriesOracle s);
  static Valuation from_composite(CompositeValuation cv);

  Kind kind() const { return kind_; }
  Mode mode() const;
  /// Throws CAP_EXCEEDED when a series oracle cannot certify a finite value.
  Value value_of(const BiPoly& f) const;
  /// Key-polynomial sequence with at least `depth` construction steps unless
  /// it terminates earlier. Cached; deepening replaces the cache.
  const GenSeq& sequence(int depth) const;

 private:
  explicit Valuation(Kind k) : kind_(k) {}

  Kind kind_;
  mutable std::optional<GenSeq> seq_;
  mutable int seq_depth_ = 0;
  std::optional<SeriesOracle> series_;
  std::optional<CompositeValuation> comp_;
};

/// Minimal generators of the value semigroup to the given construction
/// depth: the value of x plus the values of the key polynomials whose group
/// index exceeds 1, and for CASE3 the curve value on top.
SemigroupDescription semigroup(const Valuation& v, int depth);

/// All semigroup elements in (0, bound), sorted. Rank-1 rational
/// descriptions only.
std::vector<Value> enumerate_semigroup(const SemigroupDescription& desc,
                                       const Value& bound);

struct SymmetryResult {
  bool symmetric = false;
  /// Frobenius element after normalizing the value group to Z (largest
  /// non-member; -1 when there are no gaps).
  Integer frobenius;
  /// The same element in the description's original units.
  Value frobenius_original;
  /// Multiplying original values by scale gives the normalized integers.
  Rational scale;
};

/// Decides s in S <=> m - s not in S exhaustively after normalizing the
/// group to Z. Rank-1 rational descriptions only.
SymmetryResult is_symmetric(const SemigroupDescription& desc);

struct DensityPoint {
  long n = 0;
  Integer phi;     // |S intersect (0, n)| after unit normalization
  Rational ratio;  // phi / n^2
};

/// Trajectory of phi(n)/n^2 for n = 1..n_max, with values scaled so the
/// smallest nonzero semigroup element is 1.
std::vector<DensityPoint> density(const SemigroupDescription& desc,
                                  long n_max);

/// Columns n, phi, ratio (exact), ratio_decimal (truncated to `digits`).
std::string density_csv(const std::vector<DensityPoint>& pts, int digits = 6);

/// Plain decimal text of r truncated toward zero to `digits` fractional
/// digits.
std::string decimal_str(const Rational& r, int digits);

}  // namespace valkey

#endif
