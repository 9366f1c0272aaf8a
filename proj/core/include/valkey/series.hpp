#ifndef VALKEY_SERIES_HPP
#define VALKEY_SERIES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "valkey/bipoly.hpp"
#include "valkey/value.hpp"

namespace valkey {

constexpr long kDefaultSeriesCap = 1 << 14;

/// Lazy power series s(t) = sum_{j>=1} a_j t^j with cached, deterministic
/// coefficients. Used as the parametrization y = s(x) of a curve branch.
class SeriesOracle {
 public:
  using CoefFn = std::function<Rational(long)>;  // j >= 1 -> a_j

  explicit SeriesOracle(CoefFn fn, long hard_cap = kDefaultSeriesCap);

  /// t*sqrt(1+t) = t + t^2/2 - t^3/8 + ...: a_{j+1} = binomial(1/2, j).
  static SeriesOracle t_sqrt_1_plus_t(long hard_cap = kDefaultSeriesCap);

  Rational coeff(long j) const;  // cached; j >= 1
  long cap() const { return cap_; }
  void set_cap(long cap);
  /// Largest j <= bound with a_j != 0 seen so far (0 if none).
  long max_nonzero_seen() const;

 private:
  CoefFn fn_;
  long cap_;
  mutable std::vector<Rational> cache_;  // cache_[j-1] = a_j
};

/// ord_t f(t, s(t)), or nullopt for CAP_EXCEEDED (f vanishes on the branch to
/// the oracle's cap; with an algebraic parametrization this flags membership
/// in the kernel ideal). Truncation starts near 2 * deg(f) and doubles until
/// a nonzero coefficient certifies.
/// Throws ZERO_INPUT on f = 0.
std::optional<long> series_value(const BiPoly& f, const SeriesOracle& s);

/// (ord, leading coefficient) of f(t, s(t)); nullopt under the same cap rule
/// as series_value.
std::optional<std::pair<long, Rational>> series_lead(const BiPoly& f,
                                                     const SeriesOracle& s);

/// Does f(t, s(t)) vanish mod t^depth?
bool vanishes_to_depth(const BiPoly& f, const SeriesOracle& s, long depth);

/// Rank-2 composite valuation along the branch y = s(x) of the irreducible
/// curve: the value of f = (branch factor)^n * h with h not vanishing on the
/// branch is (n, ord_t h(t, s(t))). For polynomial input n equals the maximal
/// power of the curve dividing f (exact trial division), and the branch order
/// of h is recovered from the g-free quotient plus n times the branch order
/// of the curve's y-derivative (the conjugate cofactor, char 0).
struct CompositeValuation {
  BiPoly curve;          // irreducible curve whose branch s parametrizes
  SeriesOracle oracle;   // parametrization of the branch

  /// Checks that the curve vanishes on the branch to a sanity depth.
  CompositeValuation(BiPoly g, SeriesOracle s);
};

/// Throws ZERO_INPUT on f = 0 and CAP_EXCEEDED if the curve-free part still
/// vanishes to the cap (inconsistent curve/oracle data).
Value composite_value(const BiPoly& f, const CompositeValuation& cv);

}  // namespace valkey

#endif
