#ifndef VALKEY_BIRAT_HPP
#define VALKEY_BIRAT_HPP

#include <vector>

#include "valkey/genseq.hpp"

namespace valkey {

/// Monomial substitution x = x1^nbar1 * y1^a, y = x1^w * y1^b with
/// nbar1*b - w*a = eps = +-1 (unimodular up to sign).
struct TransformData {
  long nbar1 = 1;
  long w = 1;
  long a = 0;
  long b = 1;
  int eps = 1;
};

/// Solves nbar1*b - w*a = eps for coprime nbar1, w with the canonical pick
/// 0 <= a < nbar1 (and b >= 0). Throws INADMISSIBLE_DATA when no such
/// nonnegative solution exists (nbar1 = 1 with eps = -1).
TransformData make_transform(long nbar1, long w, int eps = 1);

/// Applies the substitution to f; the result lives in the new coordinates
/// (x1 read as x, y1 read as y).
BiPoly substitute(const TransformData& t, const BiPoly& f);

struct QuadraticTransform {
  TransformData data;
  /// Key sequence over the blown-up center: parameters x_hat = x1 (the
  /// exceptional equation) and y_hat = P_2 / x1^(w*n_1), with values
  /// beta_hat_0 = beta_0/nbar1 and beta_hat_i = beta_{i+1} - w*n_1..n_i *
  /// beta_hat_0, expressed in the original value units.
  GenSeq transformed;
};

/// One quadratic transform along the valuation. Requires a rank-1 sequence
/// with at least two constructed keys and scalar residue steps.
QuadraticTransform quadratic_transform(const GenSeq& seq);

/// Iterates quadratic_transform `steps` times; element j holds stage j+1.
std::vector<QuadraticTransform> transform_chain(const GenSeq& seq, int steps);

struct DeltaShift {
  long delta0 = 0;
  long delta1 = 0;  // 0 <= delta1 < nbar1
  long z = 0;
};

/// For lambda >= nbar1*d1*w produces delta0, delta1, z with
/// x^(delta0 + i*w) * y^(delta1 + (d1-1-i)*nbar1) = x1^lambda * y1^(z - i*eps)
/// for 0 <= i <= d1 - 1; the identity is checked exactly before returning.
DeltaShift delta_shift(long lambda, long d1, long nbar1, long w, long a,
                       long b, int eps);

/// Monic minimal polynomial of the inverse of the level generator: the
/// reversed tail divided by the constant term. Entry t is the coefficient of
/// u^t. Throws ZERO_DIVISOR when the constant term is not invertible.
std::vector<TowerElem> reciprocal_minpoly_tail(const Tower& t, int level);

}  // namespace valkey

#endif
