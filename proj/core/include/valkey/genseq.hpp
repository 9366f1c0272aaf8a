#ifndef VALKEY_GENSEQ_HPP
#define VALKEY_GENSEQ_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "valkey/bipoly.hpp"
#include "valkey/series.hpp"
#include "valkey/tower.hpp"
#include "valkey/value.hpp"

namespace valkey {

enum class TermState {
  OPEN,                      // more data available / not terminated
  TERMINATED_INDEPENDENT,    // terminal value leaves the rational span
  TERMINATED_TRANSCENDENTAL, // terminal residue degree infinite
  STABILIZED,                // n_i = 1 for a long run (diagnosis, not proof)
  KERNEL_HIT,                // oracle reported a key polynomial of infinite value
};

std::string term_state_str(TermState s);
TermState term_state_parse(const std::string& s);

/// One term of a polynomial-in-the-keys expression: coef * prod P_l^{exps[l]}.
struct PTerm {
  Rational coef;
  std::vector<long> exps;
};

/// Canonical expansion of f: a leading sum of common minimal value rho with
/// in-range exponents, a strictly-higher-value tail, and terms parked beyond
/// the order bound.
struct Expansion {
  Value rho;
  std::vector<PTerm> leading;
  std::vector<PTerm> tail;
  std::vector<PTerm> remainder;  // order >= order_bound, untouched
  long order_bound = 0;
};

/// Result of one rewrite of the lowest reducible index of a monomial.
struct RewriteResult {
  int index = 0;                  // the i with m_i >= n_i that was rewritten
  std::vector<PTerm> same_value;  // all of the original monomial's value
  PTerm carry;                    // higher-value term with P_{i+1} bumped
};

/// Black-box valuation used by analysis mode. Residues of equal-value pairs
/// must land in the ground field.
class AnalysisOracle {
 public:
  virtual ~AnalysisOracle() = default;
  virtual Mode mode() const = 0;
  /// Value of f, or nullopt when f has no finite value to the oracle's cap.
  virtual std::optional<Value> value(const BiPoly& f) = 0;
  /// The class [f/g] in the ground field; requires value(f) == value(g).
  virtual Rational residue(const BiPoly& f, const BiPoly& g) = 0;
  /// Height-one-prime generator for composite oracles, when known.
  virtual std::optional<BiPoly> kernel() const { return std::nullopt; }
};

/// Restriction of the t-adic valuation under y = s(t).
class SeriesValOracle : public AnalysisOracle {
 public:
  explicit SeriesValOracle(SeriesOracle s) : s_(std::move(s)) {}
  Mode mode() const override { return Mode::RANK1; }
  std::optional<Value> value(const BiPoly& f) override;
  Rational residue(const BiPoly& f, const BiPoly& g) override;

 private:
  SeriesOracle s_;
};

/// Rank-2 composite valuation oracle.
class CompositeValOracle : public AnalysisOracle {
 public:
  explicit CompositeValOracle(CompositeValuation cv) : cv_(std::move(cv)) {}
  Mode mode() const override { return Mode::LEX; }
  std::optional<Value> value(const BiPoly& f) override;
  Rational residue(const BiPoly& f, const BiPoly& g) override;
  std::optional<BiPoly> kernel() const override { return cv_.curve; }

 private:
  CompositeValuation cv_;
};

/// Key-polynomial sequence: P_0 = x, P_1 = y, P_2, ... with per-index value
/// data, built either from admissible (beta_i, alpha_i) data (synthesize) or
/// discovered from an oracle valuation (analyze). Frozen after construction;
/// operations that need more indices work on deepened copies.
class GenSeq {
 public:
  /// Builds P_2..P_{depth+1} from the value chain and residue tower
  /// (tower level i carries the minimal polynomial of alpha_i). Remaining
  /// betas past depth+1 stay available for later deepening.
  static GenSeq synthesize(std::vector<Value> betas, Tower tower, int depth);

  /// Discovers the sequence from an oracle, up to `depth` new polynomials or
  /// termination. `stabilize_threshold` consecutive n_i = 1 steps diagnose
  /// STABILIZED.
  static GenSeq analyze(AnalysisOracle& oracle, int depth,
                        int stabilize_threshold = 25);

  // -- frozen queries ------------------------------------------------------

  /// Largest i with P_i constructed (>= 1).
  int top_index() const { return static_cast<int>(polys_.size()) - 1; }
  const BiPoly& key_poly(int i) const;
  const Value& beta(int i) const;
  /// nbar_i; nullopt = infinite. i >= 1, defined once step i ran (or for the
  /// detected terminal index).
  std::optional<Integer> nbar(int i) const;
  std::optional<Integer> dee(int i) const;
  /// n_i = nbar_i * d_i; nullopt when either factor is infinite.
  std::optional<Integer> little_n(int i) const;
  /// Exponents of U_i over P_0..P_{i-1}.
  const std::vector<long>& U(int i) const;
  const Tower& tower() const { return tower_; }
  /// alpha_i as a tower element (the generator of level i).
  TowerElem alpha(int i) const;
  TermState state() const { return state_; }
  /// Steps actually constructed (number of P_i with i >= 2).
  int steps() const { return static_cast<int>(steps_done_); }
  /// How many betas are known (analysis: discovered; synthesis: supplied).
  int known_betas() const { return static_cast<int>(betas_.size()); }
  Mode mode() const { return betas_.front().mode; }
  const BaseField& field() const { return field_; }

  /// Case-3 attachment: the height-one-prime generator and its value, when
  /// analysis stabilized against a composite oracle.
  const std::optional<BiPoly>& case3_curve() const { return case3_curve_; }
  const std::optional<Value>& case3_value() const { return case3_value_; }

  /// Value of a monomial exponent vector (Laurent allowed).
  Value mono_value(const std::vector<long>& exps) const;
  /// ord of the monomial (sum of exps[l] * ord P_l); exps nonnegative.
  long mono_ord(const std::vector<long>& exps) const;
  /// Multiplicative residue of a value-0 Laurent monomial in the P_i.
  TowerElem res_map(std::vector<long> laurent) const;

  // -- operations ----------------------------------------------------------

  /// C(level): a sum of in-range same-value monomials over P_0..P_level whose
  /// residue against the canonical reference monomial of target_value is
  /// lambda. Throws NOT_REPRESENTABLE.
  std::vector<PTerm> realize_residue(const TowerElem& lambda,
                                     const Value& target, int level) const;

  /// One substitution of the key-polynomial relation at the lowest index i
  /// with mono[i] >= n_i.
  RewriteResult rewrite_step(const std::vector<long>& mono) const;

  /// Canonical expansion with remainder order bound n. Auto-deepens on a copy
  /// when synthesis data allows; otherwise DEPTH_EXCEEDED.
  Expansion expand(const BiPoly& f, long order_bound) const;

  /// nu(f). Fast path through the monic-in-y monomial basis when available;
  /// in a terminated-independent sequence the terminal key polynomial is
  /// factored out first.
  Value value_of(const BiPoly& f) const;

  /// [f/g] for value_of(f) == value_of(g); VALUE_MISMATCH otherwise.
  TowerElem residue_of(const BiPoly& f, const BiPoly& g) const;

  /// Copy with `extra` more construction steps (synthesis data permitting).
  GenSeq deepened(int extra) const;

 private:
  GenSeq(BaseField f, Tower t) : field_(f), tower_(std::move(t)) {}

  BaseField field_;
  Tower tower_;
  std::vector<Value> betas_;           // beta_0, beta_1, ... (known values)
  std::vector<BiPoly> polys_;          // P_0, P_1, ..., P_{top}
  // per step i (1-based; entry i-1), populated when step i has run:
  std::vector<std::optional<Integer>> nbars_;
  std::vector<std::optional<Integer>> dees_;
  std::vector<std::vector<long>> us_;
  // corrections of step i: P_{i+1} = P_i^{n_i} + sum coef * M * P_i^{t*nbar_i}
  struct Correction {
    Rational coef;
    std::vector<long> exps;  // over P_0..P_{i-1}
    long t;
  };
  std::vector<std::vector<Correction>> corrections_;
  TermState state_ = TermState::OPEN;
  size_t steps_done_ = 0;
  bool synthesis_ = false;
  std::optional<BiPoly> case3_curve_;
  std::optional<Value> case3_value_;

  bool can_deepen() const;
  void build_step();  // constructs P_{steps_done_+2} from data
  NbarList nbar_list(int upto) const;  // nbars for betas_[0..upto]
  std::vector<long> lemma2_monomial(const Value& gamma, int level) const;
  std::vector<PTerm> realize_impl(const TowerElem& lambda,
                                  const std::vector<long>& ref,
                                  int level) const;
  BiPoly term_poly(const PTerm& t) const;
  std::optional<Value> try_mono_value(const std::vector<long>& exps) const;
  Expansion expand_impl(const BiPoly& f, long order_bound) const;
  Expansion expand_auto(const BiPoly& f) const;
  /// nullopt when the constructed basis cannot carry deg_y f.
  std::optional<Value> value_fast(const BiPoly& f) const;
  friend class GenSeqValOracle;
};

/// Analysis oracle backed by a synthesized sequence (roundtrip testing and
/// monomial-valuation extension per the y-basis value formula).
class GenSeqValOracle : public AnalysisOracle {
 public:
  explicit GenSeqValOracle(GenSeq seq) : seq_(std::move(seq)) {}
  Mode mode() const override { return seq_.mode(); }
  std::optional<Value> value(const BiPoly& f) override;
  Rational residue(const BiPoly& f, const BiPoly& g) override;

 private:
  GenSeq seq_;
};

}  // namespace valkey

#endif
