#include "valkey/genseq.hpp"

#include <algorithm>
#include <map>

#include "valkey/error.hpp"

namespace valkey {

std::string term_state_str(TermState s) {
  switch (s) {
    case TermState::OPEN: return "OPEN";
    case TermState::TERMINATED_INDEPENDENT: return "TERMINATED_INDEPENDENT";
    case TermState::TERMINATED_TRANSCENDENTAL:
      return "TERMINATED_TRANSCENDENTAL";
    case TermState::STABILIZED: return "STABILIZED";
    case TermState::KERNEL_HIT: return "KERNEL_HIT";
  }
  throw error(errc::internal, "bad state");
}

TermState term_state_parse(const std::string& s) {
  if (s == "OPEN") return TermState::OPEN;
  if (s == "TERMINATED_INDEPENDENT") return TermState::TERMINATED_INDEPENDENT;
  if (s == "TERMINATED_TRANSCENDENTAL")
    return TermState::TERMINATED_TRANSCENDENTAL;
  if (s == "STABILIZED") return TermState::STABILIZED;
  if (s == "KERNEL_HIT") return TermState::KERNEL_HIT;
  throw error(errc::parse_error, "unknown state " + s);
}

namespace {

void trim(std::vector<long>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

bool lex_less(const std::vector<long>& a, const std::vector<long>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void sort_terms(std::vector<PTerm>& ts) {
  std::sort(ts.begin(), ts.end(),
            [](const PTerm& a, const PTerm& b) { return lex_less(a.exps, b.exps); });
}

long to_long(const Integer& n) {
  if (!n.fits_slong_p()) throw error(errc::out_of_range, "exponent overflow");
  return n.get_si();
}

/// Unwraps a tower element that actually lies in the base field.
Rational scalar_of(const Tower& t, const TowerElem& x) {
  if (x.level == 0) return x.scalar;
  for (size_t j = 1; j < x.coeffs.size(); ++j)
    if (!t.is_zero(x.coeffs[j]))
      throw error(errc::not_representable, "residue is not in the base field");
  return scalar_of(t, x.coeffs[0]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

std::optional<Value> SeriesValOracle::value(const BiPoly& f) {
  auto v = series_value(f, s_);
  if (!v) return std::nullopt;
  return Value::rank1(Rational(*v));
}

Rational SeriesValOracle::residue(const BiPoly& f, const BiPoly& g) {
  auto lf = series_lead(f, s_), lg = series_lead(g, s_);
  if (!lf || !lg)
    throw error(errc::cap_exceeded, "residue of a kernel element");
  if (lf->first != lg->first)
    throw error(errc::value_mismatch, "residue of unequal values");
  return lf->second / lg->second;
}

std::optional<Value> CompositeValOracle::value(const BiPoly& f) {
  try {
    return composite_value(f, cv_);
  } catch (const error& e) {
    if (e.code() == errc::cap_exceeded) return std::nullopt;
    throw;
  }
}

Rational CompositeValOracle::residue(const BiPoly& f, const BiPoly& g) {
  // strip the common curve power; the class only depends on the cofactors
  BiPoly a = f, b = g;
  long na = 0, nb = 0;
  while (auto q = a.exact_divide(cv_.curve)) {
    a = std::move(*q);
    ++na;
  }
  while (auto q = b.exact_divide(cv_.curve)) {
    b = std::move(*q);
    ++nb;
  }
  if (na != nb) throw error(errc::value_mismatch, "residue of unequal values");
  auto la = series_lead(a, cv_.oracle), lb = series_lead(b, cv_.oracle);
  if (!la || !lb)
    throw error(errc::cap_exceeded, "cofactor vanishes on the branch");
  if (la->first != lb->first)
    throw error(errc::value_mismatch, "residue of unequal values");
  return la->second / lb->second;
}

std::optional<Value> GenSeqValOracle::value(const BiPoly& f) {
  return seq_.value_of(f);
}

Rational GenSeqValOracle::residue(const BiPoly& f, const BiPoly& g) {
  return scalar_of(seq_.tower(), seq_.residue_of(f, g));
}

// ---------------------------------------------------------------------------
// Accessors
// ---------------------------------------------------------------------------

const BiPoly& GenSeq::key_poly(int i) const {
  if (i < 0 || i > top_index())
    throw error(errc::out_of_range, "key polynomial " + std::to_string(i));
  return polys_[static_cast<size_t>(i)];
}

const Value& GenSeq::beta(int i) const {
  if (i < 0 || i >= static_cast<int>(betas_.size()))
    throw error(errc::out_of_range, "beta " + std::to_string(i));
  return betas_[static_cast<size_t>(i)];
}

std::optional<Integer> GenSeq::nbar(int i) const {
  if (i < 1 || i > static_cast<int>(nbars_.size()))
    throw error(errc::out_of_range, "nbar " + std::to_string(i));
  return nbars_[static_cast<size_t>(i - 1)];
}

std::optional<Integer> GenSeq::dee(int i) const {
  if (i < 1 || i > static_cast<int>(dees_.size()))
    throw error(errc::out_of_range, "d " + std::to_string(i));
  return dees_[static_cast<size_t>(i - 1)];
}

std::optional<Integer> GenSeq::little_n(int i) const {
  auto nb = nbar(i), d = dee(i);
  if (!nb || !d) return std::nullopt;
  return *nb * *d;
}

const std::vector<long>& GenSeq::U(int i) const {
  if (i < 1 || i > static_cast<int>(us_.size()))
    throw error(errc::out_of_range, "U " + std::to_string(i));
  return us_[static_cast<size_t>(i - 1)];
}

TowerElem GenSeq::alpha(int i) const {
  if (i < 1 || i > tower_.num_levels())
    throw error(errc::out_of_range, "alpha " + std::to_string(i));
  return tower_.gen(i);
}

// ---------------------------------------------------------------------------
// Monomial bookkeeping
// ---------------------------------------------------------------------------

std::optional<Value> GenSeq::try_mono_value(const std::vector<long>& exps) const {
  if (exps.size() > betas_.size()) return std::nullopt;
  Value acc(Rational(0), Rational(0), mode());
  for (size_t l = 0; l < exps.size(); ++l)
    if (exps[l] != 0) acc = acc + betas_[l].scaled(exps[l]);
  return acc;
}

Value GenSeq::mono_value(const std::vector<long>& exps) const {
  auto v = try_mono_value(exps);
  if (!v)
    throw error(errc::depth_exceeded,
                "monomial touches an index with unknown value");
  return *v;
}

long GenSeq::mono_ord(const std::vector<long>& exps) const {
  if (exps.size() > polys_.size())
    throw error(errc::depth_exceeded, "monomial beyond the constructed keys");
  long o = 0;
  for (size_t l = 0; l < exps.size(); ++l)
    if (exps[l] != 0) o += exps[l] * polys_[l].ord_total();
  return o;
}

TowerElem GenSeq::res_map(std::vector<long> a) const {
  trim(a);
  TowerElem acc = tower_.from_base(1);
  for (size_t j = a.size(); j-- > 1;) {
    long e = a[j];
    if (e == 0) continue;
    if (j > steps_done_)
      throw error(errc::depth_exceeded,
                  "residue needs the step data of index " + std::to_string(j));
    const auto& nb = nbars_[j - 1];
    if (!nb)
      throw error(errc::value_mismatch,
                  "terminal index in a value-zero monomial");
    long nbar = to_long(*nb);
    if (e % nbar != 0)
      throw error(errc::value_mismatch, "monomial is not of value zero");
    long s = e / nbar;
    acc = tower_.mul(acc, tower_.pow(tower_.gen(static_cast<int>(j)),
                                     Integer(s)));
    const auto& u = us_[j - 1];
    for (size_t l = 0; l < u.size(); ++l) a[l] += s * u[l];
    a[j] = 0;
  }
  if (!a.empty() && a[0] != 0)
    throw error(errc::value_mismatch, "monomial is not of value zero");
  return acc;
}

BiPoly GenSeq::term_poly(const PTerm& t) const {
  BiPoly p = BiPoly::constant(t.coef, field_);
  for (size_t l = 0; l < t.exps.size(); ++l) {
    if (t.exps[l] == 0) continue;
    if (t.exps[l] < 0) throw error(errc::internal, "negative monomial exponent");
    p = p * polys_[l].pow(t.exps[l]);
  }
  return p;
}

NbarList GenSeq::nbar_list(int upto) const {
  return NbarList(nbars_.begin(), nbars_.begin() + upto);
}

std::vector<long> GenSeq::lemma2_monomial(const Value& gamma, int level) const {
  std::vector<Value> bs(betas_.begin(), betas_.begin() + level + 1);
  auto rep = lemma2_representation(gamma, bs, nbar_list(level));
  if (!rep || rep->a0 < 0)
    throw error(errc::not_representable,
                "no monomial of value " + gamma.str() +
                    " over the first " + std::to_string(level + 1) + " keys");
  std::vector<long> out(static_cast<size_t>(level) + 1, 0);
  out[0] = to_long(rep->a0);
  for (int l = 1; l <= level; ++l) out[l] = to_long(rep->rest[l - 1]);
  return out;
}

// ---------------------------------------------------------------------------
// Residue realization (the constructive converse: from residue data to an
// explicit same-value sum of in-range monomials)
// ---------------------------------------------------------------------------

std::vector<PTerm> GenSeq::realize_impl(const TowerElem& lambda,
                                        const std::vector<long>& ref,
                                        int level) const {
  if (tower_.is_zero(lambda)) return {};
  if (level == 0) {
    long a = ref.empty() ? 0 : ref[0];
    if (a < 0)
      throw error(errc::not_representable,
                  "target value needs a negative power of the first key");
    return {PTerm{scalar_of(tower_, lambda), {a}}};
  }
  Value gamma = mono_value(ref);
  std::vector<long> nb = lemma2_monomial(gamma, level);
  // the residue of ref against the canonical reference monomial
  std::vector<long> diff(std::max(ref.size(), nb.size()), 0);
  for (size_t l = 0; l < ref.size(); ++l) diff[l] += ref[l];
  for (size_t l = 0; l < nb.size(); ++l) diff[l] -= nb[l];
  TowerElem tau = res_map(diff);
  TowerElem prod = tower_.mul(tau, tower_.lift(lambda, level));
  auto digits = tower_.express_in_basis(prod, level);
  long k = nb[static_cast<size_t>(level)];
  long nbar = to_long(*nbars_[static_cast<size_t>(level) - 1]);
  const auto& u = us_[static_cast<size_t>(level) - 1];
  std::vector<PTerm> out;
  for (size_t m = 0; m < digits.size(); ++m) {
    if (tower_.is_zero(digits[m])) continue;
    // one level down, at the value of ref / (P_level^k * U_level^m)
    std::vector<long> child(nb.begin(), nb.end() - 1);
    for (size_t l = 0; l < u.size(); ++l)
      child[l] -= static_cast<long>(m) * u[l];
    auto part = realize_impl(digits[m], child, level - 1);
    for (auto& h : part) {
      h.exps.resize(static_cast<size_t>(level) + 1, 0);
      h.exps[static_cast<size_t>(level)] = nbar * static_cast<long>(m) + k;
      trim(h.exps);
      out.push_back(std::move(h));
    }
  }
  sort_terms(out);
  return out;
}

std::vector<PTerm> GenSeq::realize_residue(const TowerElem& lambda,
                                           const Value& target,
                                           int level) const {
  if (level < 0 || static_cast<size_t>(level) > steps_done_)
    throw error(errc::out_of_range, "level " + std::to_string(level));
  std::vector<long> ref = lemma2_monomial(target, level);
  return realize_impl(tower_.lift(lambda, level), ref, level);
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

bool GenSeq::can_deepen() const {
  if (!synthesis_) return false;
  size_t i = steps_done_ + 1;  // next step index
  if (i >= betas_.size()) return false;
  if (i > nbars_.size() || !nbars_[i - 1]) return false;
  if (static_cast<int>(i) > tower_.num_levels()) return false;
  return true;
}

void GenSeq::build_step() {
  size_t i = steps_done_ + 1;
  if (!can_deepen())
    throw error(errc::depth_exceeded,
                "no data to construct key " + std::to_string(i + 1));
  long nbar = to_long(*nbars_[i - 1]);
  long d = tower_.minpoly_degree(static_cast<int>(i));
  long n = nbar * d;
  Value gamma = betas_[i].scaled(nbar);
  std::vector<long> u = lemma2_monomial(gamma, static_cast<int>(i) - 1);
  const auto& tail = tower_.minpoly_tail(static_cast<int>(i));
  std::vector<Correction> corr;
  for (long t = 0; t < d; ++t) {
    const TowerElem& b = tail[static_cast<size_t>(t)];
    if (tower_.is_zero(b)) continue;
    // reference monomial U_i^{d-t}, value (d-t) * nbar * beta_i
    std::vector<long> ref(u.size());
    for (size_t l = 0; l < u.size(); ++l) ref[l] = (d - t) * u[l];
    auto terms = realize_impl(tower_.lift(b, static_cast<int>(i) - 1), ref,
                              static_cast<int>(i) - 1);
    for (auto& tm : terms)
      corr.push_back(Correction{tm.coef, tm.exps, t});
  }
  BiPoly next = polys_[i].pow(n);
  for (const auto& c : corr) {
    BiPoly m = term_poly(PTerm{c.coef, c.exps});
    next = next + m * polys_[i].pow(c.t * nbar);
  }
  polys_.push_back(std::move(next));
  us_.push_back(std::move(u));
  corrections_.push_back(std::move(corr));
  ++steps_done_;
}

GenSeq GenSeq::synthesize(std::vector<Value> betas, Tower tower, int depth) {
  if (betas.size() < 2)
    throw error(errc::empty_input, "need at least the two coordinate values");
  size_t lam = betas.size() - 1;
  // residue degrees: one tower level per index; a missing final level means
  // an infinite terminal residue degree
  std::vector<std::optional<Integer>> dees;
  for (size_t i = 1; i <= lam; ++i) {
    if (static_cast<int>(i) <= tower.num_levels())
      dees.emplace_back(Integer(tower.minpoly_degree(static_cast<int>(i))));
    else if (i == lam)
      dees.emplace_back(std::nullopt);
    else
      throw error(errc::inadmissible_data,
                  "missing residue data at index " + std::to_string(i));
  }
  auto report = validate_semigroup_data(betas, dees, /*non_complete=*/true);
  if (!report.ok) throw error(errc::inadmissible_data, report.message);

  GenSeq g(tower.base(), std::move(tower));
  g.synthesis_ = true;
  g.betas_ = std::move(betas);
  g.nbars_ = report.nbars;
  g.dees_ = std::move(dees);
  g.polys_ = {BiPoly::x(g.field_), BiPoly::y(g.field_)};
  if (!g.nbars_.empty() && !g.nbars_.back())
    g.state_ = TermState::TERMINATED_INDEPENDENT;
  else if (!g.dees_.empty() && !g.dees_.back())
    g.state_ = TermState::TERMINATED_TRANSCENDENTAL;

  if (depth < 0) throw error(errc::out_of_range, "negative depth");
  for (int s = 0; s < depth; ++s) {
    if (g.can_deepen()) {
      g.build_step();
    } else if (g.steps_done_ + 1 >= g.betas_.size() &&
               g.state_ == TermState::OPEN) {
      throw error(errc::depth_exceeded,
                  "requested depth exceeds the supplied data");
    } else {
      break;  // terminal index reached; the state already says why
    }
  }
  return g;
}

GenSeq GenSeq::deepened(int extra) const {
  GenSeq g = *this;
  for (int s = 0; s < extra; ++s) g.build_step();
  return g;
}

GenSeq GenSeq::analyze(AnalysisOracle& oracle, int depth,
                       int stabilize_threshold) {
  BaseField field = BaseField::rationals();
  GenSeq g(field, Tower(field));
  BiPoly X = BiPoly::x(field), Y = BiPoly::y(field);
  auto vx = oracle.value(X), vy = oracle.value(Y);
  if (!vx || !vy)
    throw error(errc::inadmissible_data, "a coordinate has no finite value");
  if (*vy < *vx) std::swap(X, Y), std::swap(vx, vy);
  g.polys_ = {X, Y};
  g.betas_ = {*vx, *vy};
  if (stabilize_threshold < 1)
    throw error(errc::out_of_range, "stabilize threshold must be positive");

  int run = 0;
  for (int s = 0; s < depth; ++s) {
    size_t i = g.polys_.size() - 1;  // current top index
    std::vector<Value> below(g.betas_.begin(), g.betas_.end() - 1);
    auto nb = group_index(lattice_from(below), lattice_from(g.betas_));
    g.nbars_.push_back(nb);
    g.dees_.push_back(Integer(1));
    if (!nb) {
      g.state_ = TermState::TERMINATED_INDEPENDENT;
      break;
    }
    long nbar = to_long(*nb);
    Value gamma = g.betas_[i].scaled(nbar);
    std::vector<long> u = g.lemma2_monomial(gamma, static_cast<int>(i) - 1);
    BiPoly pn = g.polys_[i].pow(nbar);
    BiPoly up = g.term_poly(PTerm{Rational(1), u});
    Rational c = oracle.residue(pn, up);
    if (c == 0)
      throw error(errc::value_mismatch, "oracle residue of a unit is zero");
    g.tower_.push_level({g.tower_.from_base(-c)});  // minpoly u - c
    BiPoly next = pn - up.scaled(c);
    g.us_.push_back(std::move(u));
    g.corrections_.push_back(
        {Correction{-c, g.us_.back(), 0}});
    auto v = oracle.value(next);
    g.polys_.push_back(std::move(next));
    ++g.steps_done_;
    if (!v) {
      g.state_ = TermState::KERNEL_HIT;
      g.case3_curve_ = oracle.kernel() ? oracle.kernel()
                                       : std::optional<BiPoly>(g.polys_.back());
      if (g.case3_curve_) g.case3_value_ = oracle.value(*g.case3_curve_);
      break;
    }
    if (!(*v > gamma))
      throw error(errc::value_mismatch,
                  "oracle value did not increase after the residue kill");
    g.betas_.push_back(*v);
    run = nbar == 1 ? run + 1 : 0;
    if (run >= stabilize_threshold) {
      if (auto k = oracle.kernel()) {
        g.state_ = TermState::KERNEL_HIT;
        g.case3_curve_ = k;
        g.case3_value_ = oracle.value(*k);
      } else {
        g.state_ = TermState::STABILIZED;
      }
      break;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Rewriting and expansion
// ---------------------------------------------------------------------------

RewriteResult GenSeq::rewrite_step(const std::vector<long>& mono) const {
  for (size_t i = 1; i < mono.size(); ++i) {
    if (i > nbars_.size()) break;
    auto n = little_n(static_cast<int>(i));
    if (!n || mono[i] < to_long(*n)) continue;
    if (i > steps_done_)
      throw error(errc::depth_exceeded,
                  "rewriting index " + std::to_string(i) +
                      " needs key " + std::to_string(i + 1));
    long nl = to_long(*n);
    long nbar = to_long(*nbars_[i - 1]);
    RewriteResult out;
    out.index = static_cast<int>(i);
    std::vector<long> base = mono;
    base[i] -= nl;
    out.carry.coef = Rational(1);
    out.carry.exps = base;
    out.carry.exps.resize(std::max(out.carry.exps.size(), i + 2), 0);
    out.carry.exps[i + 1] += 1;
    for (const auto& c : corrections_[i - 1]) {
      PTerm t;
      t.coef = -c.coef;
      t.exps = base;
      t.exps.resize(std::max(t.exps.size(), c.exps.size()), 0);
      for (size_t l = 0; l < c.exps.size(); ++l) t.exps[l] += c.exps[l];
      t.exps[i] += c.t * nbar;
      trim(t.exps);
      out.same_value.push_back(std::move(t));
    }
    sort_terms(out.same_value);
    return out;
  }
  throw error(errc::out_of_range, "monomial is already in range");
}

Expansion GenSeq::expand_impl(const BiPoly& f, long order_bound) const {
  if (f.is_zero()) throw error(errc::zero_input, "expansion of 0");
  if (!(f.field() == field_))
    throw error(errc::mode_mismatch, "coefficient field differs");
  if (order_bound < 1)
    throw error(errc::out_of_range, "order bound must be positive");

  std::map<std::vector<long>, Rational> work;
  std::vector<PTerm> remainder;
  auto add_term = [&](std::vector<long> e, const Rational& c) {
    trim(e);
    if (mono_ord(e) >= order_bound) {
      remainder.push_back(PTerm{c, std::move(e)});
      return;
    }
    auto [it, fresh] = work.emplace(std::move(e), c);
    if (!fresh) {
      it->second += c;
      it->second.canonicalize();
      if (it->second == 0) work.erase(it);
    }
  };
  for (const auto& [e, c] : f.terms())
    add_term({e.first, e.second}, c);

  auto cap_of = [&](size_t i) -> std::optional<long> {
    if (i < 1 || i > nbars_.size()) return std::nullopt;
    if (!nbars_[i - 1] || !dees_[i - 1]) return std::nullopt;
    return to_long(*nbars_[i - 1] * *dees_[i - 1]);
  };
  auto out_of_range_at = [&](const std::vector<long>& e) -> int {
    for (size_t i = 1; i < e.size(); ++i) {
      auto cap = cap_of(i);
      if (cap && e[i] >= *cap) return static_cast<int>(i);
    }
    return -1;
  };

  for (long guard = 0;; ++guard) {
    if (guard > 200000)
      throw error(errc::internal, "expansion failed to make progress");
    if (work.empty()) {
      if (remainder.empty()) {
        // f cancelled exactly against itself: only possible via the parked
        // terms, so an empty remainder means a bookkeeping bug
        throw error(errc::internal, "expansion lost all terms");
      }
      throw error(errc::cap_exceeded,
                  "order bound reached before the value was exposed");
    }
    // minimal known value among the active terms
    std::optional<Value> rho;
    bool any_known = false;
    for (const auto& [e, c] : work) {
      auto v = try_mono_value(e);
      if (!v) continue;
      any_known = true;
      if (!rho || *v < *rho) rho = *v;
    }
    if (!any_known)
      throw error(errc::depth_exceeded,
                  "all candidate terms have unknown values");
    // pick the reducible minimal term of smallest exponent sum
    const std::vector<long>* pick = nullptr;
    long pick_sum = 0;
    for (const auto& [e, c] : work) {
      auto v = try_mono_value(e);
      if (!v || *v != *rho) continue;
      if (out_of_range_at(e) < 0) continue;
      long sum = 0;
      for (long x : e) sum += x;
      if (!pick || sum < pick_sum || (sum == pick_sum && lex_less(e, *pick))) {
        pick = &e;
        pick_sum = sum;
      }
    }
    if (!pick) {
      Expansion out;
      out.rho = *rho;
      out.order_bound = order_bound;
      for (const auto& [e, c] : work) {
        auto v = try_mono_value(e);
        if (v && *v == *rho)
          out.leading.push_back(PTerm{c, e});
        else
          out.tail.push_back(PTerm{c, e});
      }
      sort_terms(out.leading);
      sort_terms(out.tail);
      out.remainder = std::move(remainder);
      sort_terms(out.remainder);
      return out;
    }
    std::vector<long> mono = *pick;
    Rational coef = work.at(mono);
    work.erase(mono);
    RewriteResult rw = rewrite_step(mono);
    for (const auto& t : rw.same_value) add_term(t.exps, coef * t.coef);
    add_term(rw.carry.exps, coef * rw.carry.coef);
  }
}

Expansion GenSeq::expand_auto(const BiPoly& f) const {
  long bound = std::max(8L, 4 * (f.deg_total() + 1));
  constexpr long kMaxBound = 1L << 14;
  for (;;) {
    bool retry = false;
    try {
      Expansion e = expand_impl(f, bound);
      // the bound is trustworthy only if nothing parked could still be minimal
      for (const auto& t : e.remainder) {
        auto v = try_mono_value(t.exps);
        if (!v || !(*v > e.rho)) {
          retry = true;
          break;
        }
      }
      if (!retry) return e;
    } catch (const error& err) {
      if (err.code() != errc::cap_exceeded) throw;
      retry = true;
    }
    if (bound >= kMaxBound)
      throw error(errc::cap_exceeded, "value appears to be infinite");
    bound *= 2;
  }
}

Expansion GenSeq::expand(const BiPoly& f, long order_bound) const {
  GenSeq w = *this;
  for (;;) {
    try {
      return w.expand_impl(f, order_bound);
    } catch (const error& e) {
      if (e.code() != errc::depth_exceeded || !w.can_deepen()) throw;
      w.build_step();
    }
  }
}

// ---------------------------------------------------------------------------
// Values and residues
// ---------------------------------------------------------------------------

std::optional<Value> GenSeq::value_fast(const BiPoly& f) const {
  // mixed-radix digits of a y-degree in the monic key basis
  auto digits_of = [&](long d) -> std::optional<std::vector<long>> {
    std::vector<long> js(steps_done_ + 2, 0);
    long rem = d;
    for (size_t k = 1; k <= steps_done_ + 1 && rem > 0; ++k) {
      if (k > nbars_.size()) return std::nullopt;
      if (!nbars_[k - 1] || !dees_[k - 1]) {
        js[k] = rem;  // infinite terminal cap
        rem = 0;
        break;
      }
      long cap = to_long(*nbars_[k - 1] * *dees_[k - 1]);
      js[k] = rem % cap;
      rem /= cap;
    }
    if (rem != 0) return std::nullopt;
    return js;
  };
  BiPoly r = f;
  std::optional<Value> best;
  auto update = [&](const Value& v) {
    if (!best || v < *best) best = v;
  };
  while (!r.is_zero()) {
    long d = r.deg_y();
    if (d == 0) {
      update(betas_[0].scaled(r.ord_total()));
      break;
    }
    auto js = digits_of(d);
    if (!js) return std::nullopt;
    std::vector<long> e = *js;
    trim(e);
    auto mv = try_mono_value(e);
    if (!mv) return std::nullopt;  // top value unknown
    BiPoly m = term_poly(PTerm{Rational(1), e});
    auto [q, rest] = r.divmod_y(m);
    if (q.is_zero() || q.deg_y() != 0)
      throw error(errc::internal, "basis division left a y term");
    update(*mv + betas_[0].scaled(q.ord_total()));
    r = rest;
  }
  if (!best) throw error(errc::internal, "no basis term survived");
  return best;
}

Value GenSeq::value_of(const BiPoly& f) const {
  if (f.is_zero()) throw error(errc::zero_input, "value of 0");
  GenSeq w = *this;
  BiPoly g = f;
  std::optional<Value> shift;
  auto add_shift = [&](const Value& v) {
    shift = shift ? *shift + v : v;
  };
  if (state_ == TermState::TERMINATED_INDEPENDENT) {
    size_t lam = betas_.size() - 1;
    while (w.polys_.size() <= lam) {
      if (!w.can_deepen())
        throw error(errc::depth_exceeded,
                    "terminal key polynomial was not constructed");
      w.build_step();
    }
    const BiPoly& pl = w.polys_[lam];
    while (auto q = g.exact_divide(pl)) {
      g = std::move(*q);
      add_shift(betas_[lam]);
    }
  } else if (case3_curve_) {
    while (auto q = g.exact_divide(*case3_curve_)) {
      g = std::move(*q);
      if (!case3_value_)
        throw error(errc::kernel_hit, "input divisible by the kernel curve");
      add_shift(*case3_value_);
    }
  }
  std::optional<Value> v;
  for (;;) {
    v = w.value_fast(g);
    if (v) break;
    if (!w.can_deepen()) break;
    w.build_step();
  }
  if (!v) {
    for (;;) {
      try {
        v = w.expand_auto(g).rho;
        break;
      } catch (const error& e) {
        if (e.code() != errc::depth_exceeded || !w.can_deepen()) throw;
        w.build_step();
      }
    }
  }
  return shift ? *shift + *v : *v;
}

TowerElem GenSeq::residue_of(const BiPoly& f, const BiPoly& g) const {
  GenSeq w = *this;
  for (;;) {
    try {
      Expansion ef = w.expand_auto(f), eg = w.expand_auto(g);
      if (ef.rho != eg.rho)
        throw error(errc::value_mismatch, "values " + ef.rho.str() + " and " +
                                              eg.rho.str() + " differ");
      const std::vector<long>& ref = eg.leading.front().exps;
      auto accumulate = [&](const std::vector<PTerm>& terms) {
        TowerElem acc = w.tower_.from_base(0);
        for (const auto& t : terms) {
          std::vector<long> diff(std::max(t.exps.size(), ref.size()), 0);
          for (size_t l = 0; l < t.exps.size(); ++l) diff[l] += t.exps[l];
          for (size_t l = 0; l < ref.size(); ++l) diff[l] -= ref[l];
          acc = w.tower_.add(
              acc, w.tower_.mul(w.res_map(diff), w.tower_.from_base(t.coef)));
        }
        return acc;
      };
      TowerElem num = accumulate(ef.leading), den = accumulate(eg.leading);
      return w.tower_.div(num, den);
    } catch (const error& e) {
      if (e.code() != errc::depth_exceeded || !w.can_deepen()) throw;
      w.build_step();
    }
  }
}

}  // namespace valkey
