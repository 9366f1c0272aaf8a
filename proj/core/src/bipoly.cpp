#include "valkey/bipoly.hpp"

#include <algorithm>
#include <cctype>

#include "valkey/error.hpp"

namespace valkey {

Rational BiPoly::norm(const Rational& c) const {
  Rational r = c;
  r.canonicalize();
  if (field_.kind == BaseField::Kind::Fp) {
    Integer p(field_.p), num, den_inv;
    mpz_fdiv_r(num.get_mpz_t(), r.get_num().get_mpz_t(), p.get_mpz_t());
    if (mpz_invert(den_inv.get_mpz_t(), r.get_den().get_mpz_t(),
                   p.get_mpz_t()) == 0)
      throw error(errc::zero_divisor, "denominator divisible by the modulus");
    Integer out = (num * den_inv) % p;
    return Rational(out);
  }
  return r;
}

void BiPoly::check_field(const BiPoly& o) const {
  if (!(field_ == o.field_))
    throw error(errc::mode_mismatch, "mixed coefficient fields");
}

BiPoly BiPoly::constant(const Rational& c, BaseField f) {
  return monomial(0, 0, c, f);
}

BiPoly BiPoly::monomial(long ex, long ey, const Rational& c, BaseField f) {
  BiPoly p(f);
  p.set_coeff(ex, ey, c);
  return p;
}

Rational BiPoly::coeff(long ex, long ey) const {
  auto it = terms_.find({ex, ey});
  return it == terms_.end() ? Rational(0) : it->second;
}

void BiPoly::set_coeff(long ex, long ey, const Rational& c) {
  if (ex < 0 || ey < 0) throw error(errc::out_of_range, "negative exponent");
  Rational n = norm(c);
  if (n == 0)
    terms_.erase({ex, ey});
  else
    terms_[{ex, ey}] = n;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
  check_field(o);
  BiPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.set_coeff(e.first, e.second, r.coeff(e.first, e.second) + c);
  return r;
}

BiPoly BiPoly::operator-(const BiPoly& o) const { return *this + (-o); }

BiPoly BiPoly::operator-() const {
  BiPoly r(field_);
  for (const auto& [e, c] : terms_) r.terms_[e] = norm(-c);
  return r;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
  check_field(o);
  BiPoly r(field_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exp e{e1.first + e2.first, e1.second + e2.second};
      r.set_coeff(e.first, e.second, r.coeff(e.first, e.second) + c1 * c2);
    }
  return r;
}

BiPoly BiPoly::scaled(const Rational& c) const {
  BiPoly r(field_);
  if (norm(c) == 0) return r;
  for (const auto& [e, cc] : terms_) r.terms_[e] = norm(cc * c);
  return r;
}

BiPoly BiPoly::pow(long e) const {
  if (e < 0) throw error(errc::out_of_range, "negative power");
  BiPoly acc = constant(1, field_);
  BiPoly base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

bool BiPoly::operator==(const BiPoly& o) const {
  return field_ == o.field_ && terms_ == o.terms_;
}

long BiPoly::ord_total() const {
  if (is_zero()) throw error(errc::zero_input, "ord of 0");
  return terms_.begin()->first.first + terms_.begin()->first.second;
}

long BiPoly::deg_total() const {
  if (is_zero()) throw error(errc::zero_input, "degree of 0");
  return terms_.rbegin()->first.first + terms_.rbegin()->first.second;
}

long BiPoly::deg_x() const {
  if (is_zero()) throw error(errc::zero_input, "degree of 0");
  long d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first);
  return d;
}

long BiPoly::deg_y() const {
  if (is_zero()) throw error(errc::zero_input, "degree of 0");
  long d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.second);
  return d;
}

bool BiPoly::is_monic_in_y() const {
  long dy = deg_y();
  BiPoly top = coeff_of_y(dy);
  return top.terms_.size() == 1 && top.terms_.begin()->first.first == 0;
}

BiPoly BiPoly::coeff_of_y(long j) const {
  BiPoly r(field_);
  for (const auto& [e, c] : terms_)
    if (e.second == j) r.terms_[{e.first, 0}] = c;
  return r;
}

BiPoly BiPoly::d_dy() const {
  BiPoly r(field_);
  for (const auto& [e, c] : terms_)
    if (e.second > 0)
      r.set_coeff(e.first, e.second - 1, c * Rational(e.second));
  return r;
}

std::pair<BiPoly, BiPoly> BiPoly::divmod_y(const BiPoly& div) const {
  check_field(div);
  if (div.is_zero()) throw error(errc::zero_input, "division by 0");
  if (!div.is_monic_in_y())
    throw error(errc::inadmissible_data, "divisor not monic in y");
  long dd = div.deg_y();
  Rational lead = div.coeff_of_y(dd).coeff(0, 0);
  BiPoly q(field_), r = *this;
  while (!r.is_zero() && r.deg_y() >= dd) {
    long ry = r.deg_y();
    BiPoly c = r.coeff_of_y(ry).scaled(1 / lead);
    // c * y^{ry - dd}
    BiPoly shift(field_);
    for (const auto& [e, cc] : c.terms_) shift.terms_[{e.first, ry - dd}] = cc;
    q = q + shift;
    r = r - shift * div;
    if (!r.is_zero() && r.deg_y() >= ry) {
      // top block cancelled exactly; anything left at ry would be a bug
      throw error(errc::internal, "divmod_y failed to reduce the y-degree");
    }
  }
  return {q, r};
}

std::optional<BiPoly> BiPoly::exact_divide(const BiPoly& g) const {
  check_field(g);
  if (g.is_zero()) throw error(errc::zero_input, "division by 0");
  BiPoly q(field_), r = *this;
  const auto& [ge, gc] = *g.terms_.rbegin();  // leading term in grlex
  while (!r.is_zero()) {
    const auto& [re, rc] = *r.terms_.rbegin();
    long ex = re.first - ge.first, ey = re.second - ge.second;
    if (ex < 0 || ey < 0) return std::nullopt;
    BiPoly t = monomial(ex, ey, norm(rc / gc), field_);
    q = q + t;
    r = r - t * g;
  }
  return q;
}

std::string BiPoly::str() const {
  if (is_zero()) return "0";
  // Print in descending lex order with y before x, so that polynomials monic
  // in y lead with their y power.
  std::vector<std::pair<Exp, Rational>> sorted(terms_.begin(), terms_.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.first.second != b.first.second)
      return a.first.second > b.first.second;
    return a.first.first > b.first.first;
  });
  std::string out;
  for (const auto& [e, c] : sorted) {
    bool neg = c < 0;
    Rational ac = neg ? Rational(-c) : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    std::string mono;
    if (e.first > 0) {
      mono += "x";
      if (e.first > 1) mono += "^" + std::to_string(e.first);
    }
    if (e.second > 0) {
      if (!mono.empty()) mono += "*";
      mono += "y";
      if (e.second > 1) mono += "^" + std::to_string(e.second);
    }
    if (mono.empty()) {
      out += rat_str(ac);
    } else if (ac == 1) {
      out += mono;
    } else {
      out += rat_str(ac) + "*" + mono;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser: sum of signed terms; term = factor ('*' factor)*;
// factor = rational | ('x'|'y') ('^' integer)?
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string number() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/'))
      ++pos;
    if (start == pos)
      throw error(errc::parse_error,
                  "expected a number at offset " + std::to_string(start));
    return s.substr(start, pos - start);
  }
};

long parse_exponent(Lexer& lx) {
  if (!lx.accept('^')) return 1;
  std::string n = lx.number();
  if (n.find('/') != std::string::npos)
    throw error(errc::parse_error, "fractional exponent " + n);
  return std::stol(n);
}

}  // namespace

BiPoly parse_bipoly(const std::string& text, BaseField field) {
  Lexer lx{text};
  BiPoly out(field);
  if (lx.eof()) throw error(errc::parse_error, "empty polynomial");
  bool first = true;
  while (!lx.eof()) {
    int sign = 1;
    if (lx.accept('+')) {
      sign = 1;
    } else if (lx.accept('-')) {
      sign = -1;
    } else if (!first) {
      throw error(errc::parse_error,
                  "expected '+' or '-' at offset " + std::to_string(lx.pos));
    }
    first = false;
    Rational coef(sign);
    long ex = 0, ey = 0;
    bool want_factor = true;
    while (want_factor) {
      char c = lx.peek();
      if (c == 'x') {
        ++lx.pos;
        ex += parse_exponent(lx);
      } else if (c == 'y') {
        ++lx.pos;
        ey += parse_exponent(lx);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        try {
          coef *= rat_parse(lx.number());
        } catch (const std::invalid_argument& e) {
          throw error(errc::parse_error, e.what());
        }
      } else {
        throw error(errc::parse_error, "unexpected character '" +
                                           std::string(1, c) + "' at offset " +
                                           std::to_string(lx.pos));
      }
      want_factor = lx.accept('*');
    }
    out.set_coeff(ex, ey, out.coeff(ex, ey) + coef);
  }
  return out;
}

}  // namespace valkey
