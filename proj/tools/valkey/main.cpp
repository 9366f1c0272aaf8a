// valkey: exact-arithmetic front end for valuation semigroup computations.
// All numeric I/O is exact rational text; --decimal adds a truncated
// approximation column.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "valkey/birat.hpp"
#include "valkey/error.hpp"
#include "valkey/subring.hpp"
#include "valkey/valuation.hpp"

using nlohmann::json;
using namespace valkey;

namespace {

long series_cap() {
  const char* c = std::getenv("VALKEY_CAP");
  if (!c) return kDefaultSeriesCap;
  long v = std::atol(c);
  if (v < 4) throw error(errc::out_of_range, "VALKEY_CAP must be at least 4");
  return v;
}

SeriesOracle oracle_from_param(const std::string& param) {
  if (param == "sqrt1px") return SeriesOracle::t_sqrt_1_plus_t(series_cap());
  throw error(errc::unsupported, "unknown series parameter: " + param);
}

json read_doc(const std::string& path) {
  if (path == "-") return json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw error(errc::parse_error, "cannot open " + path);
  return json::parse(in);
}

BaseField field_from(const json& j) {
  if (j.is_string() && j.get<std::string>() == "Q")
    return BaseField::rationals();
  if (j.is_number_integer()) return BaseField::prime_field(j.get<long>());
  throw error(errc::parse_error, "field must be \"Q\" or a prime");
}

json field_to(const BaseField& f) {
  if (f.kind == BaseField::Kind::Q) return "Q";
  return f.p;
}

Value value_from(const json& j, Mode m) {
  switch (m) {
    case Mode::RANK1:
      return Value(rat_parse(j.get<std::string>()), m);
    case Mode::LEX:
      return Value(rat_parse(j.at(0).get<std::string>()),
                   rat_parse(j.at(1).get<std::string>()), m);
    case Mode::TAU:
      return Value(rat_parse(j.at("a").get<std::string>()),
                   rat_parse(j.at("b").get<std::string>()), m);
  }
  throw error(errc::internal, "bad mode");
}

json value_to(const Value& v) {
  switch (v.mode) {
    case Mode::RANK1:
      return rat_str(v.a);
    case Mode::LEX:
      return json::array({rat_str(v.a), rat_str(v.b)});
    case Mode::TAU:
      return json{{"a", rat_str(v.a)}, {"b", rat_str(v.b)}};
  }
  throw error(errc::internal, "bad mode");
}

std::string value_text(const Value& v) {
  switch (v.mode) {
    case Mode::RANK1:
      return rat_str(v.a);
    case Mode::LEX:
      return "(" + rat_str(v.a) + "," + rat_str(v.b) + ")";
    case Mode::TAU:
      return rat_str(v.a) + "+" + rat_str(v.b) + "*sqrt(2)";
  }
  throw error(errc::internal, "bad mode");
}

std::string index_text(const std::optional<Integer>& n) {
  return n ? n->get_str() : "inf";
}

json index_to(const std::optional<Integer>& n) {
  if (!n) return "inf";
  return n->get_str();
}

std::optional<Integer> index_from(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return std::nullopt;
  if (j.is_string()) return Integer(j.get<std::string>());
  return Integer(j.get<long>());
}

// One input document: a plain value-chain spec, a dumped sequence, or a bare
// generator list for the semigroup commands.
struct Doc {
  Mode mode = Mode::RANK1;
  BaseField field = BaseField::rationals();
  std::vector<Value> betas;
  std::optional<std::vector<std::optional<Integer>>> dees;
  std::vector<std::vector<Rational>> tower_tails;  // scalar minpoly tails
  int depth = 0;
  std::string source = "synthetic";  // synthetic | series | composite
  std::string param = "sqrt1px";
  std::string g;                     // composite curve
  std::vector<Value> generators;     // bare-description input
};

Doc parse_doc(const json& j) {
  Doc d;
  if (j.contains("mode")) d.mode = mode_parse(j.at("mode").get<std::string>());
  if (j.contains("field")) d.field = field_from(j.at("field"));
  if (j.contains("betas"))
    for (const auto& b : j.at("betas")) d.betas.push_back(value_from(b, d.mode));
  if (j.contains("generators"))
    for (const auto& b : j.at("generators"))
      d.generators.push_back(value_from(b, d.mode));
  if (j.contains("dees")) {
    std::vector<std::optional<Integer>> ds;
    for (const auto& e : j.at("dees")) ds.push_back(index_from(e));
    d.dees = std::move(ds);
  }
  if (j.contains("tower"))
    for (const auto& tail : j.at("tower")) {
      std::vector<Rational> t;
      for (const auto& c : tail) t.push_back(rat_parse(c.get<std::string>()));
      d.tower_tails.push_back(std::move(t));
    }
  d.depth = j.value("depth", static_cast<int>(d.betas.size()) - 2);
  if (j.contains("source")) {
    const auto& s = j.at("source");
    d.source = s.at("kind").get<std::string>();
    d.param = s.value("param", d.param);
    d.g = s.value("g", d.g);
  }
  return d;
}

Tower tower_from(const Doc& d) {
  Tower t(d.field);
  if (!d.tower_tails.empty()) {
    for (const auto& tail : d.tower_tails) {
      std::vector<TowerElem> es;
      for (const auto& c : tail) es.push_back(t.from_base(c));
      t.push_level(std::move(es));
    }
    return t;
  }
  for (size_t i = 1; i < d.betas.size(); ++i) t.push_level({t.from_base(-1)});
  return t;
}

Valuation valuation_from(const Doc& d) {
  if (d.source == "synthetic") {
    if (d.betas.size() < 2)
      throw error(errc::empty_input, "need at least two values");
    return Valuation::synthetic(
        GenSeq::synthesize(d.betas, tower_from(d), d.depth));
  }
  if (d.source == "series") return Valuation::from_series(oracle_from_param(d.param));
  if (d.source == "composite") {
    if (d.g.empty()) throw error(errc::empty_input, "composite source needs g");
    return Valuation::from_composite(
        CompositeValuation(parse_bipoly(d.g, d.field), oracle_from_param(d.param)));
  }
  throw error(errc::parse_error, "unknown source kind: " + d.source);
}

GenSeq seq_from(const Doc& d, const json& raw) {
  Valuation v = valuation_from(d);
  GenSeq s = v.sequence(d.depth);
  if (raw.contains("keys")) {
    const auto& keys = raw.at("keys");
    for (size_t i = 0; i < keys.size(); ++i) {
      if (static_cast<int>(i) > s.top_index()) break;
      if (parse_bipoly(keys[i].get<std::string>(), d.field) !=
          s.key_poly(static_cast<int>(i)))
        throw error(errc::value_mismatch,
                    "stored key polynomial " + std::to_string(i) +
                        " disagrees with the rebuilt sequence");
    }
  }
  return s;
}

Rational tail_scalar(const Tower& t, const TowerElem& e) {
  TowerElem x = e;
  while (x.level > 0) {
    for (size_t k = 1; k < x.coeffs.size(); ++k)
      if (!t.is_zero(x.coeffs[k]))
        throw error(errc::unsupported,
                    "cannot serialize a non-scalar residue tower");
    if (x.coeffs.empty()) return Rational(0);
    x = x.coeffs[0];
  }
  return x.scalar;
}

json seq_dump(const GenSeq& s, const Doc& d) {
  json j;
  j["mode"] = mode_str(s.mode());
  j["field"] = field_to(s.field());
  json betas = json::array();
  for (int i = 0; i < s.known_betas(); ++i) betas.push_back(value_to(s.beta(i)));
  j["betas"] = betas;
  j["depth"] = s.steps();
  json src{{"kind", d.source}};
  if (d.source != "synthetic") src["param"] = d.param;
  if (d.source == "composite") src["g"] = d.g;
  j["source"] = src;
  const Tower& t = s.tower();
  json tower = json::array();
  for (int lv = 1; lv <= t.num_levels(); ++lv) {
    json tail = json::array();
    for (const auto& c : t.minpoly_tail(lv))
      tail.push_back(rat_str(tail_scalar(t, c)));
    tower.push_back(tail);
  }
  j["tower"] = tower;
  json keys = json::array();
  for (int i = 0; i <= s.top_index(); ++i) keys.push_back(s.key_poly(i).str());
  j["keys"] = keys;
  json nbars = json::array(), dees = json::array(), us = json::array();
  for (int i = 1; i <= s.steps(); ++i) {
    nbars.push_back(index_to(s.nbar(i)));
    dees.push_back(index_to(s.dee(i)));
    us.push_back(s.U(i));
  }
  j["nbars"] = nbars;
  j["dees"] = dees;
  j["us"] = us;
  j["state"] = term_state_str(s.state());
  return j;
}

SemigroupDescription desc_from(const Doc& d, int depth) {
  if (!d.generators.empty()) return describe_generators(d.generators);
  return semigroup(valuation_from(d), depth >= 0 ? depth : d.depth);
}

json desc_dump(const SemigroupDescription& desc) {
  json j;
  j["mode"] = mode_str(desc.mode);
  j["case"] = semigroup_case_str(desc.case_tag);
  j["depth"] = desc.depth;
  json gens = json::array(), nbars = json::array();
  for (const auto& g : desc.generators) gens.push_back(value_to(g));
  for (const auto& n : desc.nbars) nbars.push_back(index_to(n));
  j["generators"] = gens;
  j["nbars"] = nbars;
  if (desc.curve_value) j["curve_value"] = value_to(*desc.curve_value);
  return j;
}

std::string join_values(const std::vector<Value>& vs) {
  std::string out;
  for (size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += value_text(vs[i]);
  }
  return out;
}

json pterm_to(const PTerm& t) {
  return json{{"coef", rat_str(t.coef)}, {"exps", t.exps}};
}

std::string pterm_text(const PTerm& t) {
  std::string out = rat_str(t.coef);
  for (size_t l = 0; l < t.exps.size(); ++l) {
    if (t.exps[l] == 0) continue;
    out += "*P" + std::to_string(l);
    if (t.exps[l] != 1) out += "^" + std::to_string(t.exps[l]);
  }
  return out;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& input, bool as_json) {
  Doc d = parse_doc(read_doc(input));
  if (d.betas.empty()) throw error(errc::empty_input, "no values supplied");
  auto rep = validate_semigroup_data(d.betas, d.dees);
  if (as_json) {
    json j{{"ok", rep.ok}};
    json nbars = json::array();
    for (const auto& n : rep.nbars) nbars.push_back(index_to(n));
    j["nbars"] = nbars;
    if (!rep.ok) {
      j["first_violation"] = rep.first_violation;
      j["message"] = rep.message;
    }
    emit(j);
  } else if (rep.ok) {
    std::string out = "OK: nbars=[";
    for (size_t i = 0; i < rep.nbars.size(); ++i)
      out += (i ? "," : "") + index_text(rep.nbars[i]);
    std::cout << out << "]\n";
  } else {
    std::cout << "FAIL[" << rep.first_violation << "]: " << rep.message << "\n";
  }
  return rep.ok ? 0 : 1;
}

int cmd_build(const std::string& input, int depth, bool) {
  json raw = read_doc(input);
  Doc d = parse_doc(raw);
  if (depth >= 0) d.depth = depth;
  emit(seq_dump(seq_from(d, raw), d));
  return 0;
}

int cmd_analyze(const std::string& oracle, const std::string& param,
                const std::string& g, int depth) {
  Doc d;
  d.depth = depth;
  d.param = param;
  if (oracle == "series") {
    d.source = "series";
    d.mode = Mode::RANK1;
  } else if (oracle == "composite") {
    d.source = "composite";
    d.mode = Mode::LEX;
    d.g = g;
  } else {
    throw error(errc::unsupported, "oracle must be series or composite");
  }
  emit(seq_dump(seq_from(d, json::object()), d));
  return 0;
}

int cmd_eval(const std::string& input, const std::string& poly, int decimal,
             bool as_json) {
  json raw = read_doc(input);
  Doc d = parse_doc(raw);
  Valuation v = valuation_from(d);
  Value val = v.value_of(parse_bipoly(poly, d.field));
  if (as_json) {
    json j{{"value", value_to(val)}};
    if (decimal >= 0 && val.mode == Mode::RANK1)
      j["decimal"] = decimal_str(val.a, decimal);
    emit(j);
  } else {
    std::cout << value_text(val);
    if (decimal >= 0 && val.mode == Mode::RANK1)
      std::cout << " (" << decimal_str(val.a, decimal) << ")";
    std::cout << "\n";
  }
  return 0;
}

int cmd_expand(const std::string& input, const std::string& poly, long order,
               bool as_json) {
  json raw = read_doc(input);
  Doc d = parse_doc(raw);
  GenSeq s = seq_from(d, raw);
  Expansion e = s.expand(parse_bipoly(poly, d.field), order);
  if (as_json) {
    json j{{"rho", value_to(e.rho)}, {"order_bound", e.order_bound}};
    json lead = json::array(), tail = json::array(), rem = json::array();
    for (const auto& t : e.leading) lead.push_back(pterm_to(t));
    for (const auto& t : e.tail) tail.push_back(pterm_to(t));
    for (const auto& t : e.remainder) rem.push_back(pterm_to(t));
    j["leading"] = lead;
    j["tail"] = tail;
    j["remainder"] = rem;
    emit(j);
  } else {
    std::cout << "rho=" << value_text(e.rho) << "\n";
    for (const auto& t : e.leading) std::cout << "  " << pterm_text(t) << "\n";
    if (!e.tail.empty()) std::cout << "tail: " << e.tail.size() << " terms\n";
    if (!e.remainder.empty())
      std::cout << "remainder: " << e.remainder.size() << " terms\n";
  }
  return 0;
}

int cmd_transform(const std::string& input, int steps, bool as_json) {
  json raw = read_doc(input);
  Doc d = parse_doc(raw);
  GenSeq s = seq_from(d, raw);
  auto chain = transform_chain(s, steps);
  if (as_json) {
    json out = json::array();
    for (const auto& st : chain) {
      json j{{"nbar1", st.data.nbar1}, {"w", st.data.w},
             {"a", st.data.a},         {"b", st.data.b},
             {"eps", st.data.eps}};
      j["x"] = substitute(st.data, BiPoly::monomial(1, 0, 1, s.field())).str();
      j["y"] = substitute(st.data, BiPoly::monomial(0, 1, 1, s.field())).str();
      Doc dd = d;
      dd.source = "synthetic";
      j["transformed"] = seq_dump(st.transformed, dd);
      out.push_back(j);
    }
    emit(out);
  } else {
    for (size_t k = 0; k < chain.size(); ++k) {
      const auto& st = chain[k];
      std::cout << "stage " << k + 1 << ": x = "
                << substitute(st.data, BiPoly::monomial(1, 0, 1, s.field())).str()
                << ", y = "
                << substitute(st.data, BiPoly::monomial(0, 1, 1, s.field())).str()
                << ", eps=" << st.data.eps << "\n";
      std::vector<Value> bs;
      for (int i = 0; i < st.transformed.known_betas(); ++i)
        bs.push_back(st.transformed.beta(i));
      std::cout << "  betas: " << join_values(bs) << "\n";
    }
  }
  return 0;
}

int cmd_semigroup(const std::string& input, int depth, bool as_json) {
  Doc d = parse_doc(read_doc(input));
  SemigroupDescription desc = desc_from(d, depth);
  if (as_json) {
    emit(desc_dump(desc));
  } else {
    std::cout << "generators=[" << join_values(desc.generators) << "] case="
              << semigroup_case_str(desc.case_tag) << "\n";
    if (desc.curve_value)
      std::cout << "curve_value=" << value_text(*desc.curve_value) << "\n";
  }
  return 0;
}

int cmd_density(const std::string& input, int depth, long nmax, int digits,
                bool as_json) {
  Doc d = parse_doc(read_doc(input));
  auto pts = density(desc_from(d, depth), nmax);
  if (as_json) {
    json out = json::array();
    for (const auto& p : pts)
      out.push_back(json{{"n", p.n},
                         {"phi", p.phi.get_str()},
                         {"ratio", rat_str(p.ratio)},
                         {"ratio_decimal", decimal_str(p.ratio, digits)}});
    emit(out);
  } else {
    std::cout << density_csv(pts, digits);
  }
  return 0;
}

int cmd_symmetric(const std::string& input, int depth, bool as_json) {
  Doc d = parse_doc(read_doc(input));
  auto r = is_symmetric(desc_from(d, depth));
  if (as_json) {
    emit(json{{"symmetric", r.symmetric},
              {"frobenius", r.frobenius.get_str()},
              {"frobenius_original", value_to(r.frobenius_original)},
              {"scale", rat_str(r.scale)}});
  } else if (r.symmetric) {
    std::cout << "symmetric: m=" << r.frobenius.get_str() << " (original "
              << value_text(r.frobenius_original) << ", scale "
              << rat_str(r.scale) << ")\n";
  } else {
    std::cout << "not symmetric: frobenius=" << r.frobenius.get_str() << "\n";
  }
  return 0;
}

int cmd_a2(const std::string& input, const std::string& bound, int gap_n,
           int module_n, bool as_json) {
  json raw = read_doc(input);
  Doc d = parse_doc(raw);
  GenSeq s = seq_from(d, raw);
  auto r = a2_semigroup(s, Value::rank1(rat_parse(bound)));
  std::vector<Value> betas;
  for (int i = 0; i < s.known_betas(); ++i) betas.push_back(s.beta(i));
  SemigroupDescription desc = describe_generators(betas);
  json j;
  if (as_json) {
    json els = json::array(), gens = json::array();
    for (const auto& e : r.elements) els.push_back(value_to(e));
    for (const auto& g : r.generators) gens.push_back(value_to(g));
    j["elements"] = els;
    j["generators"] = gens;
  } else {
    std::cout << "gamma0=" << value_text(r.elements.front()) << "\n";
    std::cout << "generators=[" << join_values(r.generators) << "]\n";
  }
  if (gap_n > 0) {
    auto w = gap_witness(desc, gap_n);
    if (as_json) {
      j["gap"] = json{{"n", w.n},
                      {"l", w.l},
                      {"gamma_l", value_to(w.gamma_l)},
                      {"gamma_next", value_to(w.gamma_next)},
                      {"step", value_to(w.step)},
                      {"small_step", w.small_step},
                      {"in_group", w.in_group}};
    } else {
      std::cout << "gap[" << w.n << "]: gamma_" << w.l << "="
                << value_text(w.gamma_l) << " -> " << value_text(w.gamma_next)
                << " step=" << value_text(w.step)
                << (w.in_group ? " in-group" : "") << "\n";
    }
  }
  if (module_n >= 0) {
    auto ws = non_fg_module_witness(desc, module_n);
    if (as_json) {
      json arr = json::array();
      for (const auto& w : ws)
        arr.push_back(json{{"n", w.n}, {"witness", value_to(w.witness)}});
      j["module_witnesses"] = arr;
    } else {
      for (const auto& w : ws)
        std::cout << "module[" << w.n << "]: witness "
                  << value_text(w.witness) << "\n";
    }
  }
  if (as_json) emit(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact valuation semigroups of plane local rings"};
  app.require_subcommand(1);

  std::string input, poly, oracle, param = "sqrt1px", g, bound;
  int depth = -1, decimal = -1, steps = 1, digits = 6;
  int gap_n = -1, module_n = -1;
  long nmax = 64, order = 256;
  bool as_json = false;

  auto add_input = [&](CLI::App* c) {
    c->add_option("input", input, "JSON file, or - for stdin")->required();
    c->add_flag("--json", as_json, "machine-readable output");
  };

  auto* validate = app.add_subcommand("validate", "check value-chain data");
  add_input(validate);

  auto* build = app.add_subcommand("build", "synthesize and dump a sequence");
  add_input(build);
  build->add_option("--depth", depth, "construction steps");

  auto* analyze = app.add_subcommand("analyze", "discover from an oracle");
  analyze->add_option("--oracle", oracle, "series | composite")->required();
  analyze->add_option("--param", param, "series parametrization");
  analyze->add_option("--g", g, "composite curve");
  analyze->add_option("--depth", depth, "construction steps")->required();
  analyze->add_flag("--json", as_json);

  auto* eval = app.add_subcommand("eval", "value of a polynomial");
  add_input(eval);
  eval->add_option("poly", poly, "polynomial in x, y")->required();
  eval->add_option("--decimal", decimal, "decimal digits to append");

  auto* expand = app.add_subcommand("expand", "canonical expansion");
  add_input(expand);
  expand->add_option("poly", poly)->required();
  expand->add_option("--order", order, "remainder order bound");

  auto* transform = app.add_subcommand("transform", "quadratic transforms");
  add_input(transform);
  transform->add_option("--steps", steps, "chain length");

  auto* semi = app.add_subcommand("semigroup", "minimal generators");
  add_input(semi);
  semi->add_option("--depth", depth);

  auto* dens = app.add_subcommand("density", "phi(n)/n^2 trajectory (CSV)");
  add_input(dens);
  dens->add_option("--depth", depth);
  dens->add_option("--nmax", nmax);
  dens->add_option("--digits", digits);

  auto* sym = app.add_subcommand("symmetric", "symmetry test");
  add_input(sym);
  sym->add_option("--depth", depth);

  auto* a2 = app.add_subcommand("a2", "even-parity subring semigroup");
  add_input(a2);
  a2->add_option("--bound", bound, "element bound")->required();
  a2->add_option("--gap-n", gap_n, "gap witness index");
  a2->add_option("--module-n", module_n, "module witness bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate->parsed()) return cmd_validate(input, as_json);
    if (build->parsed()) return cmd_build(input, depth, as_json);
    if (analyze->parsed()) return cmd_analyze(oracle, param, g, depth);
    if (eval->parsed()) return cmd_eval(input, poly, decimal, as_json);
    if (expand->parsed()) return cmd_expand(input, poly, order, as_json);
    if (transform->parsed()) return cmd_transform(input, steps, as_json);
    if (semi->parsed()) return cmd_semigroup(input, depth, as_json);
    if (dens->parsed()) return cmd_density(input, depth, nmax, digits, as_json);
    if (sym->parsed()) return cmd_symmetric(input, depth, as_json);
    if (a2->parsed()) return cmd_a2(input, bound, gap_n, module_n, as_json);
  } catch (const json::parse_error& e) {
    std::cerr << "JSON: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "JSON: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    errc c = e.code();
    if (c == errc::cap_exceeded || c == errc::kernel_hit) return 3;
    return 1;
  }
  return 1;
}
