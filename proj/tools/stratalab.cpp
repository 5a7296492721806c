#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "stratalab/entailment.hpp"
#include "stratalab/kleene_o.hpp"
#include "stratalab/model_check.hpp"
#include "stratalab/stratification.hpp"
#include "stratalab/theory.hpp"

namespace {

using namespace stratalab;
using nlohmann::json;

// Exit codes: a definite answer, an Unknown-style outcome, or an error.
constexpr int kOk = 0;
constexpr int kUnknown = 1;
constexpr int kError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

Nat parse_nat(const std::string& text) {
  auto n = parse_decimal(text);
  if (!n) throw ParseError(0, "expected a natural number, got '" + text + "'");
  return *n;
}

Dialect parse_dialect(const std::string& name) {
  if (name == "plain") return Dialect::Plain;
  if (name == "strat") return Dialect::Strat;
  if (name == "o-ext") return Dialect::OExt;
  throw ParseError(0, "unknown dialect " + name);
}

std::set<Ordinal> parse_ordinal_set(const std::string& text) {
  std::set<Ordinal> out;
  for (const auto& s : split(text, ',')) out.insert(Ordinal::parse(s));
  return out;
}

// "a:b,c:d"; ordinal literals never contain ':' or ','.
OrdMap parse_ordmap(const std::string& text) {
  std::vector<std::pair<Ordinal, Ordinal>> pairs;
  for (const auto& item : split(text, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError(0, "map entry needs a ':' in " + item);
    pairs.emplace_back(Ordinal::parse(item.substr(0, colon)), Ordinal::parse(item.substr(colon + 1)));
  }
  return OrdMap(std::move(pairs));
}

Var parse_var(const std::string& name) {
  if (name == "x") return Var{0};
  if (name == "y") return Var{1};
  if (name == "z") return Var{2};
  if (name == "u") return Var{3};
  if (name.size() > 1 && name[0] == 'v') return Var{static_cast<std::uint32_t>(std::stoul(name.substr(1)))};
  throw ParseError(0, "unknown variable " + name);
}

Assignment parse_assignment(const std::string& text) {
  Assignment s;
  for (const auto& item : split(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError(0, "assignment entry needs '=' in " + item);
    s[parse_var(item.substr(0, eq))] = parse_nat(item.substr(eq + 1));
  }
  return s;
}

// Programs on the command line: a decimal index, or a native expression such as
// compose(succ,const(3)) in which bare numbers are literal parameters.
class DescriptorReader {
 public:
  explicit DescriptorReader(std::string_view text) : text_(text) {}

  Descriptor read() {
    auto d = item();
    skip();
    if (pos_ != text_.size()) throw ParseError(pos_, "trailing input in program");
    return d;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Descriptor item() {
    skip();
    std::size_t start = pos_;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Descriptor::lit(*parse_decimal(text_.substr(start, pos_ - start)));
    }
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-'))
      ++pos_;
    if (start == pos_) throw ParseError(pos_, "expected a native name or a number");
    std::string name(text_.substr(start, pos_ - start));
    std::vector<Descriptor> args;
    skip();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      skip();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
      } else {
        for (;;) {
          args.push_back(item());
          skip();
          if (pos_ < text_.size() && text_[pos_] == ',') {
            ++pos_;
            continue;
          }
          if (pos_ < text_.size() && text_[pos_] == ')') {
            ++pos_;
            break;
          }
          throw ParseError(pos_, "expected ',' or ')'");
        }
      }
    }
    return Descriptor::native(std::move(name), std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Index parse_index(const std::string& text) {
  if (auto n = parse_decimal(text)) return *n;
  return encode(DescriptorReader(text).read());
}

// One sentence per line; blank lines and lines starting with '#' are skipped.
std::vector<Formula> load_axioms(const std::string& path) {
  std::vector<Formula> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_formula(line));
  }
  return out;
}

// {"edges": [[j, i], ...]} or {"decider": "<program>", "fuel": N}.
OrderSpec load_order(const std::string& path, const Registry& reg) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError(0, "order file is not a JSON object");
  if (j.contains("decider")) {
    const auto& d = j["decider"];
    Index e = d.is_string() ? parse_index(d.get<std::string>()) : Index(d.get<std::uint64_t>());
    return OrderSpec::programmatic(e, reg, j.value("fuel", std::uint64_t{1000}));
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>());
  return OrderSpec::explicit_edges(std::move(edges));
}

FamilySpec load_family(const std::string& path, const Registry& reg) {
  if (path.empty()) return toy_descent_spec();
  return parse_family_spec(read_file(path), &reg);
}

struct Cli {
  CLI::App app{"stratalab: stratified provability operators, certificates and ordinal notations"};
  bool as_json = false;
  Registry reg;
  std::function<int()> action;

  Cli() {
    register_theory_natives(reg);
    app.require_subcommand(1);
    app.add_flag("--json", as_json, "machine-readable output");
  }

  int emit(const std::string& text, const json& j, int code = kOk) const {
    if (as_json) std::cout << j.dump() << "\n";
    else std::cout << text << "\n";
    return code;
  }

  int emit_formula(const Formula& f) const { return emit(f.str(), json{{"formula", f.str()}}); }

  CLI::App* verb(const std::string& name, const std::string& help, std::function<int()> run) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([this, run] { action = run; });
    return sub;
  }

  void syntax_verbs();
  void ordinal_verbs();
  void stratification_verbs();
  void proof_verbs();
  void program_verbs();
  void family_verbs();
  void kleene_verbs();
};

void Cli::syntax_verbs() {
  static std::string text, dialect = "o-ext", decode;
  auto* p = verb("parse", "print the canonical form of a formula", [this] {
    Formula f = parse_formula(text, parse_dialect(dialect));
    json fv = json::array();
    for (const auto& v : free_vars(f)) fv.push_back(v.name());
    return emit(f.str(), json{{"formula", f.str()}, {"free_vars", fv}, {"godel", to_decimal(godel(f))}});
  });
  p->add_option("formula", text)->required();
  p->add_option("--dialect", dialect, "plain, strat or o-ext")->capture_default_str();

  static std::string gtext;
  auto* g = verb("godel", "Godel number of a formula, or the formula of a number with --decode", [this] {
    if (!decode.empty()) {
      auto f = ungodel(parse_nat(decode));
      if (!f) return emit("not a formula code", json{{"formula", nullptr}}, kError);
      return emit_formula(*f);
    }
    if (gtext.empty()) throw ParseError(0, "godel needs a formula or --decode");
    auto n = to_decimal(godel(parse_formula(gtext)));
    return emit(n, json{{"godel", n}});
  });
  g->add_option("formula", gtext);
  g->add_option("--decode", decode);

  static std::vector<std::string> parts;
  static std::string untriple_of;
  auto* t = verb("triple", "<a,b,c>, or its components with --decode", [this] {
    if (!untriple_of.empty()) {
      auto c = untriple(parse_nat(untriple_of));
      return emit(to_decimal(c.a) + " " + to_decimal(c.b) + " " + to_decimal(c.c),
                  json{{"a", to_decimal(c.a)}, {"b", to_decimal(c.b)}, {"c", to_decimal(c.c)}});
    }
    if (parts.size() != 3) throw ParseError(0, "triple needs three naturals");
    auto n = to_decimal(triple(parse_nat(parts[0]), parse_nat(parts[1]), parse_nat(parts[2])));
    return emit(n, json{{"triple", n}});
  });
  t->add_option("components", parts);
  t->add_option("--decode", untriple_of);
}

void Cli::ordinal_verbs() {
  static std::string a, b;
  auto* c = verb("ordcmp", "compare two ordinals", [this] {
    auto r = to_string(ord_cmp(Ordinal::parse(a), Ordinal::parse(b)));
    return emit(r, json{{"cmp", r}});
  });
  c->add_option("alpha", a)->required();
  c->add_option("beta", b)->required();

  auto* l = verb("le1", "certified <=_1 between two ordinals", [this] {
    auto v = le1(Ordinal::parse(a), Ordinal::parse(b));
    return emit(to_string(v), json{{"le1", to_string(v)}}, v == Le1Verdict::Unknown ? kUnknown : kOk);
  });
  l->add_option("alpha", a)->required();
  l->add_option("beta", b)->required();
}

void Cli::stratification_verbs() {
  static std::string text, prefix, map, alpha, axioms;
  static std::uint64_t index = 0;
  static bool very = false;

  auto* s = verb("stratified", "is the formula i-stratified (very i-stratified with --very)", [this] {
    Formula f = parse_formula(text, Dialect::Strat);
    bool r = very ? is_very_i_stratified(f, index) : is_i_stratified(f, index);
    return emit(r ? "true" : "false", json{{"stratified", r}});
  });
  s->add_option("formula", text)->required();
  s->add_option("--i", index)->required();
  s->add_flag("--very", very);

  auto* v = verb("veristratify", "rename the superscripts of an i-stratified formula to e0*1, e0*2, ...",
                 [this] { return emit_formula(canonical_veristratified(parse_formula(text, Dialect::Strat), index)); });
  v->add_option("formula", text)->required();
  v->add_option("--i", index)->required();

  auto* st = verb("stratify", "apply an i-stratifier to a plain formula", [this] {
    Formula f = parse_formula(text, Dialect::Plain);
    Stratifier s = prefix.empty() ? Stratifier::veristratifier(index)
                                  : Stratifier::prefix_then_all(index, parse_ordinal_set(prefix));
    return emit_formula(apply_stratifier(s, f));
  });
  st->add_option("formula", text)->required();
  st->add_option("--i", index)->required();
  st->add_option("--prefix", prefix, "X = prefix and everything above it; default the veristratifier");

  auto* om = verb("ordmap", "apply a finite order-preserving map to the superscripts",
                  [this] { return emit_formula(apply_ordmap(parse_ordmap(map), parse_formula(text, Dialect::Strat))); });
  om->add_option("formula", text)->required();
  om->add_option("--map", map, "a:b,c:d")->required();

  auto* e = verb("erase", "drop every superscript",
                 [this] { return emit_formula(erase(parse_formula(text, Dialect::Strat))); });
  e->add_option("formula", text)->required();

  auto* lf = verb("lift", "veristratify a plain formula on index i",
                  [this] { return emit_formula(lift_valid(parse_formula(text, Dialect::Plain), index)); });
  lf->add_option("formula", text)->required();
  lf->add_option("--i", index)->required();

  auto* c = verb("cut", "the axioms whose superscripts all lie below alpha", [this] {
    auto kept = theory_cut(AxiomStream::from_sentences(load_axioms(axioms), "file"), Ordinal::parse(alpha));
    std::string text_out;
    json arr = json::array();
    while (auto a = kept.next()) {
      text_out += (text_out.empty() ? "" : "\n") + a->sentence.str();
      arr.push_back(a->sentence.str());
    }
    if (as_json) std::cout << json{{"axioms", arr}}.dump() << "\n";
    else if (!text_out.empty()) std::cout << text_out << "\n";
    return kOk;
  });
  c->add_option("--axioms", axioms, "one sentence per line")->required();
  c->add_option("--alpha", alpha)->required();
}

void Cli::proof_verbs() {
  static std::string text, axioms, goal, out, cert_path, alpha, beta;
  static std::size_t budget = 2000;
  static std::uint64_t index = 0, n = 1;

  auto report = [this](const ProveVerdict& v) {
    if (!v.proved()) return emit("unknown", json{{"verdict", "unknown"}, {"expansions", v.expansions}}, kUnknown);
    auto body = certificate_to_json(*v.certificate);
    if (!out.empty()) {
      write_file(out, body);
      return emit(out, json{{"verdict", "proved"}, {"expansions", v.expansions}, {"certificate", out}});
    }
    return emit(body, json{{"verdict", "proved"}, {"expansions", v.expansions}, {"certificate", json::parse(body)}});
  };
  auto write_cert = [this](const ProofCertificate& c) {
    auto body = certificate_to_json(c);
    if (!out.empty()) {
      write_file(out, body);
      return emit(out, json{{"certificate", out}});
    }
    return emit(body, json{{"certificate", json::parse(body)}});
  };

  auto* v = verb("valid", "search for a validity proof", [report] { return report(prove_valid(parse_formula(text), budget)); });
  v->add_option("formula", text)->required();
  v->add_option("--budget", budget, "tableau expansions")->capture_default_str();
  v->add_option("--out", out, "write the certificate here and print the path");

  auto* e = verb("entail", "search for a proof of the goal from an axiom file", [report] {
    return report(entails(load_axioms(axioms), parse_formula(goal), budget));
  });
  e->add_option("--axioms", axioms, "one sentence per line")->required();
  e->add_option("--goal", goal)->required();
  e->add_option("--budget", budget, "tableau expansions")->capture_default_str();
  e->add_option("--out", out, "write the certificate here and print the path");

  auto* c = verb("check-cert", "re-check a certificate without search", [this] {
    auto cert = certificate_from_json(read_file(cert_path));
    std::string why;
    bool ok = check_certificate(cert, &why);
    return emit(ok ? "ok" : "rejected: " + why, json{{"ok", ok}, {"why", why}}, ok ? kOk : kUnknown);
  });
  c->add_option("certificate", cert_path)->required()->check(CLI::ExistingFile);

  auto* cc = verb("collapse-cert", "move superscripts at or above e0*n below it", [this, write_cert] {
    auto r = collapse_certificate(certificate_from_json(read_file(cert_path)), n, index);
    if (!r) return emit("unknown", json{{"verdict", "unknown"}}, kUnknown);
    return write_cert(*r);
  });
  cc->add_option("certificate", cert_path)->required()->check(CLI::ExistingFile);
  cc->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  cc->add_option("--i", index)->required();
  cc->add_option("--out", out);

  auto* in = verb("internalize", "from T n alpha |= phi build T n beta |= K[i]^{alpha} phi", [write_cert] {
    StratifiedSchemaSupply supply;
    return write_cert(internalize(certificate_from_json(read_file(cert_path)), Ordinal::parse(alpha),
                                  Ordinal::parse(beta), index, supply, budget * 10));
  });
  in->add_option("certificate", cert_path)->required()->check(CLI::ExistingFile);
  in->add_option("--alpha", alpha)->required();
  in->add_option("--beta", beta)->required();
  in->add_option("--i", index)->required();
  in->add_option("--budget", budget, "per lemma, times ten")->capture_default_str();
  in->add_option("--out", out);
}

void Cli::program_verbs() {
  static std::string program, arg;
  static std::uint64_t budget = 2000;

  auto* s = verb("smn", "index of x -> phi_e(pair(a, x))", [this] {
    auto r = to_decimal(smn(parse_index(program), parse_nat(arg)));
    return emit(r, json{{"index", r}});
  });
  s->add_option("program", program, "decimal index or native expression")->required();
  s->add_option("a", arg)->required();

  auto* f = verb("fixpoint", "n with phi_n = phi_{phi_f(n)}", [this] {
    auto r = to_decimal(fixpoint(parse_index(program)));
    return emit(r, json{{"index", r}});
  });
  f->add_option("program", program, "decimal index or native expression")->required();

  auto* w = verb("we-enum", "members of W_e found by dovetailing", [this] {
    auto found = we_enumerate(reg, parse_index(program), budget);
    std::string text;
    json arr = json::array();
    for (const auto& m : found) {
      text += (text.empty() ? "" : " ") + to_decimal(m);
      arr.push_back(to_decimal(m));
    }
    return emit(text, json{{"members", arr}});
  });
  w->add_option("program", program, "decimal index or native expression")->required();
  w->add_option("--budget", budget, "dovetailing steps")->capture_default_str();
}

void Cli::family_verbs() {
  static std::string config, text, n_text, codes, assign;
  static std::size_t take = 8;
  static std::optional<std::uint64_t> only;

  auto family_n = [this](const FamilySpec& cfg) { return n_text.empty() ? fixed_point_theory(cfg, reg).n : parse_nat(n_text); };

  auto* b = verb("family-build", "the first axioms of each T_i(n)", [this, family_n] {
    auto cfg = load_family(config, reg);
    auto fam = build_T_of_n(cfg, family_n(cfg));
    json out = json::object();
    for (auto i : fam.indices) {
      if (only && *only != i) continue;
      json arr = json::array();
      for (const auto& a : fam.open(i).take(take)) {
        arr.push_back(json{{"provenance", a.provenance}, {"sentence", a.sentence.str()}});
        if (!as_json) std::cout << i << " [" << a.provenance << "] " << a.sentence.str() << "\n";
      }
      out[std::to_string(i)] = arr;
    }
    if (as_json) std::cout << out.dump() << "\n";
    return kOk;
  });
  b->add_option("--config", config, "family.json; default the toy descent family");
  b->add_option("--n", n_text, "theory enumerator index; default the fixed point");
  b->add_option("--take", take)->capture_default_str();
  b->add_option("--i", only, "only this index");

  auto* fp = verb("family-fixpoint", "n with W_n = W_{f(n)} for the theory transformer f", [this] {
    auto r = fixed_point_theory(load_family(config, reg), reg);
    return emit(to_decimal(r.n), json{{"n", to_decimal(r.n)}, {"transformer", to_decimal(r.transformer)}});
  });
  fp->add_option("--config", config);

  auto* d = verb("family-dump", "canonical JSON of a family configuration", [this] {
    auto text_out = family_spec_to_json(load_family(config, reg));
    std::cout << text_out << "\n";
    return kOk;
  });
  d->add_option("--config", config);

  auto* m = verb("model-check", "three-valued truth in the intended structure", [this] {
    auto cfg = load_family(config, reg);
    auto fp = fixed_point_theory(cfg, reg);
    OTable table(reg);
    for (std::size_t k = 0; k <= 5; ++k) table.insert(succ_chain(k));
    IntendedStructure ms;
    ms.registry = &reg;
    ms.theory = fp.family.open;
    ms.o_atom = [&table](const Term& t) { return table.lookup(t); };
    if (cfg.mode == FamilyMode::SelfTruth) {
      auto strat = stratify_family(build_U(cfg, fp.n));
      ms.strat_theory = strat.cut;
    }
    ModelCheckBudget mb;
    mb.entail = cfg.budgets.entail;
    mb.fuel = cfg.budgets.fuel;
    mb.sample = cfg.budgets.sample;
    auto v = model_check(ms, parse_formula(text), parse_assignment(assign), mb);
    return emit(to_string(v), json{{"verdict", to_string(v)}}, v == IntendedVerdict::Unknown ? kUnknown : kOk);
  });
  m->add_option("formula", text)->required();
  m->add_option("--config", config);
  m->add_option("--assign", assign, "v0=3,x=2");

  auto* t = verb("fu-translate", "arithmetic rendering of a plain formula", [this] {
    std::map<std::uint64_t, Index> code_map;
    if (!codes.empty()) {
      for (const auto& item : split(codes, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw ParseError(0, "code entry needs ':' in " + item);
        code_map[std::stoull(item.substr(0, colon))] = parse_index(item.substr(colon + 1));
      }
    } else {
      auto cfg = load_family(config, reg);
      auto fp = fixed_point_theory(cfg, reg);
      for (auto i : cfg.indices) code_map[i] = fp.n;
    }
    return emit_formula(fu_translate(parse_formula(text, Dialect::Plain), code_map));
  });
  t->add_option("formula", text)->required();
  t->add_option("--codes", codes, "i:e,...; default every index of the family maps to its fixed point");
  t->add_option("--config", config);
}

void Cli::kleene_verbs() {
  static std::string cert_text, config, variant = "standard", out, order_path, decider;
  static std::optional<std::size_t> chain;
  static std::size_t limit = 4, take = 12, budget = 4096, depth = 5, width = 10;
  static std::uint64_t upper = 0, lower = 1, fuel = 1000;

  auto* v = verb("o-value", "ordinal denoted by a certified notation", [this] {
    OCert c = chain ? succ_chain(*chain) : OCert::deserialize(cert_text);
    auto r = o_value(reg, c);
    auto text_out = (r.exact ? "" : "at least ") + r.value.str();
    return emit(text_out, json{{"value", r.value.str()}, {"exact", r.exact}});
  });
  v->add_option("certificate", cert_text, "serialized notation certificate");
  v->add_option("--chain", chain, "use the Succ chain of this length");

  auto* ax = verb("o-axioms", "the basic notation axioms", [this] {
    auto var = variant == "w-subset" ? OVariant::WSubset : OVariant::Standard;
    if (variant != "standard" && variant != "w-subset") throw ParseError(0, "unknown variant " + variant);
    json arr = json::array();
    for (const auto& a : basic_o_axioms(limit, var).take(take)) {
      arr.push_back(a.sentence.str());
      if (!as_json) std::cout << a.sentence.str() << "\n";
    }
    if (as_json) std::cout << json{{"axioms", arr}}.dump() << "\n";
    return kOk;
  });
  ax->add_option("--limit", limit)->capture_default_str();
  ax->add_option("--take", take)->capture_default_str();
  ax->add_option("--variant", variant, "standard or w-subset")->capture_default_str();

  auto* nl = verb("norm-lb", "certified lower bound on the norm of T_i", [this] {
    auto cfg = load_family(config, reg);
    auto fp = fixed_point_theory(cfg, reg);
    auto est = theory_norm_lb(reg, [&] { return fp.family.open(upper); }, budget);
    json basis = json::array();
    std::string text_out = est.lower.str();
    for (const auto& e : est.basis) {
      basis.push_back(json{{"notation", e.notation.str()}, {"value", e.value.value.str()}});
      text_out += "\n  O(" + e.notation.str() + ") value " + e.value.value.str();
    }
    return emit(text_out, json{{"lower", est.lower.str()}, {"basis", basis}});
  });
  nl->add_option("--config", config, "default the toy descent family");
  nl->add_option("--i", upper, "theory index")->capture_default_str();
  nl->add_option("--budget", budget)->capture_default_str();

  auto* d = verb("descent", "certify that j < i forces a smaller norm for T_j", [this] {
    auto fam = make_descent_family(load_family(config, reg), upper, lower, reg);
    auto r = descent_check(fam, reg, budget);
    if (!r.confirmed()) return emit("unknown", json{{"verdict", "unknown"}}, kUnknown);
    std::string why;
    bool ok = check_descent_evidence(fam, reg, *r.evidence, &why);
    if (!ok) throw Error("evidence failed its own re-check: " + why);
    auto bundle = descent_evidence_to_json(*r.evidence);
    if (!out.empty()) write_file(out, bundle);
    const auto& ev = *r.evidence;
    std::string text_out = "confirmed\nlower " + ev.lower_norm.lower.str() + " limit " + ev.limit_value.value.str();
    if (!out.empty()) text_out += "\nevidence " + out;
    return emit(text_out, json{{"verdict", "confirmed"}, {"evidence", json::parse(bundle)}});
  });
  d->add_option("--config", config, "default the toy descent family");
  d->add_option("--i", upper)->capture_default_str();
  d->add_option("--j", lower)->capture_default_str();
  d->add_option("--budget", budget)->capture_default_str();
  d->add_option("--out", out, "write the evidence bundle here");

  auto* wf = verb("wf-check", "bounded search for a descending chain", [this] {
    OrderSpec order = !decider.empty() ? OrderSpec::programmatic(parse_index(decider), reg, fuel)
                      : !order_path.empty() ? load_order(order_path, reg)
                                            : throw ParseError(0, "wf-check needs --order or --decider");
    auto r = wf_check(order, depth, width);
    if (!r.chain) return emit("no chain", json{{"chain", nullptr}});
    std::string text_out;
    for (auto i : *r.chain) text_out += (text_out.empty() ? "" : " ") + std::to_string(i);
    return emit(text_out, json{{"chain", *r.chain}});
  });
  wf->add_option("--order", order_path, "edges.json")->check(CLI::ExistingFile);
  wf->add_option("--decider", decider, "program deciding pair(j, i) -> j < i");
  wf->add_option("--fuel", fuel)->capture_default_str();
  wf->add_option("--depth", depth)->capture_default_str();
  wf->add_option("--width", width)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  cli.syntax_verbs();
  cli.ordinal_verbs();
  cli.stratification_verbs();
  cli.proof_verbs();
  cli.program_verbs();
  cli.family_verbs();
  cli.kleene_verbs();
  try {
    cli.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = cli.app.exit(e);
    return code == 0 ? kOk : kError;
  }
  try {
    return cli.action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
