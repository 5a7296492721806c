#include "stratalab/fol.hpp"

#include <cctype>

#include "stratalab/errors.hpp"
#include "stratalab/stratification.hpp"

namespace stratalab::fol {

struct Term::Node {
  TermKind kind;
  std::uint32_t id = 0;
  Nat value;
  std::string symbol;
  std::vector<Term> args;
  bool ground = true;
};

Term Term::var(std::uint32_t v) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Var;
  n->id = v;
  n->ground = false;
  return Term(std::move(n));
}

Term Term::meta(std::uint32_t m) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Meta;
  n->id = m;
  n->ground = false;
  return Term(std::move(n));
}

Term Term::num(const Nat& v) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Num;
  n->value = v;
  return Term(std::move(n));
}

Term Term::app(std::string symbol, std::vector<Term> args) {
  if (symbol == "S" && args.size() == 1 && args[0].kind() == TermKind::Num) return num(args[0].value() + 1);
  auto n = std::make_shared<Node>();
  n->kind = TermKind::App;
  n->symbol = std::move(symbol);
  for (const Term& a : args) n->ground = n->ground && a.ground();
  n->args = std::move(args);
  return Term(std::move(n));
}

TermKind Term::kind() const noexcept { return n_->kind; }
std::uint32_t Term::id() const { return n_->id; }
const Nat& Term::value() const { return n_->value; }
const std::string& Term::symbol() const { return n_->symbol; }
const std::vector<Term>& Term::args() const { return n_->args; }
bool Term::ground() const noexcept { return n_->ground; }

std::string Term::str() const {
  switch (n_->kind) {
    case TermKind::Var:
      return "v" + std::to_string(n_->id);
    case TermKind::Meta:
      return "?" + std::to_string(n_->id);
    case TermKind::Num:
      return to_decimal(n_->value);
    case TermKind::App: {
      std::string out = n_->symbol;
      if (n_->args.empty()) return out;
      out += "(";
      for (std::size_t i = 0; i < n_->args.size(); ++i) {
        if (i) out += ",";
        out += n_->args[i].str();
      }
      return out + ")";
    }
  }
  return {};
}

bool operator==(const Term& a, const Term& b) {
  if (a.n_ == b.n_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var:
    case TermKind::Meta:
      return a.id() == b.id();
    case TermKind::Num:
      return a.value() == b.value();
    case TermKind::App:
      return a.symbol() == b.symbol() && a.args() == b.args();
  }
  return false;
}

std::string Predicate::name() const {
  switch (kind) {
    case Kind::Eq:
      return "=";
    case Kind::InW:
      return "in";
    case Kind::O:
      return "O";
    case Kind::Phi:
      return "Phi";
    case Kind::Op:
      return "@" + oper.str() + "#" + to_decimal(code);
  }
  return {};
}

struct Formula::Node {
  FormulaKind kind;
  Predicate pred;
  std::vector<Term> args;
  std::vector<Formula> subs;
  std::uint32_t bound = 0;
};

Formula Formula::atom(Predicate p, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Atom;
  n->pred = std::move(p);
  n->args = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::negation(const Formula& f) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Not;
  n->subs = {f};
  return Formula(std::move(n));
}

Formula Formula::implies(const Formula& a, const Formula& b) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Implies;
  n->subs = {a, b};
  return Formula(std::move(n));
}

Formula Formula::forall(std::uint32_t v, const Formula& body) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Forall;
  n->bound = v;
  n->subs = {body};
  return Formula(std::move(n));
}

FormulaKind Formula::kind() const noexcept { return n_->kind; }
const Predicate& Formula::pred() const { return n_->pred; }
const std::vector<Term>& Formula::args() const { return n_->args; }
const Formula& Formula::sub(std::size_t i) const { return n_->subs.at(i); }
std::uint32_t Formula::bound() const { return n_->bound; }

namespace {

void print(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      out += f.pred().name();
      if (!f.args().empty()) {
        out += "(";
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) out += ",";
          out += f.args()[i].str();
        }
        out += ")";
      }
      return;
    case FormulaKind::Not:
      out += "~";
      print(f.sub(0), out);
      return;
    case FormulaKind::Implies:
      out += "(";
      print(f.sub(0), out);
      out += " -> ";
      print(f.sub(1), out);
      out += ")";
      return;
    case FormulaKind::Forall:
      out += "forall v" + std::to_string(f.bound()) + ". ";
      print(f.sub(0), out);
      return;
  }
}

}  // namespace

std::string Formula::str() const {
  std::string out;
  print(*this, out);
  return out;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::Atom:
      return a.pred() == b.pred() && a.args() == b.args();
    case FormulaKind::Not:
      return a.sub(0) == b.sub(0);
    case FormulaKind::Implies:
      return a.sub(0) == b.sub(0) && a.sub(1) == b.sub(1);
    case FormulaKind::Forall:
      return a.bound() == b.bound() && a.sub(0) == b.sub(0);
  }
  return false;
}

Term map_terms(const Term& t, const std::function<std::optional<Term>(const Term&)>& leaf) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Meta:
      if (auto r = leaf(t)) return *r;
      return t;
    case TermKind::Num:
      return t;
    case TermKind::App: {
      if (t.ground()) return t;
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(map_terms(a, leaf));
      return Term::app(t.symbol(), std::move(args));
    }
  }
  return t;
}

Formula map_terms(const Formula& f, const std::function<std::optional<Term>(const Term&)>& leaf) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const Term& a : f.args()) args.push_back(map_terms(a, leaf));
      return Formula::atom(f.pred(), std::move(args));
    }
    case FormulaKind::Not:
      return Formula::negation(map_terms(f.sub(0), leaf));
    case FormulaKind::Implies:
      return Formula::implies(map_terms(f.sub(0), leaf), map_terms(f.sub(1), leaf));
    case FormulaKind::Forall:
      return Formula::forall(f.bound(), map_terms(f.sub(0), leaf));
  }
  return f;
}

Formula instantiate(const Formula& f, std::uint32_t v, const Term& t) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return map_terms(f, [&](const Term& x) -> std::optional<Term> {
        if (x.kind() == TermKind::Var && x.id() == v) return t;
        return std::nullopt;
      });
    case FormulaKind::Not:
      return Formula::negation(instantiate(f.sub(0), v, t));
    case FormulaKind::Implies:
      return Formula::implies(instantiate(f.sub(0), v, t), instantiate(f.sub(1), v, t));
    case FormulaKind::Forall:
      if (f.bound() == v) return f;
      return Formula::forall(f.bound(), instantiate(f.sub(0), v, t));
  }
  return f;
}

Formula map_predicates(const Formula& f, const std::function<Predicate(const Predicate&)>& g) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return Formula::atom(g(f.pred()), f.args());
    case FormulaKind::Not:
      return Formula::negation(map_predicates(f.sub(0), g));
    case FormulaKind::Implies:
      return Formula::implies(map_predicates(f.sub(0), g), map_predicates(f.sub(1), g));
    case FormulaKind::Forall:
      return Formula::forall(f.bound(), map_predicates(f.sub(0), g));
  }
  return f;
}

void function_symbols(const Term& t, std::set<std::string>& out) {
  if (t.kind() == TermKind::Num && t.value() > 0) out.insert("S");
  if (t.kind() != TermKind::App) return;
  out.insert(t.symbol());
  for (const Term& a : t.args()) function_symbols(a, out);
}

namespace {

void collect_symbols(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == FormulaKind::Atom) {
    for (const Term& a : f.args()) function_symbols(a, out);
    return;
  }
  collect_symbols(f.sub(0), out);
  if (f.kind() == FormulaKind::Implies) collect_symbols(f.sub(1), out);
}

void term_vars(const Term& t, std::set<std::uint32_t>& out) {
  if (t.kind() == TermKind::Var) out.insert(t.id());
  if (t.kind() == TermKind::App) {
    for (const Term& a : t.args()) term_vars(a, out);
  }
}

void collect_free(const Formula& f, std::set<std::uint32_t> bound, std::set<std::uint32_t>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      std::set<std::uint32_t> here;
      for (const Term& a : f.args()) term_vars(a, here);
      for (std::uint32_t v : here) {
        if (!bound.count(v)) out.insert(v);
      }
      return;
    }
    case FormulaKind::Not:
      collect_free(f.sub(0), bound, out);
      return;
    case FormulaKind::Implies:
      collect_free(f.sub(0), bound, out);
      collect_free(f.sub(1), bound, out);
      return;
    case FormulaKind::Forall:
      bound.insert(f.bound());
      collect_free(f.sub(0), std::move(bound), out);
      return;
  }
}

bool has_meta(const Term& t) {
  if (t.kind() == TermKind::Meta) return true;
  if (t.kind() != TermKind::App || t.ground()) return false;
  for (const Term& a : t.args()) {
    if (has_meta(a)) return true;
  }
  return false;
}

bool has_meta(const Formula& f) {
  if (f.kind() == FormulaKind::Atom) {
    for (const Term& a : f.args()) {
      if (has_meta(a)) return true;
    }
    return false;
  }
  if (has_meta(f.sub(0))) return true;
  return f.kind() == FormulaKind::Implies && has_meta(f.sub(1));
}

}  // namespace

std::set<std::string> function_symbols(const Formula& f) {
  std::set<std::string> out;
  collect_symbols(f, out);
  return out;
}

std::set<std::uint32_t> free_vars(const Formula& f) {
  std::set<std::uint32_t> out;
  collect_free(f, {}, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty() && !has_meta(f); }

// ---------------------------------------------------------------- parsing

namespace {

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  Formula formula() {
    skip();
    if (accept("~")) return Formula::negation(formula());
    if (accept("(")) {
      Formula a = formula();
      expect("->");
      Formula b = formula();
      expect(")");
      return Formula::implies(a, b);
    }
    if (accept_word("forall")) {
      skip();
      std::size_t at = pos_;
      Term v = term();
      if (v.kind() != TermKind::Var) throw ParseError(at, "expected a variable");
      expect(".");
      return Formula::forall(v.id(), formula());
    }
    return atom();
  }

  Term term() {
    skip();
    std::size_t at = pos_;
    if (pos_ >= s_.size()) throw ParseError(at, "unexpected end of input");
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Term::num(*parse_decimal(s_.substr(at, pos_ - at)));
    }
    if (s_[pos_] == '?') {
      ++pos_;
      return Term::meta(small_number());
    }
    std::string sym = symbol();
    if (sym.size() >= 2 && sym[0] == 'v' &&
        sym.find_first_not_of("0123456789", 1) == std::string::npos) {
      auto n = parse_decimal(std::string_view(sym).substr(1));
      if (!n || *n > 0xffffffffu) throw ParseError(at, "variable index too large");
      return Term::var(n->convert_to<std::uint32_t>());
    }
    return Term::app(std::move(sym), arguments());
  }

  void finish() {
    skip();
    if (pos_ != s_.size()) throw ParseError(pos_, "trailing input");
  }

 private:
  Formula atom() {
    skip();
    std::size_t at = pos_;
    Predicate p;
    if (accept("@")) {
      std::size_t hash = s_.find('#', pos_);
      if (hash == std::string_view::npos) throw ParseError(at, "operator atom without code");
      stratalab::Formula probe =
          stratalab::parse_formula(std::string(s_.substr(pos_, hash - pos_)) + "(0=0)", Dialect::OExt);
      if (probe.kind() != stratalab::FormulaKind::Op) throw ParseError(at, "malformed operator atom");
      p.kind = Predicate::Kind::Op;
      p.oper = probe.oper();
      pos_ = hash + 1;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      auto code = parse_decimal(s_.substr(start, pos_ - start));
      if (!code) throw ParseError(start, "expected code");
      p.code = *code;
    } else {
      std::string name = symbol();
      if (name == "=") {
        p.kind = Predicate::Kind::Eq;
      } else if (name == "in") {
        p.kind = Predicate::Kind::InW;
      } else if (name == "O") {
        p.kind = Predicate::Kind::O;
      } else if (name == "Phi") {
        p.kind = Predicate::Kind::Phi;
      } else {
        throw ParseError(at, "unknown predicate '" + name + "'");
      }
    }
    return Formula::atom(std::move(p), arguments());
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      args.push_back(term());
      while (accept(",")) args.push_back(term());
      expect(")");
    }
    return args;
  }

  std::string symbol() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '(' && s_[pos_] != ')' && s_[pos_] != ',' && s_[pos_] != '.' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) throw ParseError(start, "expected a symbol");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::uint32_t small_number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    auto n = parse_decimal(s_.substr(start, pos_ - start));
    if (!n || *n > 0xffffffffu) throw ParseError(start, "expected an index");
    return n->convert_to<std::uint32_t>();
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }
  bool accept_word(std::string_view w) {
    skip();
    if (s_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '(')) return false;
    pos_ = end;
    return true;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) throw ParseError(pos_, "expected '" + std::string(tok) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Reader r(text);
  Formula f = r.formula();
  r.finish();
  return f;
}

Term parse_term(std::string_view text) {
  Reader r(text);
  Term t = r.term();
  r.finish();
  return t;
}

// ---------------------------------------------------------------- reduction

Term reduce(const stratalab::Term& t) {
  using K = stratalab::TermKind;
  switch (t.kind()) {
    case K::Num:
      return Term::num(t.value());
    case K::Var:
      return Term::var(t.var().index);
    case K::Succ:
      return Term::app("S", {reduce(t.arg(0))});
    case K::Plus:
      return Term::app("+", {reduce(t.arg(0)), reduce(t.arg(1))});
    case K::Times:
      return Term::app("*", {reduce(t.arg(0)), reduce(t.arg(1))});
    case K::Triple:
      return Term::app("<>", {reduce(t.arg(0)), reduce(t.arg(1)), reduce(t.arg(2))});
    case K::Pow2:
      return Term::app("pow2", {reduce(t.arg(0))});
    case K::Lim:
      return Term::app("lim", {reduce(t.arg(0))});
  }
  return Term::num(0);
}

Formula reduce(const stratalab::Formula& f) {
  using K = stratalab::FormulaKind;
  auto terms = [&f] {
    std::vector<Term> out;
    for (std::size_t i = 0; i < f.term_count(); ++i) out.push_back(reduce(f.term(i)));
    return out;
  };
  switch (f.kind()) {
    case K::Eq:
      return Formula::atom(Predicate{Predicate::Kind::Eq, {}, 0}, terms());
    case K::InW:
      return Formula::atom(Predicate{Predicate::Kind::InW, {}, 0}, terms());
    case K::OAtom:
      return Formula::atom(Predicate{Predicate::Kind::O, {}, 0}, terms());
    case K::PhiAtom:
      return Formula::atom(Predicate{Predicate::Kind::Phi, {}, 0}, terms());
    case K::Not:
      return Formula::negation(reduce(f.sub(0)));
    case K::Implies:
      return Formula::implies(reduce(f.sub(0)), reduce(f.sub(1)));
    case K::Forall:
      return Formula::forall(f.bound().index, reduce(f.sub(0)));
    case K::Op: {
      NormalBody nb = normalize_body(f.sub(0));
      std::vector<Term> args;
      for (Var v : nb.free) args.push_back(Term::var(v.index));
      return Formula::atom(Predicate{Predicate::Kind::Op, f.oper(), godel(nb.body)}, std::move(args));
    }
  }
  return Formula::atom(Predicate{}, {});
}

namespace {

stratalab::Formula decode_body(const Predicate& p) {
  auto body = ungodel(p.code);
  if (!body) throw PreconditionError("operator atom carries a non-code");
  return *body;
}

}  // namespace

Predicate erase(const Predicate& p) {
  if (p.kind != Predicate::Kind::Op) return p;
  return Predicate{p.kind, OperatorId::plain(p.oper.index), godel(stratalab::erase(decode_body(p)))};
}

Predicate apply_ordmap(const OrdMap& h, const Predicate& p) {
  if (p.kind != Predicate::Kind::Op || !p.oper.is_strat()) return p;
  const Ordinal* image = h.find(*p.oper.superscript);
  OperatorId k = OperatorId::strat(image ? *image : *p.oper.superscript, p.oper.index);
  return Predicate{p.kind, k, godel(stratalab::apply_ordmap(h, decode_body(p)))};
}

}  // namespace stratalab::fol
