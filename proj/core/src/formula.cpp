#include "stratalab/formula.hpp"

#include <algorithm>
#include <functional>

#include "stratalab/errors.hpp"

namespace stratalab {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t nat_hash(const Nat& n) {
  std::size_t h = 0x51ed27;
  for (auto b : to_bytes_be(n)) h = mix(h, b);
  return h;
}

}  // namespace

// ---------------------------------------------------------------- terms

struct Term::Node {
  TermKind kind;
  Nat value;
  std::uint32_t var = 0;
  std::vector<Term> args;
  std::size_t hash = 0;
  bool closed = true;
};

namespace {

template <class NodeT>
std::shared_ptr<NodeT> seal_term(std::shared_ptr<NodeT> n) {
  std::size_t h = mix(0x7e57, static_cast<std::size_t>(n->kind));
  if (n->kind == TermKind::Num) h = mix(h, nat_hash(n->value));
  if (n->kind == TermKind::Var) {
    h = mix(h, n->var);
    n->closed = false;
  }
  for (const auto& a : n->args) {
    h = mix(h, a.hash());
    n->closed = n->closed && a.is_closed();
  }
  n->hash = h;
  return n;
}

}  // namespace

Term Term::num(const Nat& n) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Num;
  node->value = n;
  return Term(seal_term(node));
}

Term Term::succ(const Term& t) {
  if (t.kind() == TermKind::Num) return num(t.value() + 1);
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Succ;
  node->args = {t};
  return Term(seal_term(node));
}

struct TermFactory {
  static Term make(TermKind k, std::vector<Term> args) {
    auto node = std::make_shared<Term::Node>();
    node->kind = k;
    node->args = std::move(args);
    return Term(seal_term(node));
  }
  static Term make_var(std::uint32_t v) {
    auto node = std::make_shared<Term::Node>();
    node->kind = TermKind::Var;
    node->var = v;
    return Term(seal_term(node));
  }
};

namespace {
Term make_compound(TermKind k, std::vector<Term> args) { return TermFactory::make(k, std::move(args)); }
}  // namespace

Term Term::plus(const Term& a, const Term& b) { return make_compound(TermKind::Plus, {a, b}); }
Term Term::times(const Term& a, const Term& b) { return make_compound(TermKind::Times, {a, b}); }
Term Term::triple(const Term& a, const Term& b, const Term& c) {
  return make_compound(TermKind::Triple, {a, b, c});
}
Term Term::var(Var v) { return TermFactory::make_var(v.index); }
Term Term::pow2(const Term& t) { return make_compound(TermKind::Pow2, {t}); }
Term Term::lim(const Term& t) { return make_compound(TermKind::Lim, {t}); }

TermKind Term::kind() const noexcept { return n_->kind; }
const Nat& Term::value() const {
  if (n_->kind != TermKind::Num) throw PreconditionError("term is not a numeral");
  return n_->value;
}
Var Term::var() const {
  if (n_->kind != TermKind::Var) throw PreconditionError("term is not a variable");
  return Var{n_->var};
}
std::size_t Term::arity() const noexcept { return n_->args.size(); }
const Term& Term::arg(std::size_t i) const { return n_->args.at(i); }
bool Term::is_closed() const noexcept { return n_->closed; }
std::size_t Term::hash() const noexcept { return n_->hash; }

bool operator==(const Term& a, const Term& b) {
  if (a.n_ == b.n_) return true;
  if (a.n_->hash != b.n_->hash || a.n_->kind != b.n_->kind) return false;
  switch (a.n_->kind) {
    case TermKind::Num: return a.n_->value == b.n_->value;
    case TermKind::Var: return a.n_->var == b.n_->var;
    default: return a.n_->args == b.n_->args;
  }
}

namespace {

// Numerals below this print as S-chains, the rest in decimal.
constexpr unsigned kSuccPrintLimit = 4;

void print_term(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Num: {
      const Nat& v = t.value();
      if (v < kSuccPrintLimit) {
        unsigned n = v.convert_to<unsigned>();
        for (unsigned i = 0; i < n; ++i) out += "S(";
        out += "0";
        out.append(n, ')');
      } else {
        out += to_decimal(v);
      }
      return;
    }
    case TermKind::Succ:
      out += "S(";
      print_term(t.arg(0), out);
      out += ")";
      return;
    case TermKind::Plus:
    case TermKind::Times:
      out += "(";
      print_term(t.arg(0), out);
      out += t.kind() == TermKind::Plus ? "+" : "*";
      print_term(t.arg(1), out);
      out += ")";
      return;
    case TermKind::Triple:
      out += "<";
      print_term(t.arg(0), out);
      out += ",";
      print_term(t.arg(1), out);
      out += ",";
      print_term(t.arg(2), out);
      out += ">";
      return;
    case TermKind::Var:
      out += t.var().name();
      return;
    case TermKind::Pow2:
    case TermKind::Lim:
      out += t.kind() == TermKind::Pow2 ? "pow2(" : "lim(";
      print_term(t.arg(0), out);
      out += ")";
      return;
  }
}

}  // namespace

std::string Term::str() const {
  std::string out;
  print_term(*this, out);
  return out;
}

Term numeral(const Nat& n) { return Term::num(n); }

// ---------------------------------------------------------------- operators

std::string OperatorId::str() const {
  std::string out = "K[" + std::to_string(index) + "]";
  if (superscript) out += "^{" + superscript->str() + "}";
  return out;
}

std::strong_ordering operator<=>(const OperatorId& a, const OperatorId& b) {
  if (auto c = a.index <=> b.index; c != 0) return c;
  if (a.superscript.has_value() != b.superscript.has_value())
    return a.superscript.has_value() ? std::strong_ordering::greater : std::strong_ordering::less;
  if (!a.superscript) return std::strong_ordering::equal;
  return *a.superscript <=> *b.superscript;
}

// ---------------------------------------------------------------- formulas

struct Formula::Node {
  FormulaKind kind;
  std::vector<Term> terms;
  std::vector<Formula> subs;
  Var bound{};
  OperatorId op{};
  std::size_t hash = 0;
  std::size_t size = 1;
};

struct FormulaFactory {
  static Formula make(FormulaKind k, std::vector<Term> terms, std::vector<Formula> subs, Var bound = {},
                      OperatorId op = {}) {
    auto n = std::make_shared<Formula::Node>();
    n->kind = k;
    n->terms = std::move(terms);
    n->subs = std::move(subs);
    n->bound = bound;
    n->op = std::move(op);
    std::size_t h = mix(0xf0f0, static_cast<std::size_t>(k));
    std::size_t size = 1;
    for (const auto& t : n->terms) {
      h = mix(h, t.hash());
      size += 1;
    }
    for (const auto& s : n->subs) {
      h = mix(h, s.hash());
      size += s.size();
    }
    if (k == FormulaKind::Forall) h = mix(h, bound.index);
    if (k == FormulaKind::Op) {
      h = mix(h, n->op.index);
      if (n->op.superscript) h = mix(h, std::hash<Ordinal>{}(*n->op.superscript) | 1);
    }
    n->hash = h;
    n->size = size;
    return Formula(std::move(n));
  }
};

Formula Formula::eq(const Term& a, const Term& b) { return FormulaFactory::make(FormulaKind::Eq, {a, b}, {}); }
Formula Formula::in_w(const Term& x, const Term& e) {
  return FormulaFactory::make(FormulaKind::InW, {x, e}, {});
}
Formula Formula::o_atom(const Term& t) { return FormulaFactory::make(FormulaKind::OAtom, {t}, {}); }
Formula Formula::phi_atom(const Term& e, const Term& x, const Term& y) {
  return FormulaFactory::make(FormulaKind::PhiAtom, {e, x, y}, {});
}
Formula Formula::negation(const Formula& f) { return FormulaFactory::make(FormulaKind::Not, {}, {f}); }
Formula Formula::implies(const Formula& a, const Formula& b) {
  return FormulaFactory::make(FormulaKind::Implies, {}, {a, b});
}
Formula Formula::forall(Var v, const Formula& body) {
  return FormulaFactory::make(FormulaKind::Forall, {}, {body}, v);
}
Formula Formula::op(const OperatorId& k, const Formula& body) {
  return FormulaFactory::make(FormulaKind::Op, {}, {body}, {}, k);
}

Formula Formula::conj(const Formula& a, const Formula& b) { return negation(implies(a, negation(b))); }
Formula Formula::disj(const Formula& a, const Formula& b) { return implies(negation(a), b); }
Formula Formula::iff(const Formula& a, const Formula& b) { return conj(implies(a, b), implies(b, a)); }
Formula Formula::exists(Var v, const Formula& body) { return negation(forall(v, negation(body))); }
Formula Formula::chain(const std::vector<Formula>& premises, const Formula& goal) {
  Formula out = goal;
  for (auto it = premises.rbegin(); it != premises.rend(); ++it) out = implies(*it, out);
  return out;
}

FormulaKind Formula::kind() const noexcept { return n_->kind; }
bool Formula::is_atomic() const noexcept {
  auto k = n_->kind;
  return k == FormulaKind::Eq || k == FormulaKind::InW || k == FormulaKind::OAtom || k == FormulaKind::PhiAtom;
}
const Term& Formula::term(std::size_t i) const { return n_->terms.at(i); }
std::size_t Formula::term_count() const noexcept { return n_->terms.size(); }
const Formula& Formula::sub(std::size_t i) const { return n_->subs.at(i); }
Var Formula::bound() const {
  if (n_->kind != FormulaKind::Forall) throw PreconditionError("formula is not a quantifier");
  return n_->bound;
}
const OperatorId& Formula::oper() const {
  if (n_->kind != FormulaKind::Op) throw PreconditionError("formula is not an operator application");
  return n_->op;
}
std::size_t Formula::hash() const noexcept { return n_->hash; }
std::size_t Formula::size() const noexcept { return n_->size; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  const auto& x = *a.n_;
  const auto& y = *b.n_;
  if (x.hash != y.hash || x.kind != y.kind) return false;
  if (x.kind == FormulaKind::Forall && x.bound != y.bound) return false;
  if (x.kind == FormulaKind::Op && !(x.op == y.op)) return false;
  return x.terms == y.terms && x.subs == y.subs;
}

namespace {

void print_formula(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Eq:
      out += "(";
      out += f.term(0).str();
      out += "=";
      out += f.term(1).str();
      out += ")";
      return;
    case FormulaKind::InW:
      out += "(";
      out += f.term(0).str();
      out += " in W[";
      out += f.term(1).str();
      out += "])";
      return;
    case FormulaKind::OAtom:
      out += "O(" + f.term(0).str() + ")";
      return;
    case FormulaKind::PhiAtom:
      out += "Phi(" + f.term(0).str() + "," + f.term(1).str() + "," + f.term(2).str() + ")";
      return;
    case FormulaKind::Not:
      out += "~";
      print_formula(f.sub(0), out);
      return;
    case FormulaKind::Implies:
      out += "(";
      print_formula(f.sub(0), out);
      out += " -> ";
      print_formula(f.sub(1), out);
      out += ")";
      return;
    case FormulaKind::Forall:
      out += "forall " + f.bound().name() + ". ";
      print_formula(f.sub(0), out);
      return;
    case FormulaKind::Op:
      out += f.oper().str();
      print_formula(f.sub(0), out);
      return;
  }
}

}  // namespace

std::string Formula::str() const {
  std::string out;
  print_formula(*this, out);
  return out;
}

// ---------------------------------------------------------------- variables

namespace {

void collect_free(const Term& t, std::set<Var>& out) {
  if (t.is_closed()) return;
  if (t.kind() == TermKind::Var) {
    out.insert(t.var());
    return;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) collect_free(t.arg(i), out);
}

void collect_free(const Formula& f, std::set<Var>& bound, std::set<Var>& out) {
  if (f.is_atomic()) {
    std::set<Var> here;
    for (std::size_t i = 0; i < f.term_count(); ++i) collect_free(f.term(i), here);
    for (const auto& v : here)
      if (!bound.count(v)) out.insert(v);
    return;
  }
  if (f.kind() == FormulaKind::Forall) {
    bool fresh = bound.insert(f.bound()).second;
    collect_free(f.sub(0), bound, out);
    if (fresh) bound.erase(f.bound());
    return;
  }
  collect_free(f.sub(0), bound, out);
  if (f.kind() == FormulaKind::Implies) collect_free(f.sub(1), bound, out);
}

std::uint32_t max_index(const Term& t) {
  if (t.is_closed()) return 0;
  if (t.kind() == TermKind::Var) return t.var().index + 1;
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < t.arity(); ++i) m = std::max(m, max_index(t.arg(i)));
  return m;
}

}  // namespace

std::set<Var> free_vars(const Term& t) {
  std::set<Var> out;
  collect_free(t, out);
  return out;
}

std::set<Var> free_vars(const Formula& f) {
  std::set<Var> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::uint32_t fresh_index(const Formula& f) {
  std::uint32_t m = 0;
  if (f.is_atomic()) {
    for (std::size_t i = 0; i < f.term_count(); ++i) m = std::max(m, max_index(f.term(i)));
    return m;
  }
  if (f.kind() == FormulaKind::Forall) m = f.bound().index + 1;
  m = std::max(m, fresh_index(f.sub(0)));
  if (f.kind() == FormulaKind::Implies) m = std::max(m, fresh_index(f.sub(1)));
  return m;
}

// ---------------------------------------------------------------- substitution

namespace {

Term rebuild_term(const Term& t, std::vector<Term> args) {
  switch (t.kind()) {
    case TermKind::Succ: return Term::succ(args[0]);
    case TermKind::Plus: return Term::plus(args[0], args[1]);
    case TermKind::Times: return Term::times(args[0], args[1]);
    case TermKind::Triple: return Term::triple(args[0], args[1], args[2]);
    case TermKind::Pow2: return Term::pow2(args[0]);
    case TermKind::Lim: return Term::lim(args[0]);
    default: return t;
  }
}

Formula rebuild_atom(const Formula& f, const std::vector<Term>& ts) {
  switch (f.kind()) {
    case FormulaKind::Eq: return Formula::eq(ts[0], ts[1]);
    case FormulaKind::InW: return Formula::in_w(ts[0], ts[1]);
    case FormulaKind::OAtom: return Formula::o_atom(ts[0]);
    case FormulaKind::PhiAtom: return Formula::phi_atom(ts[0], ts[1], ts[2]);
    default: return f;
  }
}

}  // namespace

Term substitute(const Term& t, Var x, const Term& replacement) {
  if (t.is_closed()) return t;
  if (t.kind() == TermKind::Var) return t.var() == x ? replacement : t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    args.push_back(substitute(t.arg(i), x, replacement));
    changed = changed || !(args.back() == t.arg(i));
  }
  return changed ? rebuild_term(t, std::move(args)) : t;
}

namespace {

Formula subst_rec(const Formula& f, Var x, const Term& t, const std::set<Var>& t_vars, bool rename,
                  std::uint32_t& next_fresh) {
  if (f.is_atomic()) {
    std::vector<Term> ts;
    for (std::size_t i = 0; i < f.term_count(); ++i) ts.push_back(substitute(f.term(i), x, t));
    return rebuild_atom(f, ts);
  }
  switch (f.kind()) {
    case FormulaKind::Not: return Formula::negation(subst_rec(f.sub(0), x, t, t_vars, rename, next_fresh));
    case FormulaKind::Implies:
      return Formula::implies(subst_rec(f.sub(0), x, t, t_vars, rename, next_fresh),
                              subst_rec(f.sub(1), x, t, t_vars, rename, next_fresh));
    case FormulaKind::Op: return Formula::op(f.oper(), subst_rec(f.sub(0), x, t, t_vars, rename, next_fresh));
    case FormulaKind::Forall: {
      Var y = f.bound();
      if (y == x) return f;
      if (!free_vars(f.sub(0)).count(x)) return f;
      Formula body = f.sub(0);
      if (t_vars.count(y)) {
        if (!rename) throw CaptureError("substituting " + t.str() + " for " + x.name() + " captures " + y.name());
        Var z{next_fresh++};
        body = subst_rec(body, y, Term::var(z), {z}, rename, next_fresh);
        y = z;
      }
      return Formula::forall(y, subst_rec(body, x, t, t_vars, rename, next_fresh));
    }
    default: return f;
  }
}

}  // namespace

Formula substitute(const Formula& f, Var x, const Term& t, bool rename_bound) {
  std::set<Var> t_vars = free_vars(t);
  std::uint32_t next = std::max(fresh_index(f), static_cast<std::uint32_t>(0));
  for (const auto& v : t_vars) next = std::max(next, v.index + 1);
  next = std::max(next, x.index + 1);
  return subst_rec(f, x, t, t_vars, rename_bound, next);
}

Formula assign_substitute(const Formula& f, const Assignment& s) {
  Formula out = f;
  for (const auto& v : free_vars(f)) {
    auto it = s.find(v);
    if (it == s.end()) throw PreconditionError("assignment undefined on free variable " + v.name());
    out = substitute(out, v, numeral(it->second));
  }
  return out;
}

Formula universal_closure(const Formula& f) {
  auto fv = free_vars(f);
  Formula out = f;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) out = Formula::forall(*it, out);
  return out;
}

// ---------------------------------------------------------------- alpha equivalence

namespace {

using Env = std::vector<std::pair<Var, Var>>;

bool term_alpha(const Term& a, const Term& b, const Env& env) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Num: return a.value() == b.value();
    case TermKind::Var: {
      Var va = a.var(), vb = b.var();
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        bool ma = it->first == va, mb = it->second == vb;
        if (ma || mb) return ma && mb;
      }
      return va == vb;
    }
    default:
      if (a.arity() != b.arity()) return false;
      for (std::size_t i = 0; i < a.arity(); ++i)
        if (!term_alpha(a.arg(i), b.arg(i), env)) return false;
      return true;
  }
}

bool formula_alpha(const Formula& a, const Formula& b, Env& env) {
  if (a.kind() != b.kind()) return false;
  if (a.is_atomic()) {
    for (std::size_t i = 0; i < a.term_count(); ++i)
      if (!term_alpha(a.term(i), b.term(i), env)) return false;
    return true;
  }
  switch (a.kind()) {
    case FormulaKind::Not: return formula_alpha(a.sub(0), b.sub(0), env);
    case FormulaKind::Implies: return formula_alpha(a.sub(0), b.sub(0), env) && formula_alpha(a.sub(1), b.sub(1), env);
    case FormulaKind::Op: return a.oper() == b.oper() && formula_alpha(a.sub(0), b.sub(0), env);
    case FormulaKind::Forall: {
      env.emplace_back(a.bound(), b.bound());
      bool ok = formula_alpha(a.sub(0), b.sub(0), env);
      env.pop_back();
      return ok;
    }
    default: return false;
  }
}

Term rename_term(const Term& t, const std::map<Var, Var>& ren) {
  if (t.is_closed()) return t;
  if (t.kind() == TermKind::Var) {
    auto it = ren.find(t.var());
    return it == ren.end() ? t : Term::var(it->second);
  }
  std::vector<Term> args;
  for (std::size_t i = 0; i < t.arity(); ++i) args.push_back(rename_term(t.arg(i), ren));
  return rebuild_term(t, std::move(args));
}

Formula rename_rec(const Formula& f, std::map<Var, Var>& ren, std::uint32_t& next) {
  if (f.is_atomic()) {
    std::vector<Term> ts;
    for (std::size_t i = 0; i < f.term_count(); ++i) ts.push_back(rename_term(f.term(i), ren));
    return rebuild_atom(f, ts);
  }
  switch (f.kind()) {
    case FormulaKind::Not: return Formula::negation(rename_rec(f.sub(0), ren, next));
    case FormulaKind::Implies: {
      Formula l = rename_rec(f.sub(0), ren, next);
      return Formula::implies(l, rename_rec(f.sub(1), ren, next));
    }
    case FormulaKind::Op: return Formula::op(f.oper(), rename_rec(f.sub(0), ren, next));
    case FormulaKind::Forall: {
      Var y = f.bound();
      Var z{next++};
      auto saved = ren.find(y) == ren.end() ? std::optional<Var>() : std::optional<Var>(ren[y]);
      ren[y] = z;
      Formula body = rename_rec(f.sub(0), ren, next);
      if (saved) ren[y] = *saved; else ren.erase(y);
      return Formula::forall(z, body);
    }
    default: return f;
  }
}

}  // namespace

bool alpha_equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  Env env;
  return formula_alpha(a, b, env);
}

NormalBody normalize_body(const Formula& f) {
  auto fv = free_vars(f);
  std::map<Var, Var> ren;
  std::uint32_t next = 0;
  std::vector<Var> free(fv.begin(), fv.end());
  for (const auto& v : free) ren[v] = Var{next++};
  return NormalBody{rename_rec(f, ren, next), std::move(free)};
}

// ---------------------------------------------------------------- godel numbering

Nat godel(const Formula& f) {
  std::string text = f.str();
  std::vector<std::uint8_t> bytes;
  bytes.reserve(text.size() + 1);
  bytes.push_back(0x01);
  for (char c : text) bytes.push_back(static_cast<std::uint8_t>(c));
  return from_bytes_be(bytes);
}

std::optional<Formula> ungodel(const Nat& n) {
  if (n <= 0) return std::nullopt;
  auto bytes = to_bytes_be(n);
  if (bytes.empty() || bytes[0] != 0x01) return std::nullopt;
  std::string text(bytes.begin() + 1, bytes.end());
  try {
    Formula f = parse_formula(text, Dialect::OExt);
    if (f.str() != text) return std::nullopt;
    return f;
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

bool contains_op(const Formula& f) {
  if (f.is_atomic()) return false;
  if (f.kind() == FormulaKind::Op) return true;
  if (contains_op(f.sub(0))) return true;
  return f.kind() == FormulaKind::Implies && contains_op(f.sub(1));
}

namespace {
bool term_uses_o(const Term& t) {
  if (t.kind() == TermKind::Pow2 || t.kind() == TermKind::Lim) return true;
  for (std::size_t i = 0; i < t.arity(); ++i)
    if (term_uses_o(t.arg(i))) return true;
  return false;
}
}  // namespace

bool uses_o_vocabulary(const Formula& f) {
  if (f.is_atomic()) {
    if (f.kind() == FormulaKind::OAtom || f.kind() == FormulaKind::PhiAtom) return true;
    for (std::size_t i = 0; i < f.term_count(); ++i)
      if (term_uses_o(f.term(i))) return true;
    return false;
  }
  if (uses_o_vocabulary(f.sub(0))) return true;
  return f.kind() == FormulaKind::Implies && uses_o_vocabulary(f.sub(1));
}

}  // namespace stratalab
