#include "stratalab/model_check.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "stratalab/entailment.hpp"
#include "stratalab/errors.hpp"
#include "stratalab/stratification.hpp"

namespace stratalab {

const char* to_string(IntendedVerdict v) {
  switch (v) {
    case IntendedVerdict::True: return "true";
    case IntendedVerdict::False: return "false";
    case IntendedVerdict::Unknown: return "unknown";
  }
  return "?";
}

namespace {

constexpr std::size_t kMaxBits = 1 << 16;

std::optional<Nat> capped(Nat v) {
  if (bit_length(v) > kMaxBits) return std::nullopt;
  return v;
}

IntendedVerdict from_bool(bool b) { return b ? IntendedVerdict::True : IntendedVerdict::False; }

IntendedVerdict negate(IntendedVerdict v) {
  switch (v) {
    case IntendedVerdict::True: return IntendedVerdict::False;
    case IntendedVerdict::False: return IntendedVerdict::True;
    default: return IntendedVerdict::Unknown;
  }
}

Term close_term(Term t, const Assignment& s) {
  for (const auto& [v, value] : s) t = substitute(t, v, numeral(value));
  return t;
}

// forall x ((exists z. x + S(z) = t) -> psi): the bound t, when the body has that shape.
struct Guard {
  Term bound;
  const Formula* psi;
};

std::optional<Guard> bounded_guard(const Formula& f) {
  Var x = f.bound();
  const Formula& body = f.sub(0);
  if (body.kind() != FormulaKind::Implies) return std::nullopt;
  const Formula& g = body.sub(0);
  // exists z. e  ==  ~forall z. ~e
  if (g.kind() != FormulaKind::Not || g.sub(0).kind() != FormulaKind::Forall) return std::nullopt;
  Var z = g.sub(0).bound();
  const Formula& neg = g.sub(0).sub(0);
  if (neg.kind() != FormulaKind::Not || neg.sub(0).kind() != FormulaKind::Eq || z == x) return std::nullopt;
  const Formula& eq = neg.sub(0);
  const Term& lhs = eq.term(0);
  const Term& t = eq.term(1);
  if (!(lhs == Term::plus(Term::var(x), Term::succ(Term::var(z))))) return std::nullopt;
  auto fv = free_vars(t);
  if (fv.count(x) || fv.count(z)) return std::nullopt;
  return Guard{t, &body.sub(1)};
}

class Checker {
 public:
  Checker(const IntendedStructure& m, const ModelCheckBudget& b) : m_(m), b_(b) {}

  IntendedVerdict eval(const Formula& f, Assignment& s) const {
    switch (f.kind()) {
      case FormulaKind::Eq: {
        auto a = evaluate_term(f.term(0), s);
        auto c = evaluate_term(f.term(1), s);
        if (!a || !c) return IntendedVerdict::Unknown;
        return from_bool(*a == *c);
      }
      case FormulaKind::InW: {
        auto x = evaluate_term(f.term(0), s);
        auto e = evaluate_term(f.term(1), s);
        if (!x || !e || m_.registry == nullptr) return IntendedVerdict::Unknown;
        return we_member(*m_.registry, *e, *x, b_.fuel) == Membership::Yes ? IntendedVerdict::True
                                                                           : IntendedVerdict::Unknown;
      }
      case FormulaKind::PhiAtom: {
        auto e = evaluate_term(f.term(0), s);
        auto x = evaluate_term(f.term(1), s);
        auto y = evaluate_term(f.term(2), s);
        if (!e || !x || !y || m_.registry == nullptr) return IntendedVerdict::Unknown;
        auto out = eval_step(*m_.registry, *e, *x, b_.fuel);
        if (!out.is_halted()) return IntendedVerdict::Unknown;
        return from_bool(out.value() == *y);
      }
      case FormulaKind::OAtom: {
        if (!m_.o_atom) return IntendedVerdict::Unknown;
        Term t = close_term(f.term(0), s);
        if (!t.is_closed()) return IntendedVerdict::Unknown;
        return m_.o_atom(t);
      }
      case FormulaKind::Not:
        return negate(eval(f.sub(0), s));
      case FormulaKind::Implies: {
        auto a = eval(f.sub(0), s);
        if (a == IntendedVerdict::False) return IntendedVerdict::True;
        auto c = eval(f.sub(1), s);
        if (c == IntendedVerdict::True) return IntendedVerdict::True;
        if (a == IntendedVerdict::True && c == IntendedVerdict::False) return IntendedVerdict::False;
        return IntendedVerdict::Unknown;
      }
      case FormulaKind::Forall:
        return forall(f, s);
      case FormulaKind::Op:
        return op(f, s);
    }
    return IntendedVerdict::Unknown;
  }

 private:
  IntendedVerdict instance(const Formula& body, Var x, const Nat& value, Assignment& s) const {
    auto saved = s.find(x) == s.end() ? std::optional<Nat>() : std::optional<Nat>(s[x]);
    s[x] = value;
    auto r = eval(body, s);
    if (saved) s[x] = *saved;
    else s.erase(x);
    return r;
  }

  IntendedVerdict forall(const Formula& f, Assignment& s) const {
    Var x = f.bound();
    const Formula& body = f.sub(0);
    if (auto g = bounded_guard(f)) {
      auto t = evaluate_term(g->bound, s);
      if (t && *t <= b_.bounded_limit) {
        auto r = IntendedVerdict::True;
        for (Nat c = 0; c < *t; ++c) {
          auto v = instance(*g->psi, x, c, s);
          if (v == IntendedVerdict::False) return v;
          if (v == IntendedVerdict::Unknown) r = v;
        }
        return r;
      }
    }
    if (!free_vars(body).count(x)) return eval(body, s);
    for (std::size_t c = 0; c < b_.sample; ++c)
      if (instance(body, x, Nat(c), s) == IntendedVerdict::False) return IntendedVerdict::False;
    return IntendedVerdict::Unknown;
  }

  IntendedVerdict op(const Formula& f, const Assignment& s) const {
    const auto& k = f.oper();
    Assignment relevant;
    for (const auto& v : free_vars(f.sub(0))) {
      auto it = s.find(v);
      if (it == s.end()) return IntendedVerdict::Unknown;
      relevant[v] = it->second;
    }
    Formula goal = assign_substitute(f.sub(0), relevant);
    if (!k.is_strat()) {
      if (!m_.theory) return IntendedVerdict::Unknown;
      return entails(m_.theory(k.index), goal, b_.entail).proved() ? IntendedVerdict::True : IntendedVerdict::Unknown;
    }
    if (!m_.strat_theory) return IntendedVerdict::Unknown;
    return entails(m_.strat_theory(*k.superscript, k.index), goal, b_.entail).proved() ? IntendedVerdict::True
                                                                                       : IntendedVerdict::Unknown;
  }

  const IntendedStructure& m_;
  const ModelCheckBudget& b_;
};

}  // namespace

IntendedVerdict model_check(const IntendedStructure& m, const Formula& f, const Assignment& s,
                            const ModelCheckBudget& budget) {
  Assignment scratch = s;
  return Checker(m, budget).eval(f, scratch);
}

std::optional<Nat> evaluate_term(const Term& t, const Assignment& s) {
  switch (t.kind()) {
    case TermKind::Num:
      return t.value();
    case TermKind::Var: {
      auto it = s.find(t.var());
      if (it == s.end()) return std::nullopt;
      return it->second;
    }
    case TermKind::Succ: {
      auto a = evaluate_term(t.arg(0), s);
      if (!a) return std::nullopt;
      return capped(*a + 1);
    }
    case TermKind::Plus:
    case TermKind::Times: {
      auto a = evaluate_term(t.arg(0), s);
      auto b = evaluate_term(t.arg(1), s);
      if (!a || !b) return std::nullopt;
      if (t.kind() == TermKind::Times && bit_length(*a) + bit_length(*b) > kMaxBits) return std::nullopt;
      return capped(t.kind() == TermKind::Plus ? Nat(*a + *b) : Nat(*a * *b));
    }
    case TermKind::Triple: {
      auto a = evaluate_term(t.arg(0), s);
      auto b = evaluate_term(t.arg(1), s);
      auto c = evaluate_term(t.arg(2), s);
      if (!a || !b || !c) return std::nullopt;
      return capped(triple(*a, *b, *c));
    }
    case TermKind::Pow2: {
      auto a = evaluate_term(t.arg(0), s);
      if (!a || *a >= kMaxBits) return std::nullopt;
      Nat out = 1;
      out <<= static_cast<unsigned>(*a);
      return out;
    }
    case TermKind::Lim: {
      auto a = evaluate_term(t.arg(0), s);
      // 5^a has about 2.33a bits
      if (!a || *a * 7 >= kMaxBits * 3) return std::nullopt;
      return Nat(3 * boost::multiprecision::pow(Nat(5), static_cast<unsigned>(*a)));
    }
  }
  return std::nullopt;
}

Term tuple_term(const std::vector<Term>& xs) {
  switch (xs.size()) {
    case 0: return Term::zero();
    case 1: return xs[0];
    case 2: return Term::triple(xs[0], xs[1], Term::zero());
    case 3: return Term::triple(xs[0], xs[1], xs[2]);
    default: return Term::triple(xs[0], xs[1], tuple_term(std::vector<Term>(xs.begin() + 2, xs.end())));
  }
}

std::optional<std::vector<Nat>> untuple(std::size_t k, const Nat& code) {
  switch (k) {
    case 0: return code.is_zero() ? std::optional<std::vector<Nat>>(std::vector<Nat>{}) : std::nullopt;
    case 1: return std::vector<Nat>{code};
    default: break;
  }
  Triple t = untriple(code);
  if (k == 2) {
    if (!t.c.is_zero()) return std::nullopt;
    return std::vector<Nat>{t.a, t.b};
  }
  if (k == 3) return std::vector<Nat>{t.a, t.b, t.c};
  auto rest = untuple(k - 2, t.c);
  if (!rest) return std::nullopt;
  std::vector<Nat> out{t.a, t.b};
  out.insert(out.end(), rest->begin(), rest->end());
  return out;
}

namespace {

Formula translate(const Formula& f, const std::map<std::uint64_t, Index>& codes) {
  switch (f.kind()) {
    case FormulaKind::Eq:
    case FormulaKind::InW:
    case FormulaKind::OAtom:
    case FormulaKind::PhiAtom:
      return f;
    case FormulaKind::Not:
      return Formula::negation(translate(f.sub(0), codes));
    case FormulaKind::Implies:
      return Formula::implies(translate(f.sub(0), codes), translate(f.sub(1), codes));
    case FormulaKind::Forall:
      return Formula::forall(f.bound(), translate(f.sub(0), codes));
    case FormulaKind::Op: {
      const auto& k = f.oper();
      if (k.is_strat()) throw PreconditionError("translation takes plain formulas, found " + k.str());
      auto it = codes.find(k.index);
      if (it == codes.end()) throw PreconditionError("no theory code for index " + std::to_string(k.index));
      auto nb = normalize_body(f.sub(0));
      std::vector<Term> xs;
      for (const auto& v : nb.free) xs.push_back(Term::var(v));
      Term code = Term::triple(numeral(godel(nb.body)), numeral(k.index), tuple_term(xs));
      return Formula::in_w(code, numeral(it->second));
    }
  }
  return f;
}

}  // namespace

Formula fu_translate(const Formula& f, const std::map<std::uint64_t, Index>& theory_code_map) {
  return translate(f, theory_code_map);
}

}  // namespace stratalab
