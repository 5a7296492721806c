#include "stratalab/stratification.hpp"

#include <algorithm>
#include <memory>

namespace stratalab {

namespace {

void collect_superscripts(const Formula& f, std::set<Ordinal>& out) {
  switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Forall:
      collect_superscripts(f.sub(0), out);
      return;
    case FormulaKind::Implies:
      collect_superscripts(f.sub(0), out);
      collect_superscripts(f.sub(1), out);
      return;
    case FormulaKind::Op:
      if (f.oper().superscript) out.insert(*f.oper().superscript);
      collect_superscripts(f.sub(0), out);
      return;
    default:
      return;
  }
}

struct Scope {
  bool under_plain_other = false;
  bool under_plain = false;
  std::optional<Ordinal> nearest_strat;  // innermost enclosing superscript; the minimum when valid
};

bool stratified_pass(const Formula& f, std::uint64_t i, const Scope& scope) {
  switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Forall:
      return stratified_pass(f.sub(0), i, scope);
    case FormulaKind::Implies:
      return stratified_pass(f.sub(0), i, scope) && stratified_pass(f.sub(1), i, scope);
    case FormulaKind::Op: {
      const OperatorId& k = f.oper();
      Scope inner = scope;
      if (k.is_strat()) {
        if (k.index != i || scope.under_plain) return false;
        if (scope.nearest_strat && !(*k.superscript < *scope.nearest_strat)) return false;
        inner.nearest_strat = k.superscript;
      } else {
        if (k.index == i && !scope.under_plain_other) return false;
        inner.under_plain = true;
        if (k.index != i) inner.under_plain_other = true;
      }
      return stratified_pass(f.sub(0), i, inner);
    }
    default:
      return true;
  }
}

template <class OnOp>
Formula map_ops(const Formula& f, OnOp&& on_op) {
  switch (f.kind()) {
    case FormulaKind::Not:
      return Formula::negation(map_ops(f.sub(0), on_op));
    case FormulaKind::Implies:
      return Formula::implies(map_ops(f.sub(0), on_op), map_ops(f.sub(1), on_op));
    case FormulaKind::Forall:
      return Formula::forall(f.bound(), map_ops(f.sub(0), on_op));
    case FormulaKind::Op:
      return on_op(f);
    default:
      return f;
  }
}

struct Placed {
  Formula formula;
  std::optional<Ordinal> top;  // max of On(formula)
};

std::optional<Ordinal> max_of(const std::optional<Ordinal>& a, const std::optional<Ordinal>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::max(*a, *b);
}

// Definition-following application; top tracks max On of the result so each K[i] asks X once.
Placed stratify(const Stratifier& st, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Forall: {
      Placed in = stratify(st, f.sub(0));
      return {f.kind() == FormulaKind::Not ? Formula::negation(in.formula) : Formula::forall(f.bound(), in.formula),
              in.top};
    }
    case FormulaKind::Implies: {
      Placed l = stratify(st, f.sub(0));
      Placed r = stratify(st, f.sub(1));
      return {Formula::implies(l.formula, r.formula), max_of(l.top, r.top)};
    }
    case FormulaKind::Op: {
      if (f.oper().index != st.index()) return {f, std::nullopt};
      Placed in = stratify(st, f.sub(0));
      Ordinal a = st.min_above(in.top);
      return {Formula::op(OperatorId::strat(a, st.index()), in.formula), a};
    }
    default:
      return {f, std::nullopt};
  }
}

}  // namespace

std::set<Ordinal> superscripts(const Formula& f) {
  std::set<Ordinal> out;
  collect_superscripts(f, out);
  return out;
}

bool is_plain(const Formula& f) { return superscripts(f).empty(); }

bool is_i_stratified(const Formula& f, std::uint64_t i) { return stratified_pass(f, i, Scope{}); }

bool is_i_stratified_recursive(const Formula& f, std::uint64_t i) {
  switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Forall:
      return is_i_stratified_recursive(f.sub(0), i);
    case FormulaKind::Implies:
      return is_i_stratified_recursive(f.sub(0), i) && is_i_stratified_recursive(f.sub(1), i);
    case FormulaKind::Op: {
      const OperatorId& k = f.oper();
      if (!k.is_strat()) return k.index != i && is_plain(f);
      if (k.index != i || !is_i_stratified_recursive(f.sub(0), i)) return false;
      for (const Ordinal& b : superscripts(f.sub(0))) {
        if (!(b < *k.superscript)) return false;
      }
      return true;
    }
    default:
      return true;
  }
}

bool is_very_i_stratified(const Formula& f, std::uint64_t i) {
  if (!is_i_stratified(f, i)) return false;
  for (const Ordinal& a : superscripts(f)) {
    if (!a.is_positive_eps_multiple()) return false;
  }
  return true;
}

Formula apply_ordmap(const OrdMap& h, const Formula& f) {
  return map_ops(f, [&h](const Formula& g) {
    const OperatorId& k = g.oper();
    if (!k.is_strat()) return g;
    const Ordinal* image = h.find(*k.superscript);
    return Formula::op(OperatorId::strat(image ? *image : *k.superscript, k.index), apply_ordmap(h, g.sub(0)));
  });
}

Formula erase(const Formula& f) {
  return map_ops(f, [](const Formula& g) { return Formula::op(OperatorId::plain(g.oper().index), erase(g.sub(0))); });
}

Stratifier::Stratifier(std::uint64_t index, Member member, MinAbove min_above, std::string name)
    : index_(index), member_(std::move(member)), min_above_(std::move(min_above)), name_(std::move(name)) {}

Stratifier Stratifier::veristratifier(std::uint64_t index) {
  return Stratifier(
      index, [](const Ordinal& a) { return a.is_positive_eps_multiple(); },
      [](const std::optional<Ordinal>& bound) -> std::optional<Ordinal> {
        return Ordinal::eps(bound ? bound->eps_mult() + 1 : 1);
      },
      "veristratifier(" + std::to_string(index) + ")");
}

Stratifier Stratifier::prefix_then_all(std::uint64_t index, std::set<Ordinal> prefix) {
  auto xs = std::make_shared<const std::set<Ordinal>>(std::move(prefix));
  std::string name = "stratifier(" + std::to_string(index) + ", {";
  bool first = true;
  for (const Ordinal& a : *xs) {
    name += (first ? "" : ", ") + a.str();
    first = false;
  }
  name += "} and above)";
  return Stratifier(
      index,
      [xs](const Ordinal& a) { return xs->empty() || xs->count(a) != 0 || a > *xs->rbegin(); },
      [xs](const std::optional<Ordinal>& bound) -> std::optional<Ordinal> {
        if (!bound) return xs->empty() ? Ordinal() : *xs->begin();
        auto it = xs->upper_bound(*bound);
        if (it != xs->end()) return *it;
        return successor(*bound);
      },
      std::move(name));
}

Ordinal Stratifier::min_above(const std::optional<Ordinal>& bound) const {
  std::optional<Ordinal> a = min_above_(bound);
  if (!a || (bound && !(*a > *bound)) || !member_(*a)) {
    throw PreconditionError(name_ + ": no member of X certified above " + (bound ? bound->str() : "nothing"));
  }
  return *a;
}

Formula apply_stratifier(const Stratifier& st, const Formula& plain) {
  if (!is_plain(plain)) throw PreconditionError("stratifier input carries superscripts: " + plain.str());
  return stratify(st, plain).formula;
}

Formula lift_valid(const Formula& plain, std::uint64_t i) {
  return apply_stratifier(Stratifier::veristratifier(i), plain);
}

Stratifier compose_stratifier(const OrdMap& h, const Stratifier& st, const Formula& theta) {
  std::set<Ordinal> image;
  for (const Ordinal& a : superscripts(apply_stratifier(st, theta))) {
    const Ordinal* b = h.find(a);
    if (!b) throw PreconditionError("superscript " + a.str() + " outside dom(h)");
    image.insert(*b);
  }
  return Stratifier::prefix_then_all(st.index(), std::move(image));
}

StratifierSet StratifierSet::make(std::vector<Stratifier> members) {
  std::set<std::uint64_t> seen;
  for (const Stratifier& s : members) {
    if (!seen.insert(s.index()).second) {
      throw PreconditionError("stratifier-set repeats index " + std::to_string(s.index()));
    }
  }
  StratifierSet out;
  out.members_ = std::move(members);
  return out;
}

std::vector<std::uint64_t> StratifierSet::indices() const {
  std::vector<std::uint64_t> out;
  out.reserve(members_.size());
  for (const Stratifier& s : members_) out.push_back(s.index());
  return out;
}

const Stratifier* StratifierSet::find(std::uint64_t i) const {
  for (const Stratifier& s : members_) {
    if (s.index() == i) return &s;
  }
  return nullptr;
}

bool is_above(const StratifierSet& set, std::uint64_t i, const IndexOrder& precedes) {
  for (const Stratifier& s : set.members()) {
    if (!precedes(i, s.index())) return false;
  }
  return true;
}

bool within_cut(const Formula& f, const Ordinal& alpha) {
  for (const Ordinal& a : superscripts(f)) {
    if (!(a < alpha)) return false;
  }
  return true;
}

AxiomStream theory_cut(AxiomStream theory, const Ordinal& alpha) {
  return std::move(theory).filter([alpha](const Axiom& a) { return within_cut(a.sentence, alpha); });
}

Formula canonical_veristratified(const Formula& f, std::uint64_t i) {
  if (!is_i_stratified(f, i)) throw PreconditionError("not " + std::to_string(i) + "-stratified: " + f.str());
  std::vector<std::pair<Ordinal, Ordinal>> pairs;
  std::uint64_t j = 0;
  for (const Ordinal& a : superscripts(f)) pairs.emplace_back(a, Ordinal::eps(++j));
  return apply_ordmap(OrdMap(std::move(pairs)), f);
}

}  // namespace stratalab
