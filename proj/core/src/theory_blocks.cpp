#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "stratalab/entailment.hpp"
#include "stratalab/errors.hpp"
#include "stratalab/kleene_o.hpp"
#include "stratalab/theory.hpp"
#include "schema_stream.hpp"

namespace stratalab {

const char* to_string(Recognition r) {
  switch (r) {
    case Recognition::Yes: return "yes";
    case Recognition::No: return "no";
    case Recognition::Unknown: return "unknown";
  }
  return "?";
}

// ---------------------------------------------------------------- orders

OrderSpec OrderSpec::explicit_edges(std::vector<std::pair<std::uint64_t, std::uint64_t>> edges) {
  OrderSpec o;
  std::set<std::uint64_t> nodes;
  for (const auto& [j, i] : edges) {
    if (j == i) throw PreconditionError("order edge " + std::to_string(j) + " < " + std::to_string(i) + " is reflexive");
    o.closure_.insert({j, i});
    nodes.insert(j);
    nodes.insert(i);
  }
  // Warshall over the mentioned nodes
  for (auto k : nodes)
    for (auto a : nodes)
      if (o.closure_.count({a, k}))
        for (auto b : nodes)
          if (o.closure_.count({k, b})) o.closure_.insert({a, b});
  for (auto a : nodes)
    if (o.closure_.count({a, a})) throw PreconditionError("order has a cycle through " + std::to_string(a));
  o.edges_ = std::move(edges);
  return o;
}

OrderSpec OrderSpec::programmatic(const Index& decider, const Registry& registry, std::uint64_t fuel) {
  OrderSpec o;
  o.decider_ = decider;
  o.registry_ = &registry;
  o.fuel_ = fuel;
  return o;
}

bool OrderSpec::precedes(std::uint64_t j, std::uint64_t i) const {
  if (registry_ == nullptr) return closure_.count({j, i}) != 0;
  if (j == i) return false;
  auto out = eval_step(*registry_, decider_, pair(j, i), fuel_);
  return out.is_halted() && !out.value().is_zero();
}

std::set<std::uint64_t> OrderSpec::mentioned() const {
  std::set<std::uint64_t> out;
  for (const auto& [j, i] : edges_) {
    out.insert(j);
    out.insert(i);
  }
  return out;
}

// ---------------------------------------------------------------- block kinds

namespace {

struct KindName {
  BlockKind kind;
  const char* name;
};
constexpr KindName kKindNames[] = {
    {BlockKind::JDeduction, "j-Deduction"},
    {BlockKind::ModifiedJDeduction, "Modified-j-Deduction"},
    {BlockKind::AssignedValidity, "Assigned-Validity"},
    {BlockKind::IValidity, "i-Validity"},
    {BlockKind::IIntrospection, "i-Introspection"},
    {BlockKind::PaAxioms, "PA-axioms"},
    {BlockKind::JSmt, "j-SMT"},
    {BlockKind::ClosureOf, "Closure-of"},
    {BlockKind::IStratideduction, "i-Stratideduction"},
    {BlockKind::IAssignedStrativalidity, "i-Assigned-Strativalidity"},
    {BlockKind::IStrativalidity, "i-Strativalidity"},
    {BlockKind::IStratrospection, "i-Stratrospection"},
    {BlockKind::IStratiSmt, "i-Strati-SMT"},
    {BlockKind::ICollapse, "i-Collapse"},
    {BlockKind::BasicOAxioms, "Basic-O-axioms"},
};

}  // namespace

std::string to_string(BlockKind k) {
  for (const auto& kn : kKindNames)
    if (kn.kind == k) return kn.name;
  return "?";
}

std::optional<BlockKind> block_kind_from_string(std::string_view s) {
  for (const auto& kn : kKindNames)
    if (s == kn.name) return kn.kind;
  return std::nullopt;
}

bool is_stratified_kind(BlockKind k) {
  switch (k) {
    case BlockKind::IStratideduction:
    case BlockKind::IAssignedStrativalidity:
    case BlockKind::IStrativalidity:
    case BlockKind::IStratrospection:
    case BlockKind::IStratiSmt:
    case BlockKind::ICollapse:
      return true;
    default:
      return false;
  }
}

std::string BlockSpec::str() const {
  return to_string(kind) + "(" + std::to_string(owner) + "," + std::to_string(subject) + ")";
}

// ---------------------------------------------------------------- enumeration

FormulaEnumeration::FormulaEnumeration(Vocabulary v) : vocab_(std::move(v)) {}

const std::vector<Term>& FormulaEnumeration::terms_of_size(std::size_t n) {
  if (terms_.size() <= n) terms_.resize(n + 1);
  if (n == 0 || !terms_[n].empty()) return terms_[n];
  std::vector<Term> out;
  if (n == 1) {
    out.push_back(Term::zero());
    for (std::uint32_t k = 0; k < vocab_.variables; ++k) out.push_back(Term::var(Var{k}));
  } else {
    for (const auto& t : terms_of_size(n - 1)) out.push_back(Term::succ(t));
    for (std::size_t a = 1; a + 1 < n; ++a) {
      const auto& left = terms_of_size(a);
      const auto& right = terms_of_size(n - 1 - a);
      for (const auto& l : left)
        for (const auto& r : right) out.push_back(Term::plus(l, r));
      for (const auto& l : left)
        for (const auto& r : right) out.push_back(Term::times(l, r));
    }
  }
  terms_[n] = std::move(out);
  return terms_[n];
}

const std::vector<Formula>& FormulaEnumeration::formulas_of_size(std::size_t n) {
  if (formulas_.size() <= n) formulas_.resize(n + 1);
  if (n < 2 || !formulas_[n].empty()) return formulas_[n];
  std::vector<Formula> out;
  for (std::size_t a = 1; a + 1 < n; ++a)
    for (const auto& l : terms_of_size(a))
      for (const auto& r : terms_of_size(n - 1 - a)) out.push_back(Formula::eq(l, r));
  if (vocab_.o_vocabulary)
    for (const auto& t : terms_of_size(n - 1)) out.push_back(Formula::o_atom(t));
  // copy: the recursive calls below may reallocate formulas_
  std::vector<Formula> smaller = formulas_of_size(n - 1);
  for (const auto& f : smaller) out.push_back(Formula::negation(f));
  for (std::size_t a = 2; a + 2 < n; ++a) {
    std::vector<Formula> left = formulas_of_size(a);
    const auto& right = formulas_of_size(n - 1 - a);
    for (const auto& l : left)
      for (const auto& r : right) out.push_back(Formula::implies(l, r));
  }
  for (const auto& f : smaller) {
    auto fv = free_vars(f);
    for (std::uint32_t k = 0; k < vocab_.variables; ++k)
      if (fv.count(Var{k})) out.push_back(Formula::forall(Var{k}, f));
  }
  for (auto j : vocab_.plain_ops)
    for (const auto& f : smaller) out.push_back(Formula::op(OperatorId::plain(j), f));
  for (const auto& a : vocab_.superscripts)
    for (const auto& f : smaller) out.push_back(Formula::op(OperatorId::strat(a, vocab_.strat_index), f));
  formulas_[n] = std::move(out);
  return formulas_[n];
}

Formula FormulaEnumeration::at(std::size_t k) {
  while (flat_.size() <= k) {
    const auto& level = formulas_of_size(next_level_++);
    flat_.insert(flat_.end(), level.begin(), level.end());
    if (next_level_ > 64) throw Error("formula enumeration exhausted its size bound");
  }
  return flat_[k];
}

// ---------------------------------------------------------------- schema constructors

namespace {

Formula ucl(const Formula& f) { return universal_closure(f); }

Formula induction_matrix(const Formula& phi, Var x) {
  Formula base = substitute(phi, x, Term::zero(), true);
  Formula step = Formula::forall(x, Formula::implies(phi, substitute(phi, x, Term::succ(Term::var(x)), true)));
  return Formula::implies(Formula::conj(base, step), Formula::forall(x, phi));
}

Var smt_witness_var(const Formula& phi) {
  std::uint32_t e = std::max<std::uint32_t>(1, fresh_index(phi));
  return Var{e};
}

}  // namespace

Formula deduction_instance(const OperatorId& k, const Formula& phi, const Formula& psi) {
  return ucl(Formula::implies(Formula::op(k, Formula::implies(phi, psi)),
                              Formula::implies(Formula::op(k, phi), Formula::op(k, psi))));
}

Formula modified_deduction_instance(std::uint64_t j, const Formula& phi, const Formula& psi) {
  auto k = OperatorId::plain(j);
  return ucl(Formula::implies(Formula::op(k, Formula::implies(phi, psi)),
                              Formula::implies(Formula::op(k, phi), Formula::op(k, Formula::conj(psi, phi)))));
}

Formula validity_instance(const OperatorId& k, const Formula& phi) { return ucl(Formula::op(k, phi)); }

Formula introspection_instance(std::uint64_t i, const Formula& phi) {
  auto k = OperatorId::plain(i);
  Formula boxed = Formula::op(k, phi);
  return ucl(Formula::implies(boxed, Formula::op(k, boxed)));
}

Formula stratrospection_instance(const Ordinal& a, const Ordinal& b, std::uint64_t i, const Formula& phi) {
  Formula inner = Formula::op(OperatorId::strat(a, i), phi);
  return ucl(Formula::implies(inner, Formula::op(OperatorId::strat(b, i), inner)));
}

Formula smt_instance(const OperatorId& k, const Formula& phi) {
  Var x{0};
  Var e = smt_witness_var(phi);
  Formula body = Formula::iff(Formula::op(k, phi), Formula::in_w(Term::var(x), Term::var(e)));
  return ucl(Formula::exists(e, Formula::forall(x, body)));
}

Formula collapse_instance(const Ordinal& a, const Ordinal& b, std::uint64_t i, const Formula& phi) {
  return ucl(Formula::iff(Formula::op(OperatorId::strat(a, i), phi), Formula::op(OperatorId::strat(b, i), phi)));
}

Formula truth_instance(const OperatorId& k, const Formula& phi) {
  return ucl(Formula::implies(Formula::op(k, phi), phi));
}

Formula stratified_truth_instance(std::uint64_t j, const Formula& phi, const Stratifier& st) {
  return ucl(Formula::implies(Formula::op(OperatorId::plain(j), phi), apply_stratifier(st, phi)));
}

Formula biconditional_instance(std::uint64_t j, const Formula& phi, const Nat& n) {
  Var x{0};
  Term code = Term::triple(numeral(godel(phi)), numeral(j), Term::var(x));
  return Formula::forall(x, Formula::iff(Formula::op(OperatorId::plain(j), phi), Formula::in_w(code, numeral(n))));
}

Formula induction_instance(const Formula& phi) { return ucl(induction_matrix(phi, Var{0})); }

const std::vector<Formula>& q_axioms() {
  static const std::vector<Formula> axioms = [] {
    std::vector<Formula> out;
    for (const char* text : {
             "forall x. ~(S(x)=0)",
             "forall x. forall y. ((S(x)=S(y)) -> (x=y))",
             "forall x. ((x+0)=x)",
             "forall x. forall y. ((x+S(y))=S((x+y)))",
             "forall x. ((x*0)=0)",
             "forall x. forall y. ((x*S(y))=((x*y)+x))",
         })
      out.push_back(parse_formula(text, Dialect::Plain));
    return out;
  }();
  return axioms;
}

std::pair<std::vector<Var>, Formula> strip_closure(const Formula& f) {
  std::vector<Var> vars;
  const Formula* cur = &f;
  while (cur->kind() == FormulaKind::Forall) {
    vars.push_back(cur->bound());
    cur = &cur->sub(0);
  }
  return {std::move(vars), *cur};
}

// ---------------------------------------------------------------- streams

namespace {

using detail::alpha_key;
using detail::counter_stream;

std::vector<Ordinal> eps_supply(std::size_t k) {
  std::vector<Ordinal> out;
  for (std::size_t m = 1; m <= k; ++m) out.push_back(Ordinal::eps(m));
  return out;
}

Vocabulary plain_vocab(const BlockContext& ctx) {
  Vocabulary v;
  v.plain_ops = ctx.indices;
  v.o_vocabulary = ctx.o_vocabulary;
  return v;
}

// Plain operators for every index but i, superscripted ones for i.
Vocabulary strat_vocab(const BlockContext& ctx, std::uint64_t i) {
  Vocabulary v;
  for (auto j : ctx.indices)
    if (j != i) v.plain_ops.push_back(j);
  v.strat_index = i;
  v.superscripts = eps_supply(ctx.ordinal_supply);
  v.o_vocabulary = ctx.o_vocabulary;
  return v;
}

std::size_t to_size(const Nat& n) {
  auto v = to_u64(n);
  return v && *v < (std::uint64_t(1) << 40) ? static_cast<std::size_t>(*v) : std::size_t(-1);
}

// Assignment number c spreads over the free variables as base-3 digits; nullopt once c exceeds
// the assignments available, so closed formulas are visited once.
std::optional<Assignment> assignment_from(const Formula& f, std::uint64_t c) {
  Assignment s;
  std::uint64_t count = 1;
  for (const auto& v : free_vars(f)) {
    s[v] = Nat(c % 3);
    c /= 3;
    count *= 3;
    if (count > 1000000) break;
  }
  if (c > 0) return std::nullopt;
  return s;
}

struct ValidityCache {
  std::size_t budget;
  std::unordered_map<std::size_t, bool> known;
  bool valid(std::size_t idx, const Formula& f) {
    auto it = known.find(idx);
    if (it != known.end()) return it->second;
    bool v = prove_valid(f, budget).proved();
    known.emplace(idx, v);
    return v;
  }
};

void check_params(const BlockSpec& b, const BlockContext& ctx) {
  if (b.kind == BlockKind::ModifiedJDeduction) {
    if (ctx.order == nullptr || !ctx.order->precedes(b.owner, b.subject))
      throw PreconditionError(b.str() + " requires owner < subject in the order");
  }
  if (is_stratified_kind(b.kind) && b.owner != b.subject)
    throw PreconditionError(b.str() + " speaks about its own index only");
  if (b.kind == BlockKind::ClosureOf && !ctx.closure_source)
    throw PreconditionError(b.str() + " needs a closure source");
}

}  // namespace

AxiomStream interleave(std::vector<AxiomStream> sources) {
  struct State {
    std::vector<AxiomStream> live;
    std::size_t turn = 0;
  };
  auto st = std::make_shared<State>();
  st->live = std::move(sources);
  return AxiomStream([st]() -> std::optional<Axiom> {
    while (!st->live.empty()) {
      if (st->turn >= st->live.size()) st->turn = 0;
      auto a = st->live[st->turn].next();
      if (a) {
        ++st->turn;
        return a;
      }
      st->live.erase(st->live.begin() + static_cast<std::ptrdiff_t>(st->turn));
    }
    return std::nullopt;
  });
}

AxiomStream dedupe(AxiomStream s) {
  auto seen = std::make_shared<std::unordered_set<std::string>>();
  auto src = std::make_shared<AxiomStream>(std::move(s));
  return AxiomStream([seen, src]() -> std::optional<Axiom> {
    while (auto a = src->next())
      if (seen->insert(alpha_key(a->sentence)).second) return a;
    return std::nullopt;
  });
}

AxiomStream pr_close(AxiomStream input, std::uint64_t i) {
  struct State {
    AxiomStream input;
    bool input_done = false;
    bool input_turn = true;
    std::deque<Formula> pending;  // emitted, not yet boxed
  };
  auto st = std::make_shared<State>(State{std::move(input), false, true, {}});
  const std::string tag = "closure:" + OperatorId::plain(i).str();
  return AxiomStream([st, i, tag]() -> std::optional<Axiom> {
    for (int tries = 0; tries < 2; ++tries) {
      if (st->input_turn && !st->input_done) {
        st->input_turn = false;
        if (auto a = st->input.next()) {
          st->pending.push_back(a->sentence);
          return a;
        }
        st->input_done = true;
      }
      st->input_turn = true;
      if (!st->pending.empty()) {
        Formula boxed = Formula::op(OperatorId::plain(i), st->pending.front());
        st->pending.pop_front();
        st->pending.push_back(boxed);
        return Axiom{boxed, tag};
      }
      if (st->input_done) return std::nullopt;
    }
    return std::nullopt;
  });
}

AxiomStream strat_close(AxiomStream input, std::uint64_t i, std::vector<Ordinal> supply) {
  struct State {
    AxiomStream input;
    std::vector<Ordinal> supply;
    bool input_done = false;
    bool input_turn = true;
    std::deque<Formula> pending;
    std::deque<Axiom> ready;
  };
  auto st = std::make_shared<State>(State{std::move(input), std::move(supply), false, true, {}, {}});
  return AxiomStream([st, i]() -> std::optional<Axiom> {
    for (;;) {
      if (st->input_turn && !st->input_done) {
        st->input_turn = false;
        if (auto a = st->input.next()) {
          st->pending.push_back(a->sentence);
          return a;
        }
        st->input_done = true;
      }
      st->input_turn = true;
      if (!st->ready.empty()) {
        Axiom a = st->ready.front();
        st->ready.pop_front();
        return a;
      }
      if (st->pending.empty()) {
        if (st->input_done) return std::nullopt;
        continue;
      }
      Formula phi = st->pending.front();
      st->pending.pop_front();
      for (const auto& a : st->supply) {
        auto k = OperatorId::strat(a, i);
        Formula boxed = Formula::op(k, phi);
        if (!is_i_stratified(boxed, i)) continue;
        st->pending.push_back(boxed);
        st->ready.push_back(Axiom{boxed, "closure:" + k.str()});
      }
    }
  });
}

AxiomStream block_instances(const BlockSpec& b, const BlockContext& ctx) {
  check_params(b, ctx);
  const std::string tag = b.str();
  const std::uint64_t i = b.owner;
  const std::uint64_t j = b.subject;
  auto plain = std::make_shared<FormulaEnumeration>(plain_vocab(ctx));
  auto strat = std::make_shared<FormulaEnumeration>(strat_vocab(ctx, i));
  auto supply = eps_supply(ctx.ordinal_supply);
  auto validity = std::make_shared<ValidityCache>(ValidityCache{ctx.prove_budget, {}});

  switch (b.kind) {
    case BlockKind::JDeduction:
      return counter_stream(
          [plain, j](std::uint64_t k) -> std::optional<Formula> {
            auto [a, c] = unpair(k);
            return deduction_instance(OperatorId::plain(j), plain->at(to_size(a)), plain->at(to_size(c)));
          },
          tag);
    case BlockKind::ModifiedJDeduction:
      return counter_stream(
          [plain, j](std::uint64_t k) -> std::optional<Formula> {
            auto [a, c] = unpair(k);
            return modified_deduction_instance(j, plain->at(to_size(a)), plain->at(to_size(c)));
          },
          tag);
    case BlockKind::AssignedValidity:
    case BlockKind::IAssignedStrativalidity: {
      bool stratified = b.kind == BlockKind::IAssignedStrativalidity;
      auto source = stratified ? strat : plain;
      return counter_stream(
          [source, validity, stratified, i](std::uint64_t k) -> std::optional<Formula> {
            auto [a, c] = unpair(k);
            std::size_t idx = to_size(a);
            const Formula& phi = source->at(idx);
            auto s = assignment_from(phi, static_cast<std::uint64_t>(c));
            if (!s) return std::nullopt;
            if (stratified && !is_i_stratified(phi, i)) return std::nullopt;
            if (!validity->valid(idx, phi)) return std::nullopt;
            return assign_substitute(phi, *s);
          },
          tag);
    }
    case BlockKind::IValidity:
      return counter_stream(
          [plain, validity, j](std::uint64_t k) -> std::optional<Formula> {
            const Formula& phi = plain->at(k);
            if (!validity->valid(k, phi)) return std::nullopt;
            return validity_instance(OperatorId::plain(j), phi);
          },
          tag);
    case BlockKind::IStrativalidity:
      return counter_stream(
          [strat, validity, supply, i](std::uint64_t k) -> std::optional<Formula> {
            auto [a, c] = unpair(k);
            std::size_t ai = to_size(a);
            if (ai >= supply.size()) return std::nullopt;
            std::size_t idx = to_size(c);
            const Formula& phi = strat->at(idx);
            Formula out = validity_instance(OperatorId::strat(supply[ai], i), phi);
            if (!is_i_stratified(out, i) || !validity->valid(idx, phi)) return std::nullopt;
            return out;
          },
          tag);
    case BlockKind::IIntrospection:
      return counter_stream([plain, j](std::uint64_t k) -> std::optional<Formula> {
        return introspection_instance(j, plain->at(k));
      }, tag);
    case BlockKind::IStratrospection:
      return counter_stream(
          [strat, supply, i](std::uint64_t k) -> std::optional<Formula> {
            Triple t = untriple(k);
            std::size_t ai = to_size(t.a), bi = to_size(t.b);
            if (ai >= supply.size() || bi >= supply.size() || !(supply[ai] < supply[bi])) return std::nullopt;
            Formula out = stratrospection_instance(supply[ai], supply[bi], i, strat->at(to_size(t.c)));
            if (!is_i_stratified(out, i)) return std::nullopt;
            return out;
          },
          tag);
    case BlockKind::PaAxioms:
    case BlockKind::IStratideduction:
      break;
    case BlockKind::JSmt:
      return counter_stream([plain, j](std::uint64_t k) -> std::optional<Formula> {
        return smt_instance(OperatorId::plain(j), plain->at(k));
      }, tag);
    case BlockKind::IStratiSmt:
      return counter_stream(
          [strat, supply, i](std::uint64_t k) -> std::optional<Formula> {
            auto [a, c] = unpair(k);
            std::size_t ai = to_size(a);
            if (ai >= supply.size()) return std::nullopt;
            Formula out = smt_instance(OperatorId::strat(supply[ai], i), strat->at(to_size(c)));
            if (!is_i_stratified(out, i)) return std::nullopt;
            return out;
          },
          tag);
    case BlockKind::ICollapse:
      return counter_stream(
          [strat, supply, i](std::uint64_t k) -> std::optional<Formula> {
            Triple t = untriple(k);
            std::size_t ai = to_size(t.a), bi = to_size(t.b);
            if (ai >= supply.size() || bi >= supply.size()) return std::nullopt;
            if (le1(supply[ai], supply[bi]) != Le1Verdict::Yes) return std::nullopt;
            const Formula& phi = strat->at(to_size(t.c));
            if (!is_i_stratified(Formula::op(OperatorId::strat(supply[ai], i), phi), i)) return std::nullopt;
            Formula out = collapse_instance(supply[ai], supply[bi], i, phi);
            if (!is_i_stratified(out, i)) return std::nullopt;
            return out;
          },
          tag);
    case BlockKind::ClosureOf: {
      auto src = std::make_shared<AxiomStream>(ctx.closure_source(j));
      return AxiomStream([src, j, tag]() -> std::optional<Axiom> {
        auto a = src->next();
        if (!a) return std::nullopt;
        return Axiom{Formula::op(OperatorId::plain(j), a->sentence), tag};
      });
    }
    case BlockKind::BasicOAxioms:
      return std::move(basic_o_axioms(ctx.o_limit)).map([tag](const Axiom& a) { return Axiom{a.sentence, tag}; });
  }

  if (b.kind == BlockKind::IStratideduction)
    return counter_stream(
        [strat, supply, i](std::uint64_t k) -> std::optional<Formula> {
          Triple t = untriple(k);
          std::size_t ai = to_size(t.a);
          if (ai >= supply.size()) return std::nullopt;
          Formula out = deduction_instance(OperatorId::strat(supply[ai], i), strat->at(to_size(t.b)),
                                           strat->at(to_size(t.c)));
          if (!is_i_stratified(out, i)) return std::nullopt;
          return out;
        },
        tag);

  // PA: the six axioms of Q, then induction over formulas with v0 free; i-stratified ones when
  // the context is stratified.
  auto q = std::make_shared<std::vector<Formula>>(q_axioms());
  auto source = ctx.stratified ? strat : plain;
  bool stratified = ctx.stratified;
  return counter_stream(
      [q, source, stratified, i](std::uint64_t k) -> std::optional<Formula> {
        if (k < q->size()) return (*q)[k];
        const Formula& phi = source->at(k - q->size());
        if (!free_vars(phi).count(Var{0})) return std::nullopt;
        Formula out = induction_instance(phi);
        if (stratified && !is_i_stratified(out, i)) return std::nullopt;
        return out;
      },
      tag);
}

// ---------------------------------------------------------------- recognition

namespace {

Recognition validity_verdict(const Formula& f, std::size_t budget) {
  return prove_valid(f, budget).proved() ? Recognition::Yes : Recognition::Unknown;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

bool op_matches(const Formula& f, const std::function<bool(const OperatorId&)>& which) {
  return f.kind() == FormulaKind::Op && which(f.oper());
}

// (k(phi -> psi) -> (k phi -> k conclusion)) with conclusion = make(phi, psi).
bool deduction_shape(const Formula& m, const std::function<bool(const OperatorId&)>& which,
                     const std::function<Formula(const Formula&, const Formula&)>& conclusion) {
  if (m.kind() != FormulaKind::Implies) return false;
  const Formula& first = m.sub(0);
  const Formula& rest = m.sub(1);
  if (!op_matches(first, which) || first.sub(0).kind() != FormulaKind::Implies) return false;
  if (rest.kind() != FormulaKind::Implies) return false;
  const auto& k = first.oper();
  const Formula& phi = first.sub(0).sub(0);
  const Formula& psi = first.sub(0).sub(1);
  return rest.sub(0) == Formula::op(k, phi) && rest.sub(1) == Formula::op(k, conclusion(phi, psi));
}

bool smt_shape(const Formula& m, const std::function<bool(const OperatorId&)>& which) {
  // ~forall e. ~forall x. (k phi <-> x in W[e])
  if (m.kind() != FormulaKind::Not || m.sub(0).kind() != FormulaKind::Forall) return false;
  Var e = m.sub(0).bound();
  const Formula& neg = m.sub(0).sub(0);
  if (neg.kind() != FormulaKind::Not || neg.sub(0).kind() != FormulaKind::Forall) return false;
  Var x = neg.sub(0).bound();
  auto sides = split_iff(neg.sub(0).sub(0));
  if (!sides || x == e) return false;
  const auto& [left, right] = *sides;
  if (!op_matches(left, which)) return false;
  if (free_vars(left.sub(0)).count(e)) return false;
  return right == Formula::in_w(Term::var(x), Term::var(e));
}

}  // namespace

Recognition is_block_instance(const Formula& sentence, const BlockSpec& b, const BlockContext& ctx) {
  if (!is_sentence(sentence)) return Recognition::No;
  const std::uint64_t i = b.owner;
  const std::uint64_t j = b.subject;
  auto [vars, m] = strip_closure(sentence);
  auto plain_j = [j](const OperatorId& k) { return !k.is_strat() && k.index == j; };
  auto strat_i = [i](const OperatorId& k) { return k.is_strat() && k.index == i; };
  auto yes_if = [](bool c) { return c ? Recognition::Yes : Recognition::No; };
  const std::size_t budget = ctx.prove_budget * 4;
  bool plain_sentence = is_plain(sentence);
  bool stratified = is_i_stratified(sentence, i);

  switch (b.kind) {
    case BlockKind::JDeduction:
      return yes_if(plain_sentence && deduction_shape(m, plain_j, [](const Formula&, const Formula& psi) { return psi; }));
    case BlockKind::ModifiedJDeduction:
      return yes_if(plain_sentence && deduction_shape(m, plain_j, [](const Formula& phi, const Formula& psi) {
                      return Formula::conj(psi, phi);
                    }));
    case BlockKind::IStratideduction:
      return yes_if(stratified && deduction_shape(m, strat_i, [](const Formula&, const Formula& psi) { return psi; }));
    case BlockKind::AssignedValidity:
      if (!plain_sentence) return Recognition::No;
      return validity_verdict(sentence, budget);
    case BlockKind::IAssignedStrativalidity:
      if (!stratified) return Recognition::No;
      return validity_verdict(sentence, budget);
    case BlockKind::IValidity:
      if (!plain_sentence || !op_matches(m, plain_j)) return Recognition::No;
      return validity_verdict(m.sub(0), budget);
    case BlockKind::IStrativalidity:
      if (!stratified || !op_matches(m, strat_i)) return Recognition::No;
      return validity_verdict(m.sub(0), budget);
    case BlockKind::IIntrospection:
      return yes_if(plain_sentence && m.kind() == FormulaKind::Implies && op_matches(m.sub(0), plain_j) &&
                    m.sub(1) == Formula::op(OperatorId::plain(j), m.sub(0)));
    case BlockKind::IStratrospection:
      return yes_if(stratified && m.kind() == FormulaKind::Implies && op_matches(m.sub(0), strat_i) &&
                    op_matches(m.sub(1), strat_i) && m.sub(1).sub(0) == m.sub(0));
    case BlockKind::PaAxioms: {
      for (const auto& q : q_axioms())
        if (alpha_equal(q, sentence)) return Recognition::Yes;
      if (m.kind() != FormulaKind::Implies || m.sub(1).kind() != FormulaKind::Forall) return Recognition::No;
      Var x = m.sub(1).bound();
      bool induction = m == induction_matrix(m.sub(1).sub(0), x);
      // the stratified counterpart keeps the shape; plainness is the caller's business
      return yes_if(induction && (plain_sentence || stratified));
    }
    case BlockKind::JSmt:
      return yes_if(plain_sentence && smt_shape(m, plain_j));
    case BlockKind::IStratiSmt:
      return yes_if(stratified && smt_shape(m, strat_i));
    case BlockKind::ICollapse: {
      auto sides = split_iff(m);
      if (!stratified || !sides) return Recognition::No;
      const auto& [l, r] = *sides;
      if (!op_matches(l, strat_i) || !op_matches(r, strat_i) || !(l.sub(0) == r.sub(0))) return Recognition::No;
      return yes_if(le1(*l.oper().superscript, *r.oper().superscript) == Le1Verdict::Yes);
    }
    case BlockKind::ClosureOf:
      if (!op_matches(sentence, plain_j)) return Recognition::No;
      if (!ctx.closure_member) return Recognition::Unknown;
      return ctx.closure_member(j, sentence.sub(0));
    case BlockKind::BasicOAxioms:
      return is_basic_o_axiom(sentence);
  }
  return Recognition::No;
}

}  // namespace stratalab
