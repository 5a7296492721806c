#include "tableau.hpp"

#include <pthread.h>

#include <deque>
#include <exception>
#include <functional>
#include <map>

#include "stratalab/errors.hpp"

namespace stratalab::detail {

namespace {

struct Exhausted {};

using fol::Formula;
using fol::FormulaKind;
using fol::Term;
using fol::TermKind;

bool is_literal(const Formula& f) {
  return f.kind() == FormulaKind::Atom || (f.kind() == FormulaKind::Not && f.sub(0).kind() == FormulaKind::Atom);
}

// Items that never branch or consume a quantifier instance go first.
bool is_cheap(const Formula& f) { return f.kind() == FormulaKind::Atom || f.kind() == FormulaKind::Not; }

void collect_predicates(const Formula& f, std::map<std::string, std::pair<fol::Predicate, std::size_t>>& out) {
  if (f.kind() == FormulaKind::Atom) {
    out.emplace(f.pred().name() + "/" + std::to_string(f.args().size()), std::make_pair(f.pred(), f.args().size()));
    return;
  }
  collect_predicates(f.sub(0), out);
  if (f.kind() == FormulaKind::Implies) collect_predicates(f.sub(1), out);
}

std::size_t function_arity(const Formula& f, const std::string& sym);

std::size_t term_arity(const Term& t, const std::string& sym) {
  if (t.kind() != TermKind::App) return 0;
  if (t.symbol() == sym) return t.args().size();
  for (const Term& a : t.args()) {
    if (std::size_t n = term_arity(a, sym)) return n;
  }
  return 0;
}

std::size_t function_arity(const Formula& f, const std::string& sym) {
  if (f.kind() == FormulaKind::Atom) {
    for (const Term& a : f.args()) {
      if (std::size_t n = term_arity(a, sym)) return n;
    }
    return 0;
  }
  if (std::size_t n = function_arity(f.sub(0), sym)) return n;
  return f.kind() == FormulaKind::Implies ? function_arity(f.sub(1), sym) : 0;
}

std::vector<Formula> equality_axioms_for(const Formula& root) {
  std::map<std::string, std::pair<fol::Predicate, std::size_t>> preds;
  collect_predicates(root, preds);
  bool has_eq = false;
  for (const auto& [name, p] : preds) has_eq = has_eq || p.first.kind == fol::Predicate::Kind::Eq;
  if (!has_eq) return {};
  std::vector<Formula> out{eq_symmetry(), eq_transitivity()};
  for (const std::string& sym : fol::function_symbols(root)) {
    std::size_t arity = sym == "S" ? 1 : function_arity(root, sym);
    if (arity > 0) out.push_back(eq_congruence_function(sym, arity));
  }
  for (const auto& [name, p] : preds) {
    if (p.first.kind != fol::Predicate::Kind::Eq && p.second > 0) {
      out.push_back(eq_congruence_predicate(p.first, p.second));
    }
  }
  return out;
}

class Search {
 public:
  explicit Search(std::size_t budget) : budget_(budget) {}

  std::size_t used() const noexcept { return used_; }
  bool limit_hit() const noexcept { return limit_hit_; }

  std::optional<Derivation> attempt(const Formula& root, unsigned gamma_limit, const std::vector<Formula>& extra) {
    arena_.clear();
    bindings_.clear();
    trail_.clear();
    limit_hit_ = false;
    depth_ = 0;
    int r = add(-1, Rule::Root, -1, root, std::nullopt);
    Branch b;
    b.leaf = r;
    b.gamma_left = gamma_limit;
    for (const Formula& ax : extra) {
      b.leaf = add(b.leaf, Rule::Equality, -1, ax, std::nullopt);
      b.queue.push_back(Item{ax, b.leaf});
    }
    Cont done = [] { return true; };
    if (!prove(Item{root, r}, std::move(b), done)) return std::nullopt;
    return extract();
  }

 private:
  struct Item {
    Formula f;
    int node;
  };
  struct Branch {
    std::deque<Item> queue;
    std::vector<Item> lits;
    int leaf = -1;
    std::vector<Term> metas;
    unsigned gamma_left = 0;
  };
  struct ArenaNode {
    int parent;
    Rule rule;
    int premise;
    Formula f;
    std::optional<Term> term;
    bool closure = false;
    int ca = -1, cb = -1;
  };
  using Cont = std::function<bool()>;

  static constexpr std::size_t kMaxDepth = 60000;

  int add(int parent, Rule rule, int premise, const Formula& f, std::optional<Term> term) {
    if (++used_ > budget_) throw Exhausted{};
    arena_.push_back(ArenaNode{parent, rule, premise, f, std::move(term)});
    return static_cast<int>(arena_.size()) - 1;
  }

  // ---------------------------------------------------------------- unification
  Term deref(Term t) const {
    while (t.kind() == TermKind::Meta && bindings_[t.id()]) t = *bindings_[t.id()];
    return t;
  }

  bool occurs(std::uint32_t m, const Term& t0) const {
    Term t = deref(t0);
    if (t.kind() == TermKind::Meta) return t.id() == m;
    if (t.kind() != TermKind::App || t.ground()) return false;
    for (const Term& a : t.args()) {
      if (occurs(m, a)) return true;
    }
    return false;
  }

  bool bind(std::uint32_t m, const Term& t) {
    if (occurs(m, t)) return false;
    bindings_[m] = t;
    trail_.push_back(m);
    return true;
  }

  bool unify(const Term& a0, const Term& b0) {
    Term a = deref(a0);
    Term b = deref(b0);
    if (a.kind() == TermKind::Meta) {
      if (b.kind() == TermKind::Meta && b.id() == a.id()) return true;
      return bind(a.id(), b);
    }
    if (b.kind() == TermKind::Meta) return bind(b.id(), a);
    if (a.kind() == TermKind::Num && b.kind() == TermKind::Num) return a.value() == b.value();
    if (a.kind() == TermKind::Num) std::swap(a, b);
    if (b.kind() == TermKind::Num) {
      // a is an application; only S(x) can meet a positive numeral.
      if (a.kind() != TermKind::App || a.symbol() != "S" || a.args().size() != 1 || b.value() == 0) return false;
      return unify(a.args()[0], Term::num(b.value() - 1));
    }
    if (a.kind() == TermKind::Var || b.kind() == TermKind::Var) return a == b;
    if (a.symbol() != b.symbol() || a.args().size() != b.args().size()) return false;
    for (std::size_t k = 0; k < a.args().size(); ++k) {
      if (!unify(a.args()[k], b.args()[k])) return false;
    }
    return true;
  }

  bool unify_args(const std::vector<Term>& x, const std::vector<Term>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (!unify(x[k], y[k])) return false;
    }
    return true;
  }

  void undo(std::size_t arena_mark, std::size_t trail_mark) {
    arena_.erase(arena_.begin() + static_cast<std::ptrdiff_t>(arena_mark), arena_.end());
    while (trail_.size() > trail_mark) {
      bindings_[trail_.back()].reset();
      trail_.pop_back();
    }
  }

  Term fresh_meta() {
    bindings_.emplace_back();
    return Term::meta(static_cast<std::uint32_t>(bindings_.size() - 1));
  }

  // ---------------------------------------------------------------- expansion
  struct DepthGuard {
    std::size_t& d;
    explicit DepthGuard(std::size_t& depth) : d(depth) {
      if (++d > kMaxDepth) throw Exhausted{};
    }
    ~DepthGuard() { --d; }
  };

  bool next(Branch b, const Cont& k) {
    if (b.queue.empty()) return false;
    auto pick = b.queue.begin();
    for (auto it = b.queue.begin(); it != b.queue.end(); ++it) {
      if (is_cheap(it->f)) {
        pick = it;
        break;
      }
    }
    Item cur = *pick;
    b.queue.erase(pick);
    return prove(std::move(cur), std::move(b), k);
  }

  bool prove(Item cur, Branch b, const Cont& k) {
    DepthGuard guard(depth_);
    const Formula& f = cur.f;
    if (is_literal(f)) return literal(cur, std::move(b), k);
    if (f.kind() == FormulaKind::Implies) {
      int n1 = add(b.leaf, Rule::ImpLeft, cur.node, Formula::negation(f.sub(0)), std::nullopt);
      int n2 = add(b.leaf, Rule::ImpRight, cur.node, f.sub(1), std::nullopt);
      Branch right = b;
      right.leaf = n2;
      b.leaf = n1;
      Item second{f.sub(1), n2};
      Cont then = [this, &second, &right, &k] { return prove(second, right, k); };
      return prove(Item{Formula::negation(f.sub(0)), n1}, std::move(b), then);
    }
    if (f.kind() == FormulaKind::Forall) {
      if (b.gamma_left == 0) {
        limit_hit_ = true;
        return next(std::move(b), k);
      }
      Term m = fresh_meta();
      Formula inst = fol::instantiate(f.sub(0), f.bound(), m);
      int n = add(b.leaf, Rule::Forall, cur.node, inst, m);
      b.leaf = n;
      b.metas.push_back(m);
      --b.gamma_left;
      b.queue.push_back(cur);
      return prove(Item{inst, n}, std::move(b), k);
    }
    // f is a negation of a compound formula
    const Formula& g = f.sub(0);
    switch (g.kind()) {
      case FormulaKind::Not: {
        int n = add(b.leaf, Rule::NotNot, cur.node, g.sub(0), std::nullopt);
        b.leaf = n;
        return prove(Item{g.sub(0), n}, std::move(b), k);
      }
      case FormulaKind::Implies: {
        int n1 = add(b.leaf, Rule::NotImpLeft, cur.node, g.sub(0), std::nullopt);
        Formula neg = Formula::negation(g.sub(1));
        int n2 = add(n1, Rule::NotImpRight, cur.node, neg, std::nullopt);
        b.leaf = n2;
        b.queue.push_front(Item{neg, n2});
        return prove(Item{g.sub(0), n1}, std::move(b), k);
      }
      case FormulaKind::Forall: {
        Term sk = Term::app("sk" + std::to_string(arena_.size()), b.metas);
        Formula inst = Formula::negation(fol::instantiate(g.sub(0), g.bound(), sk));
        int n = add(b.leaf, Rule::NotForall, cur.node, inst, sk);
        b.leaf = n;
        return prove(Item{inst, n}, std::move(b), k);
      }
      default:
        return false;
    }
  }

  bool close_with(int leaf, int a, int c, std::size_t trail_mark, const Cont& k, bool& stop) {
    arena_.push_back(ArenaNode{leaf, Rule::Root, -1, arena_[static_cast<std::size_t>(c)].f, std::nullopt, true, a, c});
    if (k()) return true;
    // A closure that bound nothing is as general as any alternative here.
    stop = trail_.size() == trail_mark;
    return false;
  }

  bool literal(const Item& cur, Branch b, const Cont& k) {
    const Formula& f = cur.f;
    std::size_t amark = arena_.size();
    std::size_t tmark = trail_.size();
    bool stop = false;
    if (f.kind() == FormulaKind::Not && f.sub(0).pred().kind == fol::Predicate::Kind::Eq &&
        f.sub(0).args().size() == 2) {
      if (unify(f.sub(0).args()[0], f.sub(0).args()[1])) {
        if (close_with(b.leaf, cur.node, cur.node, tmark, k, stop)) return true;
        undo(amark, tmark);
        if (stop) return false;
      }
      undo(amark, tmark);
    }
    bool positive = f.kind() == FormulaKind::Atom;
    const Formula& atom = positive ? f : f.sub(0);
    for (const Item& l : b.lits) {
      bool lpos = l.f.kind() == FormulaKind::Atom;
      if (lpos == positive) continue;
      const Formula& latom = lpos ? l.f : l.f.sub(0);
      if (!(latom.pred() == atom.pred())) continue;
      if (unify_args(atom.args(), latom.args())) {
        int pos_node = positive ? cur.node : l.node;
        int neg_node = positive ? l.node : cur.node;
        if (close_with(b.leaf, pos_node, neg_node, tmark, k, stop)) return true;
        undo(amark, tmark);
        if (stop) return false;
      }
      undo(amark, tmark);
    }
    b.lits.push_back(cur);
    return next(std::move(b), k);
  }

  // ---------------------------------------------------------------- result
  Term resolve(const Term& t) const {
    Term d = deref(t);
    if (d.kind() == TermKind::Meta) return Term::num(0);
    if (d.kind() != TermKind::App || d.ground()) return d;
    std::vector<Term> args;
    for (const Term& a : d.args()) args.push_back(resolve(a));
    return Term::app(d.symbol(), std::move(args));
  }

  Formula resolve(const Formula& f) const {
    return fol::map_terms(f, [this](const Term& t) -> std::optional<Term> { return resolve(t); });
  }

  Derivation extract() const {
    Derivation d;
    std::vector<int> id(arena_.size(), -1);
    for (std::size_t n = 0; n < arena_.size(); ++n) {
      const ArenaNode& a = arena_[n];
      if (a.closure) {
        auto& leaf = d.nodes[static_cast<std::size_t>(id[static_cast<std::size_t>(a.parent)])];
        leaf.closure = std::make_pair(id[static_cast<std::size_t>(a.ca)], id[static_cast<std::size_t>(a.cb)]);
        continue;
      }
      id[n] = static_cast<int>(d.nodes.size());
      DerivationNode node{a.rule, a.premise < 0 ? -1 : id[static_cast<std::size_t>(a.premise)], std::nullopt,
                          resolve(a.f), {}, std::nullopt};
      if (a.term) node.term = resolve(*a.term);
      if (a.parent >= 0) d.nodes[static_cast<std::size_t>(id[static_cast<std::size_t>(a.parent)])].children.push_back(id[n]);
      d.nodes.push_back(std::move(node));
    }
    return d;
  }

  std::size_t budget_;
  std::size_t used_ = 0;
  bool limit_hit_ = false;
  std::size_t depth_ = 0;
  std::vector<ArenaNode> arena_;
  std::vector<std::optional<Term>> bindings_;
  std::vector<std::uint32_t> trail_;
};

Refutation run_search(const Formula& root, std::size_t budget) {
  Search s(budget);
  std::vector<Formula> eq = equality_axioms_for(root);
  bool plain_done = false;
  try {
    for (unsigned g = 0;; ++g) {
      if (!plain_done) {
        if (auto d = s.attempt(root, g, {})) return {std::move(d), s.used()};
        plain_done = !s.limit_hit();
      }
      if (!eq.empty() && g > 0) {
        if (auto d = s.attempt(root, g, eq)) return {std::move(d), s.used()};
      } else if (plain_done && eq.empty()) {
        break;
      }
    }
  } catch (const Exhausted&) {
  }
  return {std::nullopt, std::min(s.used(), budget)};
}

// Deep continuation chains need more than the default thread stack.
struct Job {
  const Formula* root;
  std::size_t budget;
  Refutation out;
  std::exception_ptr error;
};

void* run_job(void* p) {
  auto* job = static_cast<Job*>(p);
  try {
    job->out = run_search(*job->root, job->budget);
  } catch (...) {
    job->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

Refutation refute(const fol::Formula& root, std::size_t budget) {
  Job job{&root, budget, {}, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, std::size_t{512} << 20);
  pthread_t thread;
  if (pthread_create(&thread, &attr, run_job, &job) != 0) {
    pthread_attr_destroy(&attr);
    run_job(&job);
  } else {
    pthread_attr_destroy(&attr);
    pthread_join(thread, nullptr);
  }
  if (job.error) std::rethrow_exception(job.error);
  return std::move(job.out);
}

}  // namespace stratalab::detail
