#include "stratalab/entailment.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "stratalab/errors.hpp"
#include "stratalab/stratification.hpp"
#include "tableau.hpp"

namespace stratalab {

fol::Formula reduce_to_fol(const Formula& f) { return fol::reduce(f); }

ProveVerdict prove_chain(const std::vector<Formula>& axioms, const Formula& goal, std::size_t budget) {
  for (const Formula& a : axioms) {
    if (!free_vars(a).empty()) throw PreconditionError("axiom is not a sentence: " + a.str());
  }
  detail::Refutation r = detail::refute(certificate_root(axioms, goal), budget);
  ProveVerdict v;
  v.expansions = r.expansions;
  if (r.derivation) v.certificate = ProofCertificate{goal, axioms, std::move(*r.derivation)};
  return v;
}

ProveVerdict prove_valid(const Formula& f, std::size_t budget) { return prove_chain({}, f, budget); }

namespace {

// Axioms whose chain node feeds, through premises, some closure.
std::vector<Formula> used_axioms(const ProofCertificate& cert) {
  const auto& nodes = cert.derivation.nodes;
  std::vector<bool> needed(nodes.size(), false);
  std::vector<int> work;
  for (const auto& n : nodes) {
    if (n.closure) {
      work.push_back(n.closure->first);
      work.push_back(n.closure->second);
    }
  }
  while (!work.empty()) {
    int x = work.back();
    work.pop_back();
    if (x < 0 || needed[static_cast<std::size_t>(x)]) continue;
    needed[static_cast<std::size_t>(x)] = true;
    work.push_back(nodes[static_cast<std::size_t>(x)].premise);
  }
  std::vector<Formula> out;
  for (const Formula& a : cert.axioms_used) {
    fol::Formula reduced = fol::reduce(a);
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (needed[n] && nodes[n].rule == Rule::NotImpLeft && nodes[n].formula == reduced) {
        out.push_back(a);
        break;
      }
    }
  }
  return out;
}

}  // namespace

ProveVerdict entails(AxiomStream axioms, const Formula& goal, std::size_t budget, EntailOptions options) {
  std::vector<Formula> pulled;
  bool exhausted = false;
  std::size_t spent = 0;
  for (std::size_t round = 1; spent < budget; ++round) {
    if (!exhausted) {
      if (auto a = axioms.next()) {
        pulled.push_back(a->sentence);
      } else {
        exhausted = true;
      }
    }
    std::size_t remaining = budget - spent;
    std::size_t allowance = exhausted ? remaining : std::min(remaining, round * options.expansions_per_axiom);
    ProveVerdict v = prove_chain(pulled, goal, allowance);
    spent += v.expansions;
    if (v.proved()) {
      std::vector<Formula> used = used_axioms(*v.certificate);
      if (used.size() < pulled.size()) {
        ProveVerdict pruned = prove_chain(used, goal, allowance);
        spent += pruned.expansions;
        if (pruned.proved()) v.certificate = std::move(pruned.certificate);
      }
      v.expansions = spent;
      return v;
    }
    if (exhausted) break;
  }
  ProveVerdict out;
  out.expansions = std::min(spent, budget);
  return out;
}

ProveVerdict entails(const std::vector<Formula>& axioms, const Formula& goal, std::size_t budget,
                     EntailOptions options) {
  return entails(AxiomStream::from_sentences(axioms, "given"), goal, budget, options);
}

// ---------------------------------------------------------------- certificate maps

namespace {

ProofCertificate map_cert(const ProofCertificate& cert, const std::function<Formula(const Formula&)>& on_formula,
                          const std::function<fol::Predicate(const fol::Predicate&)>& on_pred) {
  ProofCertificate out{on_formula(cert.goal), {}, cert.derivation};
  for (const Formula& a : cert.axioms_used) out.axioms_used.push_back(on_formula(a));
  for (auto& n : out.derivation.nodes) n.formula = fol::map_predicates(n.formula, on_pred);
  return out;
}

}  // namespace

ProofCertificate erase_certificate(const ProofCertificate& cert) {
  return map_cert(
      cert, [](const Formula& f) { return erase(f); }, [](const fol::Predicate& p) { return fol::erase(p); });
}

ProofCertificate map_certificate(const OrdMap& h, const ProofCertificate& cert) {
  return map_cert(
      cert, [&h](const Formula& f) { return apply_ordmap(h, f); },
      [&h](const fol::Predicate& p) { return fol::apply_ordmap(h, p); });
}

std::optional<ProofCertificate> collapse_certificate(const ProofCertificate& cert, std::uint64_t n, std::uint64_t i,
                                                     const Le1Oracle* oracle) {
  if (n == 0) throw PreconditionError("collapse bound must be positive");
  Ordinal bound = Ordinal::eps(n);
  if (!within_cut(cert.goal, bound)) throw PreconditionError("goal carries a superscript >= " + bound.str());
  for (const Formula& a : cert.axioms_used) {
    if (!is_i_stratified(a, i)) throw PreconditionError("axiom is not " + std::to_string(i) + "-stratified: " + a.str());
  }
  std::set<Ordinal> on = superscripts(Formula::chain(cert.axioms_used, cert.goal));
  std::set<Ordinal> x, y;
  for (const Ordinal& a : on) (a < bound ? x : y).insert(a);
  if (y.empty()) return cert;
  auto collapsed = pattern_collapse(x, y, bound, oracle);
  if (!collapsed) return std::nullopt;
  return map_certificate(collapsed->map, cert);
}

// ---------------------------------------------------------------- cut composition

namespace {

class Grafter {
 public:
  explicit Grafter(Derivation& out) : out_(out) {}

  int add(DerivationNode node, int parent) {
    out_.nodes.push_back(std::move(node));
    int id = static_cast<int>(out_.nodes.size()) - 1;
    if (parent >= 0) out_.nodes[static_cast<std::size_t>(parent)].children.push_back(id);
    return id;
  }

  // Copies src below attach. src's chain expansion (its root, the axiom nodes and the negated
  // goal) is identified with axiom_targets / goal_target, which lie above attach.
  void graft(const ProofCertificate& src, const std::vector<int>& axiom_targets, int goal_target, int attach) {
    const auto& nodes = src.derivation.nodes;
    std::size_t n_ax = src.axioms_used.size();
    map_.assign(nodes.size(), -1);
    rest_.assign(nodes.size(), -1);
    chain_.assign(nodes.size(), false);
    rest_[0] = 0;
    chain_[0] = true;
    if (n_ax == 0) map_[0] = goal_target;
    copy(src, 0, attach, n_ax, axiom_targets, goal_target);
  }

 private:
  void classify(const ProofCertificate& src, int x, std::size_t n_ax, const std::vector<int>& axiom_targets,
                int goal_target) {
    const DerivationNode& d = src.derivation.nodes[static_cast<std::size_t>(x)];
    if (d.premise < 0) return;
    int k = rest_[static_cast<std::size_t>(d.premise)];
    if (k < 0 || static_cast<std::size_t>(k) >= n_ax) return;
    if (d.rule == Rule::NotImpLeft) {
      chain_[static_cast<std::size_t>(x)] = true;
      map_[static_cast<std::size_t>(x)] = axiom_targets[static_cast<std::size_t>(k)];
    } else if (d.rule == Rule::NotImpRight) {
      chain_[static_cast<std::size_t>(x)] = true;
      rest_[static_cast<std::size_t>(x)] = k + 1;
      if (static_cast<std::size_t>(k + 1) == n_ax) map_[static_cast<std::size_t>(x)] = goal_target;
    }
  }

  void copy(const ProofCertificate& src, int x, int parent, std::size_t n_ax, const std::vector<int>& axiom_targets,
            int goal_target) {
    const DerivationNode& d = src.derivation.nodes[static_cast<std::size_t>(x)];
    if (x != 0) classify(src, x, n_ax, axiom_targets, goal_target);
    int here = parent;
    if (!chain_[static_cast<std::size_t>(x)]) {
      DerivationNode node{d.rule, d.premise < 0 ? -1 : map_[static_cast<std::size_t>(d.premise)], d.term, d.formula,
                          {}, std::nullopt};
      here = add(std::move(node), parent);
      map_[static_cast<std::size_t>(x)] = here;
    }
    for (int c : d.children) copy(src, c, here, n_ax, axiom_targets, goal_target);
    if (d.closure) {
      out_.nodes[static_cast<std::size_t>(here)].closure =
          std::make_pair(map_[static_cast<std::size_t>(d.closure->first)], map_[static_cast<std::size_t>(d.closure->second)]);
    }
  }

  Derivation& out_;
  std::vector<int> map_;
  std::vector<int> rest_;
  std::vector<bool> chain_;
};

void require_sentence(const Formula& f, const char* what) {
  if (!free_vars(f).empty()) throw PreconditionError(std::string(what) + " is not a sentence: " + f.str());
}

}  // namespace

ProofCertificate compose_cut(const ProofCertificate& c1, const ProofCertificate& c2) {
  if (c2.axioms_used.empty() || !(c2.axioms_used.back() == c1.goal)) {
    throw PreconditionError("second certificate must use the lemma as its last axiom");
  }
  require_sentence(c1.goal, "lemma");
  require_sentence(c2.goal, "goal");
  std::vector<Formula> axioms = c1.axioms_used;
  axioms.insert(axioms.end(), c2.axioms_used.begin(), c2.axioms_used.end() - 1);

  ProofCertificate out{c2.goal, axioms, {}};
  Grafter g(out.derivation);
  int cur = g.add(DerivationNode{Rule::Root, -1, std::nullopt, certificate_root(axioms, c2.goal), {}, std::nullopt}, -1);
  std::vector<int> axiom_nodes;
  fol::Formula rest = out.derivation.nodes[0].formula.sub(0);
  for (const Formula& a : axioms) {
    (void)a;
    int left = g.add(DerivationNode{Rule::NotImpLeft, cur, std::nullopt, rest.sub(0), {}, std::nullopt}, cur);
    fol::Formula neg = fol::Formula::negation(rest.sub(1));
    int right = g.add(DerivationNode{Rule::NotImpRight, cur, std::nullopt, neg, {}, std::nullopt}, left);
    axiom_nodes.push_back(left);
    rest = rest.sub(1);
    cur = right;
  }
  fol::Formula lemma = fol::reduce(c1.goal);
  int pos = g.add(DerivationNode{Rule::Cut, -1, std::nullopt, lemma, {}, std::nullopt}, cur);
  int neg = g.add(DerivationNode{Rule::CutNeg, -1, std::nullopt, fol::Formula::negation(lemma), {}, std::nullopt}, cur);

  std::vector<int> c2_targets(axiom_nodes.begin() + static_cast<std::ptrdiff_t>(c1.axioms_used.size()), axiom_nodes.end());
  c2_targets.push_back(pos);
  g.graft(c2, c2_targets, cur, pos);
  std::vector<int> c1_targets(axiom_nodes.begin(), axiom_nodes.begin() + static_cast<std::ptrdiff_t>(c1.axioms_used.size()));
  g.graft(c1, c1_targets, neg, neg);
  return out;
}

// ---------------------------------------------------------------- schema instances

std::optional<Formula> StratifiedSchemaSupply::strativalidity(const Ordinal& a, std::uint64_t i,
                                                               const Formula& phi) const {
  Formula f = Formula::op(OperatorId::strat(a, i), phi);
  if (!is_i_stratified(f, i)) return std::nullopt;
  return universal_closure(f);
}

std::optional<Formula> StratifiedSchemaSupply::stratideduction(const Ordinal& a, std::uint64_t i, const Formula& phi,
                                                                const Formula& psi) const {
  OperatorId k = OperatorId::strat(a, i);
  Formula f = Formula::implies(Formula::op(k, Formula::implies(phi, psi)),
                               Formula::implies(Formula::op(k, phi), Formula::op(k, psi)));
  if (!is_i_stratified(f, i)) return std::nullopt;
  return universal_closure(f);
}

std::optional<Formula> StratifiedSchemaSupply::boxed(const Ordinal& a, std::uint64_t i, const Formula& sigma) const {
  Formula f = Formula::op(OperatorId::strat(a, i), sigma);
  if (!is_i_stratified(f, i) || !free_vars(f).empty()) return std::nullopt;
  return f;
}

namespace {

Formula demand(const std::optional<Formula>& f, const std::string& what) {
  if (!f) throw Error("schema supply has no " + what + " instance");
  return *f;
}

}  // namespace

ProofCertificate internalize(const ProofCertificate& cert, const Ordinal& alpha, const Ordinal& beta, std::uint64_t i,
                             const SchemaSupply& supply, std::size_t budget) {
  if (!(alpha < beta)) throw PreconditionError("internalize needs beta > alpha");
  OperatorId k = OperatorId::strat(alpha, i);
  Formula target = Formula::op(k, cert.goal);
  require_sentence(target, "internalized goal");
  if (!is_i_stratified(target, i)) throw PreconditionError("not " + std::to_string(i) + "-stratified: " + target.str());
  for (const Formula& s : cert.axioms_used) {
    if (!within_cut(s, alpha)) throw PreconditionError("axiom outside T n " + alpha.str() + ": " + s.str());
  }
  std::string why;
  if (!check_certificate(cert, &why)) throw PreconditionError("input certificate does not check: " + why);

  const auto& sigma = cert.axioms_used;
  std::vector<Formula> rests(sigma.size() + 1, cert.goal);
  for (std::size_t j = sigma.size(); j-- > 0;) rests[j] = Formula::implies(sigma[j], rests[j + 1]);

  std::vector<Formula> axioms{demand(supply.strativalidity(alpha, i, rests[0]), "Strativalidity")};
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    axioms.push_back(demand(supply.stratideduction(alpha, i, sigma[j], rests[j + 1]), "Stratideduction"));
    axioms.push_back(demand(supply.boxed(alpha, i, sigma[j]), "boxed-axiom"));
  }
  for (const Formula& a : axioms) {
    if (!within_cut(a, beta)) throw PreconditionError("instance outside T n " + beta.str() + ": " + a.str());
  }
  ProveVerdict v = prove_chain(axioms, target, budget);
  if (!v.proved()) throw Error("internalize: chain of deductions not found within budget");
  return std::move(*v.certificate);
}

std::optional<std::pair<Formula, Formula>> split_iff(const Formula& f) {
  if (f.kind() != FormulaKind::Not) return std::nullopt;
  const Formula& g = f.sub(0);
  if (g.kind() != FormulaKind::Implies) return std::nullopt;
  const Formula& fwd = g.sub(0);
  const Formula& neg = g.sub(1);
  if (fwd.kind() != FormulaKind::Implies || neg.kind() != FormulaKind::Not) return std::nullopt;
  const Formula& back = neg.sub(0);
  if (back.kind() != FormulaKind::Implies) return std::nullopt;
  if (!(back.sub(0) == fwd.sub(1)) || !(back.sub(1) == fwd.sub(0))) return std::nullopt;
  return std::make_pair(fwd.sub(0), fwd.sub(1));
}

ProofCertificate box_iff(const ProofCertificate& cert, const Ordinal& alpha, std::uint64_t i,
                         const SchemaSupply& supply, std::size_t budget) {
  OperatorId k = OperatorId::strat(alpha, i);
  const Formula& lemma = cert.goal;
  std::optional<std::pair<Formula, Formula>> sides;
  if (lemma.kind() == FormulaKind::Op && lemma.oper() == k) sides = split_iff(lemma.sub(0));
  if (!sides) throw PreconditionError("certificate goal is not " + k.str() + "(rho <-> sigma)");
  if (!is_i_stratified(lemma, i)) throw PreconditionError("not " + std::to_string(i) + "-stratified: " + lemma.str());
  require_sentence(lemma, "boxed biconditional");
  std::string why;
  if (!check_certificate(cert, &why)) throw PreconditionError("input certificate does not check: " + why);

  const auto& [rho, sigma] = *sides;
  Formula goal = Formula::iff(Formula::op(k, rho), Formula::op(k, sigma));
  if (alpha_equal(rho, sigma)) {
    ProveVerdict v = prove_valid(goal, budget);
    if (!v.proved()) throw Error("box_iff: variant case not closed within budget");
    return std::move(*v.certificate);
  }
  Formula bic = lemma.sub(0);
  Formula to = Formula::implies(rho, sigma);
  Formula from = Formula::implies(sigma, rho);
  std::vector<Formula> axioms{
      demand(supply.strativalidity(alpha, i, Formula::implies(bic, to)), "Strativalidity"),
      demand(supply.stratideduction(alpha, i, bic, to), "Stratideduction"),
      demand(supply.stratideduction(alpha, i, rho, sigma), "Stratideduction"),
      demand(supply.strativalidity(alpha, i, Formula::implies(bic, from)), "Strativalidity"),
      demand(supply.stratideduction(alpha, i, bic, from), "Stratideduction"),
      demand(supply.stratideduction(alpha, i, sigma, rho), "Stratideduction"),
      lemma,
  };
  ProveVerdict v = prove_chain(axioms, goal, budget);
  if (!v.proved()) throw Error("box_iff: biconditional not assembled within budget");
  return compose_cut(cert, *v.certificate);
}

}  // namespace stratalab
