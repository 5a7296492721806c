#include "stratalab/certificate.hpp"

#include <json.hpp>

#include "stratalab/errors.hpp"

namespace stratalab {

namespace {

constexpr std::pair<Rule, const char*> kRuleNames[] = {
    {Rule::Root, "root"},           {Rule::NotNot, "not-not"},     {Rule::NotImpLeft, "not-imp-1"},
    {Rule::NotImpRight, "not-imp-2"}, {Rule::ImpLeft, "imp-1"},      {Rule::ImpRight, "imp-2"},
    {Rule::Forall, "forall"},       {Rule::NotForall, "not-forall"}, {Rule::Equality, "equality"},
    {Rule::Cut, "cut"},             {Rule::CutNeg, "cut-neg"},
};

fol::Predicate eq_pred() { return fol::Predicate{fol::Predicate::Kind::Eq, {}, 0}; }
fol::Formula eq_atom(const fol::Term& a, const fol::Term& b) { return fol::Formula::atom(eq_pred(), {a, b}); }

// forall v0 ... forall v(n-1). body
fol::Formula close_over(std::uint32_t n, fol::Formula body) {
  for (std::uint32_t k = n; k-- > 0;) body = fol::Formula::forall(k, body);
  return body;
}

// (v0=vn -> ... -> v(n-1)=v(2n-1) -> last)
fol::Formula congruence(std::size_t arity, const fol::Formula& last) {
  fol::Formula body = last;
  for (std::size_t k = arity; k-- > 0;) {
    body = fol::Formula::implies(eq_atom(fol::Term::var(static_cast<std::uint32_t>(k)),
                                         fol::Term::var(static_cast<std::uint32_t>(k + arity))),
                                 body);
  }
  return close_over(static_cast<std::uint32_t>(2 * arity), body);
}

std::vector<fol::Term> var_block(std::size_t from, std::size_t n) {
  std::vector<fol::Term> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(fol::Term::var(static_cast<std::uint32_t>(from + k)));
  return out;
}

bool symbol_occurs(const fol::Formula& f, const std::string& sym) { return fol::function_symbols(f).count(sym) != 0; }

}  // namespace

const char* to_string(Rule r) {
  for (const auto& [rule, name] : kRuleNames) {
    if (rule == r) return name;
  }
  return "?";
}

std::optional<Rule> rule_from_string(std::string_view s) {
  for (const auto& [rule, name] : kRuleNames) {
    if (s == name) return rule;
  }
  return std::nullopt;
}

fol::Formula certificate_root(const std::vector<Formula>& axioms, const Formula& goal) {
  return fol::Formula::negation(fol::reduce(universal_closure(Formula::chain(axioms, goal))));
}

fol::Formula eq_symmetry() {
  auto x = fol::Term::var(0), y = fol::Term::var(1);
  return close_over(2, fol::Formula::implies(eq_atom(x, y), eq_atom(y, x)));
}

fol::Formula eq_transitivity() {
  auto x = fol::Term::var(0), y = fol::Term::var(1), z = fol::Term::var(2);
  return close_over(3, fol::Formula::implies(eq_atom(x, y), fol::Formula::implies(eq_atom(y, z), eq_atom(x, z))));
}

fol::Formula eq_congruence_function(const std::string& symbol, std::size_t arity) {
  return congruence(arity, eq_atom(fol::Term::app(symbol, var_block(0, arity)),
                                   fol::Term::app(symbol, var_block(arity, arity))));
}

fol::Formula eq_congruence_predicate(const fol::Predicate& p, std::size_t arity) {
  return congruence(arity, fol::Formula::implies(fol::Formula::atom(p, var_block(0, arity)),
                                                 fol::Formula::atom(p, var_block(arity, arity))));
}

bool is_equality_axiom(const fol::Formula& f) {
  if (f == eq_symmetry() || f == eq_transitivity()) return true;
  const fol::Formula* body = &f;
  while (body->kind() == fol::FormulaKind::Forall) body = &body->sub(0);
  while (body->kind() == fol::FormulaKind::Implies && body->sub(1).kind() == fol::FormulaKind::Implies) {
    body = &body->sub(1);
  }
  if (body->kind() == fol::FormulaKind::Implies) {
    // Predicate congruence ends in P(x) -> P(y); function congruence in f(x)=f(y).
    const fol::Formula& last = body->sub(1);
    if (last.kind() != fol::FormulaKind::Atom) return false;
    if (body->sub(0).kind() == fol::FormulaKind::Atom && body->sub(0).pred() == last.pred() &&
        f == eq_congruence_predicate(last.pred(), last.args().size())) {
      return true;
    }
    if (last.pred().kind == fol::Predicate::Kind::Eq && last.args().size() == 2 &&
        last.args()[0].kind() == fol::TermKind::App) {
      const fol::Term& lhs = last.args()[0];
      return f == eq_congruence_function(lhs.symbol(), lhs.args().size());
    }
  }
  return false;
}

// ---------------------------------------------------------------- checking

namespace {

class Checker {
 public:
  Checker(const ProofCertificate& cert, std::string* why) : cert_(cert), why_(why) {}

  bool run() {
    const auto& nodes = cert_.derivation.nodes;
    if (nodes.empty()) return fail(-1, "empty derivation");
    for (const Formula& a : cert_.axioms_used) {
      if (!free_vars(a).empty()) return fail(-1, "axiom is not a sentence: " + a.str());
    }
    if (nodes[0].rule != Rule::Root || !(nodes[0].formula == certificate_root(cert_.axioms_used, cert_.goal))) {
      return fail(0, "root does not match goal and axioms");
    }
    parent_.assign(nodes.size(), -2);
    parent_[0] = -1;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      for (int c : nodes[n].children) {
        if (c <= 0 || static_cast<std::size_t>(c) >= nodes.size()) return fail(static_cast<int>(n), "bad child id");
        if (parent_[c] != -2) return fail(c, "node has two parents");
        parent_[c] = static_cast<int>(n);
      }
    }
    for (std::size_t n = 1; n < nodes.size(); ++n) {
      if (parent_[n] == -2) return fail(static_cast<int>(n), "node unreachable from the root");
    }
    root_symbols_ = fol::function_symbols(nodes[0].formula);
    return visit(0);
  }

 private:
  bool fail(int node, const std::string& msg) {
    if (why_) *why_ = (node >= 0 ? "node " + std::to_string(node) + ": " : std::string()) + msg;
    return false;
  }

  const DerivationNode& at(int n) const { return cert_.derivation.nodes[static_cast<std::size_t>(n)]; }

  bool on_branch(int a, int of) const {
    for (int x = of; x >= 0; x = parent_[x]) {
      if (x == a) return true;
    }
    return false;
  }

  // Iterative over the tree: parents are checked before children, so ancestor tests see a tree.
  bool visit(int start) {
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      if (!check_node(n)) return false;
      for (int c : at(n).children) stack.push_back(c);
    }
    return true;
  }

  bool check_node(int n) {
    const DerivationNode& d = at(n);
    if (!fol::is_sentence(d.formula)) return fail(n, "formula is not a ground sentence");
    if (n != 0 && !check_rule(n)) return false;
    const auto& kids = d.children;
    if (kids.size() > 2) return fail(n, "more than two children");
    if (kids.size() == 2) {
      const DerivationNode& l = at(kids[0]);
      const DerivationNode& r = at(kids[1]);
      bool beta = l.rule == Rule::ImpLeft && r.rule == Rule::ImpRight && l.premise == r.premise;
      bool cut = l.rule == Rule::Cut && r.rule == Rule::CutNeg && r.formula == fol::Formula::negation(l.formula);
      if (!beta && !cut) return fail(n, "two children that are not a split pair");
    } else if (kids.size() == 1) {
      Rule r = at(kids[0]).rule;
      if (r == Rule::ImpLeft || r == Rule::ImpRight || r == Rule::Cut || r == Rule::CutNeg) {
        return fail(kids[0], "half of a split without its sibling");
      }
    } else {
      if (!d.closure) return fail(n, "open leaf");
      auto [a, b] = *d.closure;
      if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= cert_.derivation.nodes.size() ||
          static_cast<std::size_t>(b) >= cert_.derivation.nodes.size() || !on_branch(a, n) || !on_branch(b, n)) {
        return fail(n, "closure refers off the branch");
      }
      const fol::Formula& fa = at(a).formula;
      const fol::Formula& fb = at(b).formula;
      bool complementary = fa.kind() == fol::FormulaKind::Atom && fb == fol::Formula::negation(fa);
      bool refl = a == b && fa.kind() == fol::FormulaKind::Not && fa.sub(0).kind() == fol::FormulaKind::Atom &&
                  fa.sub(0).pred().kind == fol::Predicate::Kind::Eq && fa.sub(0).args().size() == 2 &&
                  fa.sub(0).args()[0] == fa.sub(0).args()[1];
      if (!complementary && !refl) return fail(n, "closure pair is not contradictory");
    }
    return true;
  }

  bool check_rule(int n) {
    const DerivationNode& d = at(n);
    const fol::Formula& f = d.formula;
    if (d.rule == Rule::Root) return fail(n, "second root");
    if (d.rule == Rule::Equality) {
      if (!is_equality_axiom(f)) return fail(n, "not an instance of the equality schema");
      return true;
    }
    if (d.rule == Rule::Cut || d.rule == Rule::CutNeg) return true;  // pairing checked at the parent
    if (d.premise < 0 || static_cast<std::size_t>(d.premise) >= cert_.derivation.nodes.size() ||
        !on_branch(d.premise, parent_[n])) {
      return fail(n, "premise is not above the node");
    }
    const fol::Formula& p = at(d.premise).formula;
    auto is_not = [](const fol::Formula& g, fol::FormulaKind k) {
      return g.kind() == fol::FormulaKind::Not && g.sub(0).kind() == k;
    };
    switch (d.rule) {
      case Rule::NotNot:
        if (is_not(p, fol::FormulaKind::Not) && f == p.sub(0).sub(0)) return true;
        break;
      case Rule::NotImpLeft:
        if (is_not(p, fol::FormulaKind::Implies) && f == p.sub(0).sub(0)) return true;
        break;
      case Rule::NotImpRight:
        if (is_not(p, fol::FormulaKind::Implies) && f == fol::Formula::negation(p.sub(0).sub(1))) return true;
        break;
      case Rule::ImpLeft:
        if (p.kind() == fol::FormulaKind::Implies && f == fol::Formula::negation(p.sub(0))) return true;
        break;
      case Rule::ImpRight:
        if (p.kind() == fol::FormulaKind::Implies && f == p.sub(1)) return true;
        break;
      case Rule::Forall:
        if (p.kind() == fol::FormulaKind::Forall && d.term && d.term->ground() &&
            f == fol::instantiate(p.sub(0), p.bound(), *d.term)) {
          return true;
        }
        break;
      case Rule::NotForall: {
        if (!is_not(p, fol::FormulaKind::Forall) || !d.term || !d.term->ground() ||
            d.term->kind() != fol::TermKind::App || d.term->symbol().rfind("sk", 0) != 0) {
          break;
        }
        const std::string& sk = d.term->symbol();
        if (root_symbols_.count(sk)) return fail(n, "Skolem symbol occurs in the root");
        for (int x = parent_[n]; x >= 0; x = parent_[x]) {
          if (symbol_occurs(at(x).formula, sk)) return fail(n, "Skolem symbol not fresh on the branch");
        }
        for (const fol::Term& a : d.term->args()) {
          std::set<std::string> inner;
          fol::function_symbols(a, inner);
          if (inner.count(sk)) return fail(n, "Skolem symbol occurs in its own arguments");
        }
        const fol::Formula& q = p.sub(0);
        if (f == fol::Formula::negation(fol::instantiate(q.sub(0), q.bound(), *d.term))) return true;
        break;
      }
      default:
        break;
    }
    return fail(n, std::string("rule ") + to_string(d.rule) + " does not produce this formula");
  }

  const ProofCertificate& cert_;
  std::string* why_;
  std::vector<int> parent_;
  std::set<std::string> root_symbols_;
};

}  // namespace

bool check_certificate(const ProofCertificate& cert, std::string* why) { return Checker(cert, why).run(); }

// ---------------------------------------------------------------- serialization

std::string certificate_to_json(const ProofCertificate& cert) {
  nlohmann::json j;
  j["goal"] = cert.goal.str();
  j["axioms_used"] = nlohmann::json::array();
  for (const Formula& a : cert.axioms_used) j["axioms_used"].push_back(a.str());
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t n = 0; n < cert.derivation.nodes.size(); ++n) {
    const DerivationNode& d = cert.derivation.nodes[n];
    nlohmann::json node;
    node["id"] = n;
    node["rule"] = to_string(d.rule);
    node["formula"] = d.formula.str();
    if (d.premise >= 0) node["premise"] = d.premise;
    if (d.term) node["term"] = d.term->str();
    node["children"] = d.children;
    if (d.closure) node["closure"] = {d.closure->first, d.closure->second};
    nodes.push_back(std::move(node));
  }
  j["derivation"] = {{"nodes", std::move(nodes)}};
  return j.dump(2);
}

ProofCertificate certificate_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, "certificate is not JSON");
  }
  try {
    ProofCertificate cert{parse_formula(j.at("goal").get<std::string>()), {}, {}};
    for (const auto& a : j.at("axioms_used")) cert.axioms_used.push_back(parse_formula(a.get<std::string>()));
    const auto& nodes = j.at("derivation").at("nodes");
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const auto& node = nodes[n];
      if (node.at("id").get<std::size_t>() != n) throw Error("certificate node ids must be 0..n-1 in order");
      auto rule = rule_from_string(node.at("rule").get<std::string>());
      if (!rule) throw Error("unknown rule '" + node.at("rule").get<std::string>() + "'");
      DerivationNode d{*rule, -1, std::nullopt, fol::parse_formula(node.at("formula").get<std::string>()), {}, {}};
      if (node.contains("premise")) d.premise = node["premise"].get<int>();
      if (node.contains("term")) d.term = fol::parse_term(node["term"].get<std::string>());
      d.children = node.at("children").get<std::vector<int>>();
      if (node.contains("closure")) {
        auto pair = node["closure"].get<std::vector<int>>();
        if (pair.size() != 2) throw Error("closure must name two nodes");
        d.closure = std::make_pair(pair[0], pair[1]);
      }
      cert.derivation.nodes.push_back(std::move(d));
    }
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace stratalab
