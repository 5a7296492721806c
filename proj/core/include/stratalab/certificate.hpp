#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stratalab/fol.hpp"
#include "stratalab/formula.hpp"

namespace stratalab {

// Tableau rules over the primitives ~, ->, forall. Every node carries one ground sentence.
enum class Rule : std::uint8_t {
  Root,         // ~ucl(s1 -> ... -> sn -> goal), reduced
  NotNot,       // ~~A gives A
  NotImpLeft,   // ~(A -> B) gives A
  NotImpRight,  // ~(A -> B) gives ~B
  ImpLeft,      // A -> B splits into ~A | B; both halves are siblings
  ImpRight,
  Forall,       // forall x A gives A[x:=t], t ground
  NotForall,    // ~forall x A gives ~A[x:=f(...)], f a Skolem symbol fresh on the branch
  Equality,     // an instance of the equality schema for some symbol
  Cut,          // A | ~A for a sentence A; both halves are siblings
  CutNeg,
};

const char* to_string(Rule r);
std::optional<Rule> rule_from_string(std::string_view s);

struct DerivationNode {
  Rule rule = Rule::Root;
  int premise = -1;
  std::optional<fol::Term> term;  // Forall: instance; NotForall: the Skolem term
  fol::Formula formula;
  std::vector<int> children;
  std::optional<std::pair<int, int>> closure;  // leaves: (A, ~A) or (~(t=t), ~(t=t))
};

// Node 0 is the root.
struct Derivation {
  std::vector<DerivationNode> nodes;
};

struct ProofCertificate {
  Formula goal;
  std::vector<Formula> axioms_used;
  Derivation derivation;
};

fol::Formula certificate_root(const std::vector<Formula>& axioms, const Formula& goal);

// Equality schema: symmetry, transitivity and congruence for a function or predicate symbol.
// Reflexivity is the closure rule on ~(t=t).
fol::Formula eq_symmetry();
fol::Formula eq_transitivity();
fol::Formula eq_congruence_function(const std::string& symbol, std::size_t arity);
fol::Formula eq_congruence_predicate(const fol::Predicate& p, std::size_t arity);
bool is_equality_axiom(const fol::Formula& f);

// Pure rule checking; never searches. On failure, *why names the first offending node.
bool check_certificate(const ProofCertificate& cert, std::string* why = nullptr);

std::string certificate_to_json(const ProofCertificate& cert);
// Throws ParseError or Error on malformed input.
ProofCertificate certificate_from_json(std::string_view text);

}  // namespace stratalab
