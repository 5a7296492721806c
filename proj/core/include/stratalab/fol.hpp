#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stratalab/formula.hpp"
#include "stratalab/nat.hpp"

namespace stratalab::fol {

// First-order terms. Var is a variable of the formula (vN), Meta a rigid tableau variable (?N).
// Function symbols: S, +, *, <>, pow2, lim and Skolem symbols skN. Num(n) is S^n(0), and
// S(Num n) is stored as Num(n+1) so ground terms have one representation.
enum class TermKind : std::uint8_t { Var, Meta, Num, App };

class Term {
 public:
  static Term var(std::uint32_t v);
  static Term meta(std::uint32_t m);
  static Term num(const Nat& n);
  static Term app(std::string symbol, std::vector<Term> args);

  TermKind kind() const noexcept;
  std::uint32_t id() const;  // Var, Meta
  const Nat& value() const;  // Num
  const std::string& symbol() const;
  const std::vector<Term>& args() const;

  bool ground() const noexcept;  // no Var, no Meta
  std::string str() const;
  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Predicates: =, in, O, Phi, and one symbol per (operator, code of the normalised body).
struct Predicate {
  enum class Kind : std::uint8_t { Eq, InW, O, Phi, Op } kind = Kind::Eq;
  OperatorId oper;  // Op only
  Nat code;         // Op only
  std::string name() const;  // =, in, O, Phi, @K[i]^{a}#code
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

enum class FormulaKind : std::uint8_t { Atom, Not, Implies, Forall };

class Formula {
 public:
  static Formula atom(Predicate p, std::vector<Term> args);
  static Formula negation(const Formula& f);
  static Formula implies(const Formula& a, const Formula& b);
  static Formula forall(std::uint32_t v, const Formula& body);

  FormulaKind kind() const noexcept;
  const Predicate& pred() const;
  const std::vector<Term>& args() const;
  const Formula& sub(std::size_t i = 0) const;
  std::uint32_t bound() const;

  std::string str() const;
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Replaces free occurrences of variable v. Capture cannot arise for the ground or meta terms the
// prover substitutes; other callers must supply such terms.
Formula instantiate(const Formula& f, std::uint32_t v, const Term& t);
Term map_terms(const Term& t, const std::function<std::optional<Term>(const Term&)>& leaf);
Formula map_terms(const Formula& f, const std::function<std::optional<Term>(const Term&)>& leaf);
Formula map_predicates(const Formula& f, const std::function<Predicate(const Predicate&)>& g);

std::set<std::string> function_symbols(const Formula& f);
void function_symbols(const Term& t, std::set<std::string>& out);
std::set<std::uint32_t> free_vars(const Formula& f);
bool is_sentence(const Formula& f);

Formula parse_formula(std::string_view text);
Term parse_term(std::string_view text);

// Operator subformulas become atoms over the canonical free variables of the body.
Formula reduce(const stratalab::Formula& f);
Term reduce(const stratalab::Term& t);

// Formula-level maps pushed through the reduction: erase and apply_ordmap act on operator atoms
// by rewriting the operator and the code of the body.
Predicate erase(const Predicate& p);
Predicate apply_ordmap(const OrdMap& h, const Predicate& p);

}  // namespace stratalab::fol
