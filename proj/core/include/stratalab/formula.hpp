#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stratalab/errors.hpp"
#include "stratalab/nat.hpp"
#include "stratalab/ordinal.hpp"

namespace stratalab {

// Variables are v0, v1, ...; their canonical order is the order of their indices.
struct Var {
  std::uint32_t index = 0;
  std::string name() const { return "v" + std::to_string(index); }
  friend auto operator<=>(const Var&, const Var&) = default;
};

// Num(n) stands for n applications of S to 0; Succ never wraps a Num.
// Pow2 and Lim are the o-extension's symbols for 2^t and 3*5^t; like the pairing <,,>,
// they are uninterpreted by the logic.
enum class TermKind : std::uint8_t { Num, Succ, Plus, Times, Triple, Var, Pow2, Lim };

class Term {
 public:
  static Term num(const Nat& n);
  static Term zero() { return num(0); }
  static Term succ(const Term& t);
  static Term plus(const Term& a, const Term& b);
  static Term times(const Term& a, const Term& b);
  static Term triple(const Term& a, const Term& b, const Term& c);
  static Term var(Var v);
  static Term pow2(const Term& t);
  static Term lim(const Term& t);

  TermKind kind() const noexcept;
  const Nat& value() const;  // Num only
  Var var() const;           // Var only
  std::size_t arity() const noexcept;
  const Term& arg(std::size_t i) const;

  bool is_closed() const noexcept;
  std::size_t hash() const noexcept;
  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  friend struct TermFactory;
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

Term numeral(const Nat& n);

struct OperatorId {
  std::uint64_t index = 0;
  std::optional<Ordinal> superscript;

  static OperatorId plain(std::uint64_t i) { return {i, std::nullopt}; }
  static OperatorId strat(const Ordinal& a, std::uint64_t i) { return {i, a}; }
  bool is_strat() const noexcept { return superscript.has_value(); }
  std::string str() const;  // K[i] or K[i]^{a}

  friend bool operator==(const OperatorId&, const OperatorId&) = default;
  friend std::strong_ordering operator<=>(const OperatorId& a, const OperatorId& b);
};

enum class FormulaKind : std::uint8_t { Eq, InW, OAtom, PhiAtom, Not, Implies, Forall, Op };

class Formula {
 public:
  static Formula eq(const Term& a, const Term& b);
  static Formula in_w(const Term& x, const Term& e);  // x in W[e]
  static Formula o_atom(const Term& t);
  static Formula phi_atom(const Term& e, const Term& x, const Term& y);  // phi_e(x) = y
  static Formula negation(const Formula& f);
  static Formula implies(const Formula& a, const Formula& b);
  static Formula forall(Var v, const Formula& body);
  static Formula op(const OperatorId& k, const Formula& body);

  // Derived connectives, expanded into the primitives.
  static Formula conj(const Formula& a, const Formula& b);     // ~(a -> ~b)
  static Formula disj(const Formula& a, const Formula& b);     // (~a -> b)
  static Formula iff(const Formula& a, const Formula& b);      // conj(a -> b, b -> a)
  static Formula exists(Var v, const Formula& body);           // ~forall v. ~body
  // a1 -> (a2 -> ... -> goal)
  static Formula chain(const std::vector<Formula>& premises, const Formula& goal);

  FormulaKind kind() const noexcept;
  bool is_atomic() const noexcept;
  const Term& term(std::size_t i) const;  // atoms
  std::size_t term_count() const noexcept;
  const Formula& sub(std::size_t i = 0) const;  // Not, Implies (0,1), Forall, Op
  Var bound() const;                            // Forall
  const OperatorId& oper() const;               // Op

  std::size_t hash() const noexcept;
  std::size_t size() const noexcept;  // node count including terms
  std::string str() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  friend struct FormulaFactory;
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// plain: operators without superscripts, no O vocabulary. strat: superscripts allowed.
// o-ext: everything, including O(t), Phi(e,x,y), pow2 and lim.
enum class Dialect { Plain, Strat, OExt };

// Accepts the canonical grammar plus sugar: &, |, <->, exists, decimal numerals,
// unparenthesised binary connectives (right associative) and the aliases x,y,z,u for v0..v3.
// Throws ParseError with the byte offset.
Formula parse_formula(std::string_view text, Dialect dialect = Dialect::OExt);
Term parse_term(std::string_view text, Dialect dialect = Dialect::OExt);

using Assignment = std::map<Var, Nat>;

class CaptureError : public Error {
 public:
  using Error::Error;
};

std::set<Var> free_vars(const Term& t);
std::set<Var> free_vars(const Formula& f);
// Every variable index occurring free or bound, plus one.
std::uint32_t fresh_index(const Formula& f);

Term substitute(const Term& t, Var x, const Term& replacement);
// Capture-avoiding phi(x|t). Throws CaptureError on capture unless rename_bound is set, in
// which case offending bound variables are renamed to fresh ones.
Formula substitute(const Formula& f, Var x, const Term& t, bool rename_bound = false);
// phi^s: every free variable replaced by the numeral of its value. Throws PreconditionError
// when s misses a free variable.
Formula assign_substitute(const Formula& f, const Assignment& s);

Formula universal_closure(const Formula& f);
bool alpha_equal(const Formula& a, const Formula& b);

// Alphabetic normal form: free variables renamed to v0..v(m-1) in canonical order, bound
// variables numbered from m in binder preorder. Alphabetic variants share a normal form.
struct NormalBody {
  Formula body;
  std::vector<Var> free;  // original free variables in canonical order
};
NormalBody normalize_body(const Formula& f);

// Big-endian base-256 value of 0x01 followed by the canonical print.
Nat godel(const Formula& f);
std::optional<Formula> ungodel(const Nat& n);

bool contains_op(const Formula& f);
bool uses_o_vocabulary(const Formula& f);

}  // namespace stratalab

template <>
struct std::hash<stratalab::Formula> {
  std::size_t operator()(const stratalab::Formula& f) const noexcept { return f.hash(); }
};
template <>
struct std::hash<stratalab::Term> {
  std::size_t operator()(const stratalab::Term& t) const noexcept { return t.hash(); }
};
