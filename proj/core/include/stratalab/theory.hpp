#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stratalab/computability.hpp"
#include "stratalab/formula.hpp"
#include "stratalab/ordinal.hpp"
#include "stratalab/stratification.hpp"
#include "stratalab/stream.hpp"

namespace stratalab {

enum class Recognition { Yes, No, Unknown };
const char* to_string(Recognition r);

// A strict partial order on indices. precedes(j, i) reads j < i; precedes_or_equal adds j == i.
class OrderSpec {
 public:
  OrderSpec() = default;  // the empty order
  // Each edge (j, i) asserts j < i. Throws PreconditionError on a reflexive edge or a cycle in
  // the transitive closure.
  static OrderSpec explicit_edges(std::vector<std::pair<std::uint64_t, std::uint64_t>> edges);
  // j < i iff the decider halts on pair(j, i) within fuel with a nonzero value. The registry must
  // outlive the order.
  static OrderSpec programmatic(const Index& decider, const Registry& registry, std::uint64_t fuel);

  bool is_explicit() const noexcept { return registry_ == nullptr; }
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges() const noexcept { return edges_; }
  const Index& decider() const noexcept { return decider_; }
  std::uint64_t fuel() const noexcept { return fuel_; }
  const Registry* registry() const noexcept { return registry_; }

  bool precedes(std::uint64_t j, std::uint64_t i) const;
  bool precedes_or_equal(std::uint64_t j, std::uint64_t i) const { return j == i || precedes(j, i); }
  std::set<std::uint64_t> mentioned() const;

 private:
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges_;
  std::set<std::pair<std::uint64_t, std::uint64_t>> closure_;
  Index decider_;
  std::uint64_t fuel_ = 0;
  const Registry* registry_ = nullptr;
};

enum class BlockKind {
  JDeduction,
  ModifiedJDeduction,
  AssignedValidity,
  IValidity,
  IIntrospection,
  PaAxioms,
  JSmt,
  ClosureOf,
  IStratideduction,
  IAssignedStrativalidity,
  IStrativalidity,
  IStratrospection,
  IStratiSmt,
  ICollapse,
  BasicOAxioms,
};
std::string to_string(BlockKind k);
std::optional<BlockKind> block_kind_from_string(std::string_view s);
// Kinds whose instances carry superscripts; they live in i-stratified theories only.
bool is_stratified_kind(BlockKind k);

// A schema placed in the theory of `owner`. `subject` is the operator index the schema speaks
// about: j in j-Deduction, i in i-Validity and so on; the i- kinds of the stratified
// vocabulary use subject == owner.
struct BlockSpec {
  BlockKind kind;
  std::uint64_t owner = 0;
  std::uint64_t subject = 0;
  bool operator==(const BlockSpec&) const = default;
  std::string str() const;
};

// Canonical enumeration of formulas by node count over a finite vocabulary.
struct Vocabulary {
  std::uint32_t variables = 2;             // v0 .. v(variables-1)
  std::vector<std::uint64_t> plain_ops;    // K[j]
  std::uint64_t strat_index = 0;           // index of the superscripted operators, if any
  std::vector<Ordinal> superscripts;       // K[strat_index]^{a}
  bool o_vocabulary = false;               // O(t)
};

class FormulaEnumeration {
 public:
  explicit FormulaEnumeration(Vocabulary v);
  // The k-th formula. Levels are materialized on demand; every formula of size s precedes every
  // formula of size s+1. Returned by value: later calls may grow the backing store.
  Formula at(std::size_t k);

 private:
  const std::vector<Term>& terms_of_size(std::size_t n);
  const std::vector<Formula>& formulas_of_size(std::size_t n);

  Vocabulary vocab_;
  std::vector<std::vector<Term>> terms_;
  std::vector<std::vector<Formula>> formulas_;
  std::vector<Formula> flat_;
  std::size_t next_level_ = 1;
};

// Schema constructors. ucl is the canonical universal closure.
Formula deduction_instance(const OperatorId& k, const Formula& phi, const Formula& psi);
Formula modified_deduction_instance(std::uint64_t j, const Formula& phi, const Formula& psi);
Formula validity_instance(const OperatorId& k, const Formula& phi);
Formula introspection_instance(std::uint64_t i, const Formula& phi);
// ucl(K beta K alpha phi ... ): ucl(K[i]^{a}phi -> K[i]^{b}K[i]^{a}phi)
Formula stratrospection_instance(const Ordinal& a, const Ordinal& b, std::uint64_t i, const Formula& phi);
// ucl(exists e forall v0 (k phi <-> v0 in W[e])) with e the least variable other than v0 not in phi.
Formula smt_instance(const OperatorId& k, const Formula& phi);
Formula collapse_instance(const Ordinal& a, const Ordinal& b, std::uint64_t i, const Formula& phi);
// ucl(k phi -> phi)
Formula truth_instance(const OperatorId& k, const Formula& phi);
// ucl(K[j]phi -> st(phi))
Formula stratified_truth_instance(std::uint64_t j, const Formula& phi, const Stratifier& st);
// forall v0 (K[j]phi <-> <godel(phi), j, v0> in W[n])
Formula biconditional_instance(std::uint64_t j, const Formula& phi, const Nat& n);
// ucl(phi(v0|0) & forall v0 (phi -> phi(v0|S(v0))) -> forall v0 phi)
Formula induction_instance(const Formula& phi);
const std::vector<Formula>& q_axioms();

// Leading universal quantifiers and what they bind.
std::pair<std::vector<Var>, Formula> strip_closure(const Formula& f);

// What block enumeration and recognition need beyond the block itself.
struct BlockContext {
  std::vector<std::uint64_t> indices{0};  // operator indices used in enumerated formulas
  std::size_t prove_budget = 200;         // per candidate, for the validity-conditioned kinds
  std::size_t ordinal_supply = 2;         // superscripts e0*1 .. e0*k
  bool o_vocabulary = false;
  std::size_t o_limit = 16;               // Basic-O-axioms: n up to this bound
  const OrderSpec* order = nullptr;       // checked for Modified-j-Deduction
  bool stratified = false;                // PA-axioms: induction over owner-stratified formulas
  // Closure-of(j): the theory whose members get boxed, and a recognizer for it.
  std::function<AxiomStream(std::uint64_t)> closure_source;
  std::function<Recognition(std::uint64_t, const Formula&)> closure_member;
};

// Deterministic, fair enumeration of the instances of b; duplicate-free modulo alpha_equal.
// Throws PreconditionError for parameter combinations the schema does not admit.
AxiomStream block_instances(const BlockSpec& b, const BlockContext& ctx);
// Syntactic match; validity-conditioned kinds answer Unknown when the prover is inconclusive.
Recognition is_block_instance(const Formula& sentence, const BlockSpec& b, const BlockContext& ctx);

// Least K[i]-closed extension: inputs alternate with boxed copies of everything emitted so far.
AxiomStream pr_close(AxiomStream input, std::uint64_t i);
// The stratified analogue: K[i]^{a} phi for a in the supply, kept when i-stratified.
AxiomStream strat_close(AxiomStream input, std::uint64_t i, std::vector<Ordinal> supply);

// Round robin over the sources; a source that runs dry drops out.
AxiomStream interleave(std::vector<AxiomStream> sources);
// Drops sentences alpha-equal to an earlier one.
AxiomStream dedupe(AxiomStream s);

enum class FamilyMode { Plain, SelfTruth };

struct FamilyBudgets {
  std::size_t prove = 200;        // validity check per candidate
  std::size_t entail = 4096;      // model checking of operator atoms
  std::uint64_t fuel = 8000;      // W membership in model checking
  std::size_t ordinal_supply = 2;
  std::size_t sample = 6;         // instances tried for an unbounded quantifier
  std::size_t o_limit = 16;
  bool operator==(const FamilyBudgets&) const = default;
};

struct FamilySpec {
  OrderSpec order;
  std::vector<std::uint64_t> indices;                    // the index set; sorted, unique
  std::map<std::uint64_t, std::vector<BlockSpec>> blocks;  // item-1 blocks per owner
  FamilyMode mode = FamilyMode::Plain;
  FamilyBudgets budgets;
  bool o_vocabulary = false;

  // Throws PreconditionError when a block is not admitted in this mode.
  void validate() const;
  BlockContext block_context(std::uint64_t owner) const;
};

// JSON form: {"mode", "indices", "order": {"edges": [[j,i],...]} | {"decider", "fuel"},
// "blocks": {"i": [{"kind", "subject"}...]}, "budgets": {...}, "o_vocabulary"}.
// A programmatic order needs the registry. Throws ParseError on malformed input.
FamilySpec parse_family_spec(std::string_view json_text, const Registry* registry = nullptr);
std::string family_spec_to_json(const FamilySpec& cfg);

// A family of theories given by fresh streams per index. Streams share a cached prefix, so
// reopening is cheap.
struct Family {
  std::vector<std::uint64_t> indices;
  std::function<AxiomStream(std::uint64_t)> open;
  bool contains(std::uint64_t i) const;
};

// Provenance tags: "item1:<block>", "item2:...", "item3:truth", "item4:biconditional" and
// "closure:K[i]" (see build_T_of_n).
Family build_T_of_n(const FamilySpec& cfg, const Nat& n);
// Membership in T_i(n) by recognition: closure peeled, then each item tried.
Recognition theory_member(const FamilySpec& cfg, const Nat& n, std::uint64_t i, const Formula& sentence);

// The theory enumerator: phi_{e}(<code, j, m>) halts iff entails(T_j(n), phi(v0|m)) proves at one
// of the budgets theory_enum_budget(0), theory_enum_budget(1), ..., each paid for in fuel first.
// Formulas with free variables outside v0 use the tuple decoding of fu_translate.
void register_theory_natives(Registry& reg);
std::size_t theory_enum_budget(std::size_t round);
// Fuel after which every round with budget <= max_budget has run, plus call overhead.
std::uint64_t theory_enum_fuel(std::size_t max_budget);
Index theory_enumerator(const FamilySpec& cfg, const Nat& n);
// Index f with phi_f(n) = theory_enumerator(cfg, n).
Index theory_transformer(const FamilySpec& cfg);
// The goal the enumerator searches for on <code, j, m>; nullopt for codes it never accepts.
std::optional<std::pair<std::uint64_t, Formula>> theory_enum_goal(const Nat& triple_code);

struct FixedPointTheory {
  Index n;
  Index transformer;
  Family family;
};
FixedPointTheory fixed_point_theory(const FamilySpec& cfg, Registry& reg);

// U_i of the self-truth construction. Throws PreconditionError unless cfg is in self-truth mode.
Family build_U(const FamilySpec& cfg, const Nat& n);
// The stratifiers item 4 ranges over: the veristratifier and prefix_then_all tails.
std::vector<Stratifier> item4_stratifiers(std::uint64_t i, std::size_t ordinal_supply);

struct StratifiedFamily {
  Family erased;                                                       // S_i = U_i^-
  std::function<AxiomStream(const Ordinal&, std::uint64_t)> cut;       // S_(a,i) = U_i n a
};
StratifiedFamily stratify_family(const Family& u);

}  // namespace stratalab
