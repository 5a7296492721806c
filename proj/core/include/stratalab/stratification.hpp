#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stratalab/formula.hpp"
#include "stratalab/ordinal.hpp"
#include "stratalab/stream.hpp"

namespace stratalab {

// On(phi).
std::set<Ordinal> superscripts(const Formula& f);
// Superscript-free, i.e. a formula over the plain operators only.
bool is_plain(const Formula& f);

// Single pass over the four scope conditions: superscripts only on index i; every K[i] under
// some K[j], j != i; no superscripted operator under a plain one; nested superscripts strictly
// decrease inward.
bool is_i_stratified(const Formula& f, std::uint64_t i);
// Clause-by-clause recursive definition. Agrees with is_i_stratified; kept as a cross-check.
bool is_i_stratified_recursive(const Formula& f, std::uint64_t i);
bool is_very_i_stratified(const Formula& f, std::uint64_t i);

// Superscripts in dom(h) are mapped, others kept. Plain operators are left untouched together
// with their scope.
Formula apply_ordmap(const OrdMap& h, const Formula& f);
// phi^-: every K[i]^{a} becomes K[i].
Formula erase(const Formula& f);

// An i-stratifier given by an infinite X below e0*w, known through two procedures:
// membership and the least element of X strictly above a bound (nullopt bound: least element).
class Stratifier {
 public:
  using MinAbove = std::function<std::optional<Ordinal>(const std::optional<Ordinal>&)>;
  using Member = std::function<bool(const Ordinal&)>;

  Stratifier(std::uint64_t index, Member member, MinAbove min_above, std::string name);

  // X = {e0*1, e0*2, ...}.
  static Stratifier veristratifier(std::uint64_t index);
  // X = prefix u {a : a > prefix}. With an empty prefix X is everything.
  static Stratifier prefix_then_all(std::uint64_t index, std::set<Ordinal> prefix);

  std::uint64_t index() const noexcept { return index_; }
  const std::string& name() const noexcept { return name_; }
  bool member(const Ordinal& a) const { return member_(a); }
  // Throws PreconditionError when the procedure does not produce a member above the bound.
  Ordinal min_above(const std::optional<Ordinal>& bound) const;

 private:
  std::uint64_t index_;
  Member member_;
  MinAbove min_above_;
  std::string name_;
};

// Requires a plain formula. K[i] gets the least member of X above the superscripts already
// placed in its scope; K[j], j != i, is left alone with its scope.
Formula apply_stratifier(const Stratifier& st, const Formula& plain);
// apply_stratifier with the i-veristratifier.
Formula lift_valid(const Formula& plain, std::uint64_t i);

// The stratifier * given by h[On(theta+)] u {a above it}, so that theta* == h(theta+).
// Throws PreconditionError when On(theta+) is not inside dom(h).
Stratifier compose_stratifier(const OrdMap& h, const Stratifier& st, const Formula& theta);

class StratifierSet {
 public:
  StratifierSet() = default;
  // Throws PreconditionError on a repeated index.
  static StratifierSet make(std::vector<Stratifier> members);

  const std::vector<Stratifier>& members() const noexcept { return members_; }
  std::vector<std::uint64_t> indices() const;  // in member order
  const Stratifier* find(std::uint64_t i) const;
  bool empty() const noexcept { return members_.empty(); }

 private:
  std::vector<Stratifier> members_;
};

using IndexOrder = std::function<bool(std::uint64_t, std::uint64_t)>;  // precedes(a, b): a < b

// i precedes every index of the set; vacuously true for the empty set.
bool is_above(const StratifierSet& set, std::uint64_t i, const IndexOrder& precedes);

// T n alpha: sentences all of whose superscripts are below alpha.
bool within_cut(const Formula& f, const Ordinal& alpha);
AxiomStream theory_cut(AxiomStream theory, const Ordinal& alpha);

// Maps the sorted superscripts a1 < ... < an to e0*1, ..., e0*n. Requires i-stratified input.
Formula canonical_veristratified(const Formula& f, std::uint64_t i);

}  // namespace stratalab
