#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "stratalab/computability.hpp"
#include "stratalab/formula.hpp"
#include "stratalab/ordinal.hpp"
#include "stratalab/stream.hpp"

namespace stratalab {

// True and False are sound for the intended structure; Unknown means the budget ran out or an
// unbounded quantifier could not be settled.
enum class IntendedVerdict { True, False, Unknown };
const char* to_string(IntendedVerdict v);

// The intended structure as far as it can be computed. Missing pieces answer Unknown.
struct IntendedStructure {
  const Registry* registry = nullptr;                                       // W and Phi atoms
  std::function<AxiomStream(std::uint64_t)> theory;                         // K[i]: T_i
  std::function<AxiomStream(const Ordinal&, std::uint64_t)> strat_theory;   // K[i]^{a}: U_i n a
  std::function<IntendedVerdict(const Term&)> o_atom;                        // O(t), t closed
};

struct ModelCheckBudget {
  std::size_t entail = 4096;
  std::uint64_t fuel = 8000;
  std::size_t sample = 6;           // instances tried for an unbounded quantifier
  std::uint64_t bounded_limit = 4096;  // largest guard evaluated exhaustively
};

// Recursive three-valued evaluation over N. forall x ((exists z. x+S(z) = t) -> psi) with t
// free of x and z is evaluated exhaustively; other quantifiers are sampled and can only come out
// False (some instance False) or Unknown.
IntendedVerdict model_check(const IntendedStructure& m, const Formula& f, const Assignment& s,
                            const ModelCheckBudget& budget = {});

// Value of a term under s; nullopt for unassigned variables or values too large to build.
std::optional<Nat> evaluate_term(const Term& t, const Assignment& s);

// Argument tuple for k free variables: nothing (k = 0), x1 (k = 1), <x1,x2,0> (k = 2),
// <x1,x2,x3> (k = 3), <x1,x2,tuple(x3..xk)> beyond.
Term tuple_term(const std::vector<Term>& xs);
std::optional<std::vector<Nat>> untuple(std::size_t k, const Nat& code);

// Arithmetic rendering of a plain formula: K[i]psi with free x1 < ... < xk becomes
// <code(psi'), i, tuple(x1..xk)> in W[e_i], psi' being psi with its free variables renamed to
// v0..v(k-1). Throws PreconditionError for superscripted input or a missing index.
Formula fu_translate(const Formula& f, const std::map<std::uint64_t, Index>& theory_code_map);

}  // namespace stratalab
