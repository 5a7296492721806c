#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stratalab/certificate.hpp"
#include "stratalab/fol.hpp"
#include "stratalab/formula.hpp"
#include "stratalab/ordinal.hpp"
#include "stratalab/stream.hpp"

namespace stratalab {

// Proved carries a certificate; Unknown means the budget ran out and claims nothing.
struct ProveVerdict {
  std::optional<ProofCertificate> certificate;
  std::size_t expansions = 0;
  bool proved() const noexcept { return certificate.has_value(); }
};

fol::Formula reduce_to_fol(const Formula& f);

// Validity of ucl(f) in the base logic.
ProveVerdict prove_valid(const Formula& f, std::size_t budget);
// Validity of ucl(a1 -> ... -> an -> goal); the certificate lists exactly the given axioms.
ProveVerdict prove_chain(const std::vector<Formula>& axioms, const Formula& goal, std::size_t budget);

struct EntailOptions {
  std::size_t expansions_per_axiom = 16;
};

// Round r searches with the first r axioms of the stream and a budget of r * expansions_per_axiom;
// once the stream is exhausted the last round gets whatever budget is left. A proof is pruned
// to the axioms its derivation actually uses.
ProveVerdict entails(AxiomStream axioms, const Formula& goal, std::size_t budget, EntailOptions options = {});
ProveVerdict entails(const std::vector<Formula>& axioms, const Formula& goal, std::size_t budget,
                     EntailOptions options = {});

// Certificate maps. Both push the formula-level map through every node; the results are
// re-checkable because reduction commutes with erase and with superscript maps.
ProofCertificate erase_certificate(const ProofCertificate& cert);
ProofCertificate map_certificate(const OrdMap& h, const ProofCertificate& cert);

// Collapses the superscripts at or above e0*n into copies below it, fixing those below.
// nullopt when pattern_collapse cannot certify a copy. Throws PreconditionError when the goal
// itself carries a superscript >= e0*n.
std::optional<ProofCertificate> collapse_certificate(const ProofCertificate& cert, std::uint64_t n, std::uint64_t i,
                                                     const Le1Oracle* oracle = nullptr);

// From c1 : A |= lemma and c2 : B, lemma |= goal (lemma last among c2's axioms) build A, B |= goal
// with one cut on the lemma. All formulas must be sentences.
ProofCertificate compose_cut(const ProofCertificate& c1, const ProofCertificate& c2);

// Source of i-Strativalidity, i-Stratideduction and boxed-axiom instances. nullopt means the
// supply does not provide that instance.
class SchemaSupply {
 public:
  virtual ~SchemaSupply() = default;
  // ucl(K[i]^{a} phi), phi valid
  virtual std::optional<Formula> strativalidity(const Ordinal& a, std::uint64_t i, const Formula& phi) const = 0;
  // ucl(K[i]^{a}(phi -> psi) -> K[i]^{a}phi -> K[i]^{a}psi)
  virtual std::optional<Formula> stratideduction(const Ordinal& a, std::uint64_t i, const Formula& phi,
                                                 const Formula& psi) const = 0;
  // K[i]^{a} sigma for a member sigma of the theory
  virtual std::optional<Formula> boxed(const Ordinal& a, std::uint64_t i, const Formula& sigma) const = 0;
};

// Builds every instance whose result is i-stratified.
class StratifiedSchemaSupply : public SchemaSupply {
 public:
  std::optional<Formula> strativalidity(const Ordinal& a, std::uint64_t i, const Formula& phi) const override;
  std::optional<Formula> stratideduction(const Ordinal& a, std::uint64_t i, const Formula& phi,
                                         const Formula& psi) const override;
  std::optional<Formula> boxed(const Ordinal& a, std::uint64_t i, const Formula& sigma) const override;
};

// cert : T n alpha |= phi  gives  T n beta |= K[i]^{alpha} phi, from one Strativalidity instance
// for the whole chain, one Stratideduction instance and one boxed axiom per premise.
ProofCertificate internalize(const ProofCertificate& cert, const Ordinal& alpha, const Ordinal& beta, std::uint64_t i,
                             const SchemaSupply& supply, std::size_t budget = 20000);

// cert : T |= K[i]^{a}(rho <-> sigma)  gives  T |= K[i]^{a}rho <-> K[i]^{a}sigma.
ProofCertificate box_iff(const ProofCertificate& cert, const Ordinal& alpha, std::uint64_t i,
                         const SchemaSupply& supply, std::size_t budget = 20000);

// rho <-> sigma as built by Formula::iff; nullopt for any other shape.
std::optional<std::pair<Formula, Formula>> split_iff(const Formula& f);

}  // namespace stratalab
