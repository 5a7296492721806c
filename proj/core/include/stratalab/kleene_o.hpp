#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stratalab/certificate.hpp"
#include "stratalab/computability.hpp"
#include "stratalab/entailment.hpp"
#include "stratalab/formula.hpp"
#include "stratalab/model_check.hpp"
#include "stratalab/ordinal.hpp"
#include "stratalab/stream.hpp"
#include "stratalab/theory.hpp"

namespace stratalab {

// Which closure clause for limit notations is in force.
//   Standard: phi_e total with range inside O gives 3*5^e.
//   WSubset:  W_e inside O gives 3*5^e (no totality, no arithmetic needed).
enum class OVariant { Standard, WSubset };

// Certificate that a number is an ordinal notation. Zero denotes 0, Succ(c) denotes 2^c and
// Lim(e) denotes 3*5^e. A Lim certificate carries sampled outputs of phi_e (Standard) or sampled
// members of W_e (WSubset) together with certificates for them.
class OCert {
 public:
  enum class Kind { Zero, Succ, Lim };

  static OCert zero();
  static OCert succ(OCert inner);
  static OCert lim(Index e, std::vector<std::pair<Nat, OCert>> samples, std::uint64_t fuel,
                   OVariant variant = OVariant::Standard);

  Kind kind() const noexcept;
  const OCert& inner() const;  // Succ
  const Index& program() const;  // Lim
  const std::vector<std::pair<Nat, OCert>>& samples() const;  // Lim: argument -> certified output
  std::uint64_t fuel() const;  // Lim
  OVariant variant() const;   // Lim

  // The notation as a closed term: numerals while they stay small, pow2(..)/lim(..) otherwise.
  Term notation() const;
  // The notation as a number, when it has fewer than max_bits bits.
  std::optional<Nat> notation_value(std::size_t max_bits = 1 << 16) const;

  // Tagged tree: 'Z' | 'S' inner | 'L' variant e fuel count (k cert)*, naturals as decimal
  // tokens separated by spaces.
  std::string serialize() const;
  static OCert deserialize(std::string_view text);

  friend bool operator==(const OCert& a, const OCert& b);

 private:
  struct Node;
  explicit OCert(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Index of the canonical limit generator: phi(k) = the k-fold Succ notation (0, 1, 2, 4, 16, ...).
// The function is total; evaluation stops at k = 5 because the sixth notation already has 65536
// bits, so larger inputs never halt within any fuel.
Index canonical_o_generator();
OCert succ_chain(std::size_t length);

struct OValue {
  Ordinal value;
  bool exact = true;  // false: a certified lower bound only
};

// Checks every sampled output of a Lim certificate against phi_e at its fuel. Exact on
// Zero/Succ chains; a Lim gives the supremum of its samples as a lower bound, except for the
// canonical generator whose value is w. Throws PreconditionError on a malformed certificate.
OValue o_value(const Registry& reg, const OCert& c);

// O(0); O(n) -> O(2^n) and the limit clause for n <= limit, interleaved.
AxiomStream basic_o_axioms(std::size_t limit, OVariant variant = OVariant::Standard);
// forall x exists y (Phi(e,x,y) & O(y)) -> O(lim(e))  or  forall x (x in W[e] -> O(x)) -> O(lim(e)).
Formula o_limit_axiom(const Index& e, OVariant variant = OVariant::Standard);
Formula o_succ_axiom(const Nat& n);
Recognition is_basic_o_axiom(const Formula& sentence);

// Session store of verified notations. O(t) is True when t is the notation of a stored
// certificate, Unknown otherwise.
class OTable {
 public:
  explicit OTable(const Registry& reg) : reg_(reg) {}
  // Verifies through o_value; throws PreconditionError when verification fails.
  void insert(const OCert& c);
  IntendedVerdict lookup(const Term& closed) const;
  std::size_t size() const;

 private:
  const Registry& reg_;
  mutable std::mutex mutex_;
  std::vector<std::pair<Term, OCert>> entries_;
};

struct NormBasisEntry {
  Term notation;
  OCert cert;
  OValue value;
  ProofCertificate proof;  // T |= O(notation)
};

struct NormEstimate {
  Ordinal lower;  // sup of value+1 over the basis, 0 when empty
  std::vector<NormBasisEntry> basis;
};

// Tries each candidate in order with entails at the given budget; only proved ones enter the
// basis. Default candidates are the Succ chains of length 0..5.
NormEstimate theory_norm_lb(const Registry& reg, const std::function<AxiomStream()>& theory, std::size_t budget,
                            std::vector<OCert> candidates = {});

// A family meeting the hypotheses of the descent argument for j < i: PA, the basic O axioms and
// the fixed-point items of the plain construction, plus two descriptor facts injected with
// provenance "aux:...": the W-index bridge below and the totality/range facts of the range
// enumerator.
struct DescentFamily {
  FamilySpec cfg;
  Index n;                      // fixed point of the plain construction
  std::uint64_t upper = 0;      // i
  std::uint64_t lower = 1;      // j
  Index w_index;                // W = {m : <code(O(v0)), j, m> in W_n}
  Formula bridge;               // forall v0 (K[j]O(v0) <-> v0 in W[w_index])
};
// Throws PreconditionError when the configuration lacks PA or basic O axioms for i and j, or
// j does not precede i.
DescentFamily make_descent_family(const FamilySpec& cfg, std::uint64_t i, std::uint64_t j, Registry& reg);
FamilySpec toy_descent_spec();

struct DescentEvidence {
  Index w_index;
  Nat witness;                          // 0, certified in W via the proof of O(0)
  ProofCertificate witness_proof;       // T_j |= O(0)
  Index k;                              // range enumerator of W
  std::vector<Formula> aux_axioms;      // injected descriptor facts
  ProofCertificate limit_proof;         // T_i + aux |= O(lim(k))
  NormEstimate lower_norm;              // T_j
  OValue limit_value;                   // sampled lower bound for |3*5^k|
  OCert limit_cert;
  bool norm_ordered = false;            // lower_norm.lower < limit_value + 1
};

struct DescentResult {
  std::optional<DescentEvidence> evidence;  // nullopt: Unknown
  bool confirmed() const noexcept { return evidence.has_value(); }
};

DescentResult descent_check(const DescentFamily& fam, Registry& reg, std::size_t budget);
// Re-checks every certificate in the bundle and the side conditions that are decidable.
bool check_descent_evidence(const DescentFamily& fam, const Registry& reg, const DescentEvidence& ev,
                            std::string* why = nullptr);
std::string descent_evidence_to_json(const DescentEvidence& ev);

struct WfResult {
  std::optional<std::vector<std::uint64_t>> chain;  // i0 > i1 > ... verified pairwise
};
// Searches for a descending chain with `depth` elements among indices below width.
WfResult wf_check(const OrderSpec& order, std::size_t depth, std::size_t width);

}  // namespace stratalab
