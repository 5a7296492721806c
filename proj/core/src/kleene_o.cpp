#include "stratalab/kleene_o.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "stratalab/errors.hpp"

namespace stratalab {

// ---------------------------------------------------------------- certificates

struct OCert::Node {
  Kind kind = Kind::Zero;
  std::vector<OCert> inner;  // one element for Succ
  Index e;
  std::vector<std::pair<Nat, OCert>> samples;
  std::uint64_t fuel = 0;
  OVariant variant = OVariant::Standard;
};

OCert OCert::zero() { return OCert(std::make_shared<const Node>()); }

OCert OCert::succ(OCert inner) {
  Node n;
  n.kind = Kind::Succ;
  n.inner.push_back(std::move(inner));
  return OCert(std::make_shared<const Node>(std::move(n)));
}

OCert OCert::lim(Index e, std::vector<std::pair<Nat, OCert>> samples, std::uint64_t fuel, OVariant variant) {
  Node n;
  n.kind = Kind::Lim;
  n.e = std::move(e);
  n.samples = std::move(samples);
  n.fuel = fuel;
  n.variant = variant;
  return OCert(std::make_shared<const Node>(std::move(n)));
}

OCert::Kind OCert::kind() const noexcept { return n_->kind; }

const OCert& OCert::inner() const {
  if (n_->kind != Kind::Succ) throw PreconditionError("inner() of a non-successor certificate");
  return n_->inner.front();
}

const Index& OCert::program() const {
  if (n_->kind != Kind::Lim) throw PreconditionError("program() of a non-limit certificate");
  return n_->e;
}

const std::vector<std::pair<Nat, OCert>>& OCert::samples() const {
  if (n_->kind != Kind::Lim) throw PreconditionError("samples() of a non-limit certificate");
  return n_->samples;
}

std::uint64_t OCert::fuel() const {
  if (n_->kind != Kind::Lim) throw PreconditionError("fuel() of a non-limit certificate");
  return n_->fuel;
}

OVariant OCert::variant() const {
  if (n_->kind != Kind::Lim) throw PreconditionError("variant() of a non-limit certificate");
  return n_->variant;
}

namespace {

// Numerals while the value fits in 64 bits; the same rule renders the axioms, so proofs match.
Term pow2_notation(const Nat& n) {
  if (n < 64) return Term::num(Nat(1) << static_cast<unsigned>(n));
  return Term::pow2(Term::num(n));
}

Term pow2_notation(const Term& inner) {
  if (inner.kind() == TermKind::Num) return pow2_notation(inner.value());
  return Term::pow2(inner);
}

Term lim_notation(const Nat& e) {
  if (e <= 25) return Term::num(3 * boost::multiprecision::pow(Nat(5), static_cast<unsigned>(e)));
  return Term::lim(Term::num(e));
}

// e with 3*5^e == v, when there is one.
std::optional<Nat> lim_exponent(const Term& t) {
  if (t.kind() == TermKind::Lim && t.arg(0).kind() == TermKind::Num) {
    if (t.arg(0).value() <= 25) return std::nullopt;  // would have been a numeral
    return t.arg(0).value();
  }
  if (t.kind() != TermKind::Num) return std::nullopt;
  Nat v = t.value();
  if (v.is_zero() || v % 3 != 0) return std::nullopt;
  v /= 3;
  Nat e = 0;
  while (v > 1) {
    if (v % 5 != 0) return std::nullopt;
    v /= 5;
    ++e;
  }
  return e;
}

std::optional<Nat> pow2_exponent(const Term& t) {
  if (t.kind() == TermKind::Pow2 && t.arg(0).kind() == TermKind::Num) {
    if (t.arg(0).value() < 64) return std::nullopt;
    return t.arg(0).value();
  }
  if (t.kind() != TermKind::Num || t.value().is_zero()) return std::nullopt;
  const Nat& v = t.value();
  std::size_t bits = bit_length(v);
  if (v != (Nat(1) << static_cast<unsigned>(bits - 1))) return std::nullopt;
  return Nat(bits - 1);
}

}  // namespace

Term OCert::notation() const {
  switch (n_->kind) {
    case Kind::Zero: return Term::zero();
    case Kind::Succ: return pow2_notation(inner().notation());
    case Kind::Lim: return lim_notation(n_->e);
  }
  return Term::zero();
}

std::optional<Nat> OCert::notation_value(std::size_t max_bits) const {
  switch (n_->kind) {
    case Kind::Zero:
      return Nat(0);
    case Kind::Succ: {
      auto v = inner().notation_value(max_bits);
      if (!v || *v + 1 > max_bits) return std::nullopt;
      return Nat(1) << static_cast<unsigned>(*v);
    }
    case Kind::Lim: {
      // 3*5^e has at most 2.33e + 2 bits
      if (n_->e * 7 > Nat(max_bits) * 3) return std::nullopt;
      return Nat(3 * boost::multiprecision::pow(Nat(5), static_cast<unsigned>(n_->e)));
    }
  }
  return std::nullopt;
}

std::string OCert::serialize() const {
  switch (n_->kind) {
    case Kind::Zero:
      return "Z";
    case Kind::Succ:
      return "S " + inner().serialize();
    case Kind::Lim: {
      std::string out = std::string("L ") + (n_->variant == OVariant::Standard ? "S " : "W ") + to_decimal(n_->e) +
                        " " + std::to_string(n_->fuel) + " " + std::to_string(n_->samples.size());
      for (const auto& [k, c] : n_->samples) out += " " + to_decimal(k) + " " + c.serialize();
      return out;
    }
  }
  return "Z";
}

namespace {

struct CertReader {
  std::vector<std::string> tokens;
  std::size_t pos = 0;

  const std::string& take() {
    if (pos >= tokens.size()) throw ParseError(pos, "certificate ends early");
    return tokens[pos++];
  }
  Nat nat() {
    auto v = parse_decimal(take());
    if (!v) throw ParseError(pos - 1, "expected a natural");
    return *v;
  }
  OCert cert(int depth) {
    if (depth > 4096) throw ParseError(pos, "certificate nests too deeply");
    const std::string& tag = take();
    if (tag == "Z") return OCert::zero();
    if (tag == "S") return OCert::succ(cert(depth + 1));
    if (tag != "L") throw ParseError(pos - 1, "unknown certificate tag " + tag);
    const std::string& v = take();
    if (v != "S" && v != "W") throw ParseError(pos - 1, "unknown limit variant " + v);
    OVariant variant = v == "S" ? OVariant::Standard : OVariant::WSubset;
    Nat e = nat();
    auto fuel = to_u64(nat());
    if (!fuel) throw ParseError(pos - 1, "fuel out of range");
    auto count = to_u64(nat());
    if (!count || *count > tokens.size()) throw ParseError(pos - 1, "sample count out of range");
    std::vector<std::pair<Nat, OCert>> samples;
    for (std::uint64_t s = 0; s < *count; ++s) {
      Nat k = nat();
      samples.emplace_back(k, cert(depth + 1));
    }
    return OCert::lim(e, std::move(samples), *fuel, variant);
  }
};

}  // namespace

OCert OCert::deserialize(std::string_view text) {
  CertReader r;
  std::istringstream in{std::string(text)};
  for (std::string tok; in >> tok;) r.tokens.push_back(tok);
  OCert c = r.cert(0);
  if (r.pos != r.tokens.size()) throw ParseError(r.pos, "trailing tokens after certificate");
  return c;
}

bool operator==(const OCert& a, const OCert& b) {
  if (a.n_ == b.n_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case OCert::Kind::Zero: return true;
    case OCert::Kind::Succ: return a.inner() == b.inner();
    case OCert::Kind::Lim:
      return a.n_->e == b.n_->e && a.n_->fuel == b.n_->fuel && a.n_->variant == b.n_->variant &&
             a.n_->samples == b.n_->samples;
  }
  return false;
}

Index canonical_o_generator() { return encode(Descriptor::native("succ-tower", {})); }

OCert succ_chain(std::size_t length) {
  OCert c = OCert::zero();
  for (std::size_t k = 0; k < length; ++k) c = OCert::succ(c);
  return c;
}

OValue o_value(const Registry& reg, const OCert& c) {
  switch (c.kind()) {
    case OCert::Kind::Zero:
      return OValue{Ordinal(), true};
    case OCert::Kind::Succ: {
      auto v = o_value(reg, c.inner());
      return OValue{successor(v.value), v.exact};
    }
    case OCert::Kind::Lim:
      break;
  }
  Ordinal sup;
  for (const auto& [k, sub] : c.samples()) {
    auto expected = sub.notation_value();
    if (!expected) throw PreconditionError("limit sample at " + to_decimal(k) + " has an unbuildable notation");
    if (c.variant() == OVariant::Standard) {
      auto out = eval_step(reg, c.program(), k, c.fuel());
      if (!out.is_halted()) throw PreconditionError("limit sample at " + to_decimal(k) + " does not halt within fuel");
      if (out.value() != *expected) throw PreconditionError("limit sample at " + to_decimal(k) + " certifies the wrong output");
    } else {
      if (k != *expected) throw PreconditionError("W-sample " + to_decimal(k) + " certifies a different number");
      if (we_member(reg, c.program(), k, c.fuel()) != Membership::Yes)
        throw PreconditionError("W-sample " + to_decimal(k) + " not confirmed within fuel");
    }
    auto v = o_value(reg, sub).value;
    if (sup < v) sup = v;
  }
  if (c.program() == canonical_o_generator()) return OValue{Ordinal::omega_power(Ordinal::finite(1)), true};
  return OValue{sup, false};
}

// ---------------------------------------------------------------- axioms

Formula o_succ_axiom(const Nat& n) {
  return Formula::implies(Formula::o_atom(Term::num(n)), Formula::o_atom(pow2_notation(n)));
}

Formula o_limit_axiom(const Index& e, OVariant variant) {
  Var x{0}, y{1};
  Formula premise =
      variant == OVariant::Standard
          ? Formula::forall(x, Formula::exists(y, Formula::conj(Formula::phi_atom(Term::num(e), Term::var(x), Term::var(y)),
                                                                Formula::o_atom(Term::var(y)))))
          : Formula::forall(x, Formula::implies(Formula::in_w(Term::var(x), Term::num(e)), Formula::o_atom(Term::var(x))));
  return Formula::implies(premise, Formula::o_atom(lim_notation(e)));
}

AxiomStream basic_o_axioms(std::size_t limit, OVariant variant) {
  auto k = std::make_shared<std::size_t>(0);
  return AxiomStream([k, limit, variant]() -> std::optional<Axiom> {
    std::size_t at = (*k)++;
    if (at == 0) return Axiom{Formula::o_atom(Term::zero()), "basic-o"};
    std::size_t n = (at - 1) / 2;
    if (n > limit) return std::nullopt;
    if ((at - 1) % 2 == 0) return Axiom{o_succ_axiom(n), "basic-o"};
    return Axiom{o_limit_axiom(n, variant), "basic-o"};
  });
}

Recognition is_basic_o_axiom(const Formula& sentence) {
  if (sentence == Formula::o_atom(Term::zero())) return Recognition::Yes;
  if (sentence.kind() != FormulaKind::Implies || sentence.sub(1).kind() != FormulaKind::OAtom) return Recognition::No;
  const Term& t = sentence.sub(1).term(0);
  if (auto n = pow2_exponent(t); n && sentence == o_succ_axiom(*n)) return Recognition::Yes;
  if (auto e = lim_exponent(t)) {
    if (sentence == o_limit_axiom(*e, OVariant::Standard) || sentence == o_limit_axiom(*e, OVariant::WSubset))
      return Recognition::Yes;
  }
  return Recognition::No;
}

// ---------------------------------------------------------------- certified notations

void OTable::insert(const OCert& c) {
  o_value(reg_, c);
  std::lock_guard lock(mutex_);
  entries_.emplace_back(c.notation(), c);
}

IntendedVerdict OTable::lookup(const Term& closed) const {
  auto value = evaluate_term(closed, {});
  std::lock_guard lock(mutex_);
  for (const auto& [t, c] : entries_) {
    if (t == closed) return IntendedVerdict::True;
    if (value && c.notation_value() == value) return IntendedVerdict::True;
  }
  return IntendedVerdict::Unknown;
}

std::size_t OTable::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

NormEstimate theory_norm_lb(const Registry& reg, const std::function<AxiomStream()>& theory, std::size_t budget,
                            std::vector<OCert> candidates) {
  if (candidates.empty())
    for (std::size_t k = 0; k <= 5; ++k) candidates.push_back(succ_chain(k));
  NormEstimate out;
  for (const auto& c : candidates) {
    Term m = c.notation();
    auto verdict = entails(theory(), Formula::o_atom(m), budget);
    if (!verdict.proved()) continue;
    auto value = o_value(reg, c);
    Ordinal above = successor(value.value);
    if (out.lower < above) out.lower = above;
    out.basis.push_back(NormBasisEntry{m, c, value, *verdict.certificate});
  }
  return out;
}

// ---------------------------------------------------------------- descent

namespace {

bool has_block(const FamilySpec& cfg, std::uint64_t i, BlockKind kind) {
  auto it = cfg.blocks.find(i);
  if (it == cfg.blocks.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(), [kind](const BlockSpec& b) { return b.kind == kind; });
}

Formula o_of_v0() { return Formula::o_atom(Term::var(Var{0})); }

Index w_index_for(const Index& n, std::uint64_t j) {
  auto program = decode(n);
  if (!program) throw PreconditionError("fixed point does not decode");
  auto project = Descriptor::native("triple-with", {Descriptor::lit(godel(o_of_v0())), Descriptor::lit(j)});
  return encode(Descriptor::native("compose", {*program, project}));
}

Formula bridge_for(std::uint64_t j, const Index& w) {
  Var x{0};
  return Formula::forall(x, Formula::iff(Formula::op(OperatorId::plain(j), o_of_v0()),
                                         Formula::in_w(Term::var(x), Term::num(w))));
}

std::vector<Formula> aux_for(const DescentFamily& fam, const Index& k) {
  Var x{0}, y{1};
  Term kt = Term::num(k);
  Formula phi = Formula::phi_atom(kt, Term::var(x), Term::var(y));
  return {fam.bridge, Formula::forall(x, Formula::exists(y, phi)),
          Formula::forall(x, Formula::forall(y, Formula::implies(phi, Formula::in_w(Term::var(y), Term::num(fam.w_index)))))};
}

Index range_enum_index(const Index& w, const Nat& witness) {
  return encode(Descriptor::native("range-enum", {Descriptor::lit(w), Descriptor::lit(witness)}));
}

std::uint64_t enumerator_fuel(std::size_t budget) { return theory_enum_fuel(budget) + 64; }

// Least stage whose dovetail fuel covers the enumerator's schedule.
std::uint64_t stage_for(std::uint64_t fuel) {
  std::uint64_t s = 0;
  while (dovetail_fuel(s) < fuel) ++s;
  return s;
}

constexpr std::size_t kNormChains = 5;   // chains 0..4 for the lower theory's norm
constexpr std::size_t kSampleGrowth = 16;  // sampling may raise the enumerator budget this far

// T_i + aux |= O(3*5^k) in the steps of the descent argument, each lemma cut in:
// W inside O, outputs of phi_k inside O, phi_k total into O, then the limit clause.
std::optional<ProofCertificate> staged_limit_proof(const std::vector<Formula>& aux, std::uint64_t j, const Index& k,
                                                   const Index& w, std::size_t budget) {
  Var x{0}, y{1};
  Formula in_o = Formula::o_atom(Term::var(x));
  Formula w_in_o = Formula::forall(x, Formula::implies(Formula::in_w(Term::var(x), Term::num(w)), in_o));
  Formula out_in_o = Formula::forall(
      x, Formula::forall(y, Formula::implies(Formula::phi_atom(Term::num(k), Term::var(x), Term::var(y)),
                                             Formula::o_atom(Term::var(y)))));
  Formula limit_axiom = o_limit_axiom(k);
  Formula total_into_o = limit_axiom.sub(0);

  auto step = [budget](std::vector<Formula> premises, const Formula& lemma) -> std::optional<ProofCertificate> {
    auto v = prove_chain(premises, lemma, budget);
    return v.certificate;
  };
  auto c1 = step({aux[0], truth_instance(OperatorId::plain(j), o_of_v0())}, w_in_o);
  auto c2 = step({aux[2], w_in_o}, out_in_o);
  auto c3 = step({aux[1], out_in_o}, total_into_o);
  auto c4 = step({limit_axiom, total_into_o}, limit_axiom.sub(1));
  if (!c1 || !c2 || !c3 || !c4) return std::nullopt;
  return compose_cut(compose_cut(compose_cut(*c1, *c2), *c3), *c4);
}

bool fail(std::string* why, const std::string& what) {
  if (why) *why = what;
  return false;
}

}  // namespace

FamilySpec toy_descent_spec() {
  FamilySpec cfg;
  cfg.order = OrderSpec::explicit_edges({{1, 0}});
  cfg.indices = {0, 1};
  cfg.o_vocabulary = true;
  for (std::uint64_t i : {0, 1})
    cfg.blocks[i] = {BlockSpec{BlockKind::PaAxioms, i, i}, BlockSpec{BlockKind::BasicOAxioms, i, i}};
  return cfg;
}

DescentFamily make_descent_family(const FamilySpec& cfg, std::uint64_t i, std::uint64_t j, Registry& reg) {
  if (!cfg.order.precedes(j, i)) throw PreconditionError("descent needs " + std::to_string(j) + " < " + std::to_string(i));
  if (!cfg.o_vocabulary) throw PreconditionError("descent needs the O vocabulary");
  for (auto k : {i, j}) {
    if (!has_block(cfg, k, BlockKind::PaAxioms)) throw PreconditionError("theory " + std::to_string(k) + " lacks PA-axioms");
    if (!has_block(cfg, k, BlockKind::BasicOAxioms))
      throw PreconditionError("theory " + std::to_string(k) + " lacks Basic-O-axioms");
  }
  auto fp = fixed_point_theory(cfg, reg);
  DescentFamily fam{cfg, fp.n, i, j, w_index_for(fp.n, j), Formula::o_atom(Term::zero())};
  fam.bridge = bridge_for(j, fam.w_index);
  return fam;
}

DescentResult descent_check(const DescentFamily& fam, Registry& reg, std::size_t budget) {
  if (budget == 0) return {};
  register_theory_natives(reg);
  Family family = build_T_of_n(fam.cfg, fam.n);
  const std::uint64_t j = fam.lower;

  const Nat witness = 0;
  auto wp = entails(family.open(j), Formula::o_atom(Term::num(witness)), budget);
  if (!wp.proved()) return {};

  Index k;
  try {
    k = range_enumerator(reg, fam.w_index, witness, enumerator_fuel(budget));
  } catch (const PreconditionError&) {
    return {};
  }
  auto aux = aux_for(fam, k);

  auto limit_proof = staged_limit_proof(aux, j, k, fam.w_index, budget);
  if (!limit_proof) return {};

  std::vector<OCert> norm_candidates;
  for (std::size_t c = 0; c < kNormChains; ++c) norm_candidates.push_back(succ_chain(c));
  auto lower = theory_norm_lb(reg, [&] { return family.open(j); }, budget, norm_candidates);

  // For every basis notation m, sample the enumerator where it should output 2^m: T_j proves
  // O(2^m) from O(m) and the successor axiom, so 2^m lies in W and bounds |m|+1 from below.
  std::vector<std::pair<Nat, OCert>> samples;
  std::uint64_t fuel = 0;
  for (const auto& entry : lower.basis) {
    OCert target = OCert::succ(entry.cert);
    auto value = target.notation_value();
    if (!value) continue;
    for (std::size_t b = budget; b <= budget * kSampleGrowth; b *= 2) {
      Nat t = pair(*value, stage_for(enumerator_fuel(b)));
      std::uint64_t need = range_enumerator_fuel(t);
      auto out = eval_step(reg, k, t, need);
      if (out.is_halted() && out.value() == *value) {
        samples.emplace_back(t, target);
        fuel = std::max(fuel, need);
        break;
      }
    }
  }
  OCert limit_cert = OCert::lim(k, std::move(samples), fuel);
  OValue limit_value = o_value(reg, limit_cert);
  bool ordered = lower.lower <= limit_value.value;
  if (!ordered) return {};
  return DescentResult{DescentEvidence{fam.w_index, witness, *wp.certificate, k, std::move(aux), *limit_proof,
                                       std::move(lower), limit_value, limit_cert, ordered}};
}

bool check_descent_evidence(const DescentFamily& fam, const Registry& reg, const DescentEvidence& ev, std::string* why) {
  const std::uint64_t i = fam.upper, j = fam.lower;
  if (!(ev.w_index == w_index_for(fam.n, j)) || !(ev.w_index == fam.w_index)) return fail(why, "W index mismatch");
  if (!(fam.bridge == bridge_for(j, fam.w_index))) return fail(why, "bridge sentence mismatch");

  auto members_of = [&](std::uint64_t idx, const ProofCertificate& cert, const std::vector<Formula>& extra) {
    for (const auto& a : cert.axioms_used) {
      if (std::find(extra.begin(), extra.end(), a) != extra.end()) continue;
      if (is_basic_o_axiom(a) == Recognition::Yes) continue;
      if (theory_member(fam.cfg, fam.n, idx, a) != Recognition::Yes) return false;
    }
    return true;
  };

  std::string detail;
  if (!check_certificate(ev.witness_proof, &detail)) return fail(why, "witness proof: " + detail);
  if (!(ev.witness_proof.goal == Formula::o_atom(Term::num(ev.witness))))
    return fail(why, "witness proof has the wrong goal");
  if (!members_of(j, ev.witness_proof, {})) return fail(why, "witness proof uses a non-axiom of the lower theory");

  if (!(ev.k == range_enum_index(ev.w_index, ev.witness))) return fail(why, "k is not the range enumerator of W");
  if (ev.aux_axioms != aux_for(fam, ev.k)) return fail(why, "auxiliary facts mismatch");

  if (!check_certificate(ev.limit_proof, &detail)) return fail(why, "limit proof: " + detail);
  if (!(ev.limit_proof.goal == Formula::o_atom(lim_notation(ev.k)))) return fail(why, "limit proof has the wrong goal");
  if (!members_of(i, ev.limit_proof, ev.aux_axioms)) return fail(why, "limit proof uses a non-axiom of the upper theory");

  Ordinal lower;
  for (const auto& b : ev.lower_norm.basis) {
    if (!check_certificate(b.proof, &detail)) return fail(why, "norm basis proof: " + detail);
    if (!(b.proof.goal == Formula::o_atom(b.notation)) || !(b.cert.notation() == b.notation))
      return fail(why, "norm basis entry does not match its notation");
    if (!members_of(j, b.proof, {})) return fail(why, "norm basis proof uses a non-axiom");
    OValue v;
    try {
      v = o_value(reg, b.cert);
    } catch (const PreconditionError& e) {
      return fail(why, e.what());
    }
    if (!(v.value == b.value.value)) return fail(why, "norm basis value mismatch");
    if (lower < successor(v.value)) lower = successor(v.value);
  }
  if (!(lower == ev.lower_norm.lower)) return fail(why, "norm lower bound mismatch");

  if (!(ev.limit_cert.kind() == OCert::Kind::Lim) || !(ev.limit_cert.program() == ev.k))
    return fail(why, "limit certificate is not about k");
  OValue lv;
  try {
    lv = o_value(reg, ev.limit_cert);
  } catch (const PreconditionError& e) {
    return fail(why, std::string("limit certificate: ") + e.what());
  }
  if (!(lv.value == ev.limit_value.value)) return fail(why, "limit value mismatch");
  if (ev.norm_ordered != (lower <= lv.value)) return fail(why, "norm comparison mismatch");
  return true;
}

std::string descent_evidence_to_json(const DescentEvidence& ev) {
  using json = nlohmann::json;
  json doc;
  doc["w_index"] = to_decimal(ev.w_index);
  doc["witness"] = to_decimal(ev.witness);
  doc["witness_proof"] = json::parse(certificate_to_json(ev.witness_proof));
  doc["k"] = to_decimal(ev.k);
  json aux = json::array();
  for (const auto& a : ev.aux_axioms) aux.push_back({{"sentence", a.str()}, {"provenance", "aux:descriptor"}});
  doc["aux_axioms"] = aux;
  doc["limit_proof"] = json::parse(certificate_to_json(ev.limit_proof));
  json basis = json::array();
  for (const auto& b : ev.lower_norm.basis)
    basis.push_back({{"notation", b.notation.str()},
                     {"cert", b.cert.serialize()},
                     {"value", b.value.value.str()},
                     {"proof", json::parse(certificate_to_json(b.proof))}});
  doc["lower_norm"] = {{"lower", ev.lower_norm.lower.str()}, {"basis", basis}};
  doc["limit_cert"] = ev.limit_cert.serialize();
  doc["limit_value"] = {{"value", ev.limit_value.value.str()}, {"exact", ev.limit_value.exact}};
  doc["norm_ordered"] = ev.norm_ordered;
  return doc.dump(2);
}

// ---------------------------------------------------------------- well-foundedness

WfResult wf_check(const OrderSpec& order, std::size_t depth, std::size_t width) {
  if (depth == 0) return WfResult{std::vector<std::uint64_t>{}};
  // longest[v]: length of the longest descending chain from v, capped at depth
  std::vector<std::size_t> longest(width, 0);
  std::vector<std::size_t> next(width, width);
  std::vector<int> state(width, 0);
  std::function<std::size_t(std::size_t)> visit = [&](std::size_t v) -> std::size_t {
    if (state[v] == 2) return longest[v];
    if (state[v] == 1) return depth;  // a cycle descends forever
    state[v] = 1;
    longest[v] = 1;
    for (std::size_t w = 0; w < width && longest[v] < depth; ++w) {
      if (!order.precedes(w, v)) continue;
      std::size_t len = std::min(depth, 1 + visit(w));
      if (len > longest[v]) {
        longest[v] = len;
        next[v] = w;
      }
    }
    state[v] = 2;
    return longest[v];
  };
  for (std::size_t v = 0; v < width; ++v) {
    if (visit(v) < depth) continue;
    // walk the recorded successors, verifying each step
    std::vector<std::uint64_t> chain{v};
    std::size_t cur = v;
    while (chain.size() < depth && next[cur] < width) {
      std::size_t w = next[cur];
      if (!order.precedes(w, cur)) break;
      chain.push_back(w);
      cur = w;
    }
    if (chain.size() == depth) return WfResult{chain};
  }
  return WfResult{};
}

}  // namespace stratalab
