#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include <json.hpp>

#include "stratalab/entailment.hpp"
#include "stratalab/errors.hpp"
#include "stratalab/model_check.hpp"
#include "stratalab/theory.hpp"
#include "schema_stream.hpp"

namespace stratalab {

using detail::counter_stream;
using json = nlohmann::json;

// ---------------------------------------------------------------- configuration

namespace {

bool has_index(const std::vector<std::uint64_t>& xs, std::uint64_t i) {
  return std::binary_search(xs.begin(), xs.end(), i);
}

Recognition combine(Recognition a, Recognition b) {
  if (a == Recognition::Yes || b == Recognition::Yes) return Recognition::Yes;
  if (a == Recognition::Unknown || b == Recognition::Unknown) return Recognition::Unknown;
  return Recognition::No;
}

using SpecPtr = std::shared_ptr<const FamilySpec>;

BlockContext make_context(const SpecPtr& cfg, std::uint64_t owner);

// T^0_i: the configured blocks of i alone. Closure-of reaches into these.
AxiomStream base_blocks(const SpecPtr& cfg, std::uint64_t i, const std::string& prefix) {
  std::vector<AxiomStream> sources;
  auto it = cfg->blocks.find(i);
  if (it == cfg->blocks.end()) return AxiomStream();
  auto ctx = make_context(cfg, i);
  for (const auto& b : it->second)
    sources.push_back(block_instances(b, ctx).map([prefix](const Axiom& a) {
      return Axiom{a.sentence, prefix + a.provenance};
    }));
  return dedupe(interleave(std::move(sources)));
}

Recognition base_member(const SpecPtr& cfg, std::uint64_t i, const Formula& sentence) {
  auto it = cfg->blocks.find(i);
  if (it == cfg->blocks.end()) return Recognition::No;
  auto ctx = make_context(cfg, i);
  Recognition r = Recognition::No;
  for (const auto& b : it->second) {
    r = combine(r, is_block_instance(sentence, b, ctx));
    if (r == Recognition::Yes) break;
  }
  return r;
}

BlockContext make_context(const SpecPtr& cfg, std::uint64_t owner) {
  (void)owner;
  BlockContext ctx;
  ctx.indices = cfg->indices;
  ctx.prove_budget = cfg->budgets.prove;
  ctx.ordinal_supply = cfg->budgets.ordinal_supply;
  ctx.o_vocabulary = cfg->o_vocabulary;
  ctx.o_limit = cfg->budgets.o_limit;
  ctx.order = &cfg->order;
  ctx.closure_source = [cfg](std::uint64_t j) { return base_blocks(cfg, j, ""); };
  ctx.closure_member = [cfg](std::uint64_t j, const Formula& f) { return base_member(cfg, j, f); };
  return ctx;
}

}  // namespace

void FamilySpec::validate() const {
  if (indices.empty()) throw PreconditionError("family has no indices");
  if (!std::is_sorted(indices.begin(), indices.end()) ||
      std::adjacent_find(indices.begin(), indices.end()) != indices.end())
    throw PreconditionError("indices must be sorted and distinct");
  if (order.is_explicit())
    for (auto k : order.mentioned())
      if (!has_index(indices, k)) throw PreconditionError("order mentions index " + std::to_string(k) + " outside the family");

  std::map<std::uint64_t, std::set<std::uint64_t>> closure_edges;
  for (const auto& [owner, list] : blocks) {
    if (!has_index(indices, owner)) throw PreconditionError("blocks for unknown index " + std::to_string(owner));
    for (const auto& b : list) {
      const std::string name = b.str();
      if (b.owner != owner) throw PreconditionError(name + " listed under index " + std::to_string(owner));
      if (!has_index(indices, b.subject)) throw PreconditionError(name + " speaks about an unknown index");
      if (is_stratified_kind(b.kind))
        throw PreconditionError(name + " belongs to the stratified companion and is derived, not configured");
      if (b.kind == BlockKind::ModifiedJDeduction) {
        if (mode != FamilyMode::SelfTruth) throw PreconditionError(name + " is admitted in self-truth mode only");
        if (!order.precedes(b.owner, b.subject)) throw PreconditionError(name + " requires owner < subject");
      }
      if (mode == FamilyMode::SelfTruth &&
          (b.kind == BlockKind::JDeduction || b.kind == BlockKind::ClosureOf) &&
          !order.precedes_or_equal(b.subject, b.owner))
        throw PreconditionError(name + " requires subject <= owner in self-truth mode");
      if (b.kind == BlockKind::BasicOAxioms && !o_vocabulary)
        throw PreconditionError(name + " needs the O vocabulary");
      if (b.kind == BlockKind::ClosureOf) closure_edges[b.owner].insert(b.subject);
    }
  }

  // Closure-of reads the configured blocks of its subject, so the reference graph must be acyclic.
  std::map<std::uint64_t, int> state;  // 1 on stack, 2 done
  std::function<void(std::uint64_t)> visit = [&](std::uint64_t v) {
    state[v] = 1;
    for (auto w : closure_edges[v]) {
      if (state[w] == 1) throw PreconditionError("Closure-of blocks form a cycle through " + std::to_string(w));
      if (state[w] == 0) visit(w);
    }
    state[v] = 2;
  };
  for (auto v : indices)
    if (state[v] == 0) visit(v);
}

BlockContext FamilySpec::block_context(std::uint64_t owner) const {
  return make_context(std::make_shared<const FamilySpec>(*this), owner);
}

namespace {

std::uint64_t get_u64(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw ParseError(0, std::string(what) + " must be a natural number");
  return j.get<std::uint64_t>();
}

Nat get_nat(const json& j, const char* what) {
  if (j.is_string()) {
    auto v = parse_decimal(j.get<std::string>());
    if (!v) throw ParseError(0, std::string(what) + " is not a decimal natural");
    return *v;
  }
  return Nat(get_u64(j, what));
}

}  // namespace

FamilySpec parse_family_spec(std::string_view json_text, const Registry* registry) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, "malformed family configuration");
  }
  if (!doc.is_object()) throw ParseError(0, "family configuration must be an object");

  FamilySpec cfg;
  std::set<std::uint64_t> idx;
  try {
    if (doc.contains("mode")) {
      auto m = doc["mode"].get<std::string>();
      if (m == "plain") cfg.mode = FamilyMode::Plain;
      else if (m == "self-truth") cfg.mode = FamilyMode::SelfTruth;
      else throw ParseError(0, "unknown mode " + m);
    }
    cfg.o_vocabulary = doc.value("o_vocabulary", false);
    if (doc.contains("order")) {
      const auto& o = doc["order"];
      if (o.contains("decider")) {
        if (registry == nullptr) throw ParseError(0, "a programmatic order needs a registry");
        cfg.order = OrderSpec::programmatic(get_nat(o["decider"], "decider"), *registry, get_u64(o.value("fuel", json(1000)), "fuel"));
      } else {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
        for (const auto& e : o.value("edges", json::array())) {
          if (!e.is_array() || e.size() != 2) throw ParseError(0, "order edges are [j, i] pairs");
          edges.emplace_back(get_u64(e[0], "edge"), get_u64(e[1], "edge"));
        }
        try {
          cfg.order = OrderSpec::explicit_edges(std::move(edges));
        } catch (const PreconditionError& err) {
          throw ParseError(0, err.what());
        }
        for (auto k : cfg.order.mentioned()) idx.insert(k);
      }
    }
    if (doc.contains("blocks")) {
      for (const auto& [key, list] : doc["blocks"].items()) {
        auto owner = parse_decimal(key);
        if (!owner || !to_u64(*owner)) throw ParseError(0, "block owner " + key + " is not an index");
        std::uint64_t i = *to_u64(*owner);
        idx.insert(i);
        auto& out = cfg.blocks[i];
        for (const auto& item : list) {
          auto name = item.at("kind").get<std::string>();
          auto kind = block_kind_from_string(name);
          if (!kind) throw ParseError(0, "unknown block kind " + name);
          std::uint64_t subject = item.contains("subject") ? get_u64(item["subject"], "subject") : i;
          idx.insert(subject);
          out.push_back(BlockSpec{*kind, i, subject});
        }
      }
    }
    if (doc.contains("budgets")) {
      const auto& b = doc["budgets"];
      auto& d = cfg.budgets;
      d.prove = b.value("prove", d.prove);
      d.entail = b.value("entail", d.entail);
      d.fuel = b.value("fuel", d.fuel);
      d.ordinal_supply = b.value("ordinal_supply", d.ordinal_supply);
      d.sample = b.value("sample", d.sample);
      d.o_limit = b.value("o_limit", d.o_limit);
    }
    if (doc.contains("indices")) {
      idx.clear();
      for (const auto& v : doc["indices"]) idx.insert(get_u64(v, "index"));
    }
  } catch (const json::exception& e) {
    throw ParseError(0, e.what());
  }
  if (idx.empty()) idx.insert(0);
  cfg.indices.assign(idx.begin(), idx.end());
  return cfg;
}

std::string family_spec_to_json(const FamilySpec& cfg) {
  json doc;
  doc["mode"] = cfg.mode == FamilyMode::Plain ? "plain" : "self-truth";
  doc["indices"] = cfg.indices;
  doc["o_vocabulary"] = cfg.o_vocabulary;
  if (cfg.order.is_explicit()) {
    json edges = json::array();
    for (const auto& [j, i] : cfg.order.edges()) edges.push_back({j, i});
    doc["order"] = {{"edges", edges}};
  } else {
    doc["order"] = {{"decider", to_decimal(cfg.order.decider())}, {"fuel", cfg.order.fuel()}};
  }
  json blocks = json::object();
  for (const auto& [owner, list] : cfg.blocks) {
    json arr = json::array();
    for (const auto& b : list) arr.push_back({{"kind", to_string(b.kind)}, {"subject", b.subject}});
    blocks[std::to_string(owner)] = arr;
  }
  doc["blocks"] = blocks;
  const auto& b = cfg.budgets;
  doc["budgets"] = {{"prove", b.prove},   {"entail", b.entail}, {"fuel", b.fuel},
                    {"ordinal_supply", b.ordinal_supply}, {"sample", b.sample}, {"o_limit", b.o_limit}};
  return doc.dump();
}

// ---------------------------------------------------------------- families

bool Family::contains(std::uint64_t i) const { return std::find(indices.begin(), indices.end(), i) != indices.end(); }

namespace {

// Memoized prefix of one stream; every reader sees the same sequence.
class SharedPrefix {
 public:
  explicit SharedPrefix(std::function<AxiomStream()> make) : make_(std::move(make)) {}

  std::optional<Axiom> at(std::size_t k) {
    std::lock_guard lock(mutex_);
    if (!source_) source_ = make_();
    while (items_.size() <= k && !done_) {
      auto a = source_->next();
      if (!a) done_ = true;
      else items_.push_back(std::move(*a));
    }
    if (k < items_.size()) return items_[k];
    return std::nullopt;
  }

 private:
  std::mutex mutex_;
  std::function<AxiomStream()> make_;
  std::optional<AxiomStream> source_;
  std::vector<Axiom> items_;
  bool done_ = false;
};

Family shared_family(std::vector<std::uint64_t> indices, const std::function<AxiomStream(std::uint64_t)>& make) {
  auto prefixes = std::make_shared<std::map<std::uint64_t, std::shared_ptr<SharedPrefix>>>();
  for (auto i : indices) prefixes->emplace(i, std::make_shared<SharedPrefix>([make, i] { return make(i); }));
  Family f;
  f.indices = std::move(indices);
  f.open = [prefixes](std::uint64_t i) {
    auto it = prefixes->find(i);
    if (it == prefixes->end()) throw PreconditionError("no theory with index " + std::to_string(i));
    auto prefix = it->second;
    auto pos = std::make_shared<std::size_t>(0);
    return AxiomStream([prefix, pos]() { return prefix->at((*pos)++); });
  };
  return f;
}

std::vector<std::uint64_t> below(const FamilySpec& cfg, std::uint64_t i, bool or_equal) {
  std::vector<std::uint64_t> out;
  for (auto j : cfg.indices)
    if (or_equal ? cfg.order.precedes_or_equal(j, i) : cfg.order.precedes(j, i)) out.push_back(j);
  return out;
}

Vocabulary family_vocab(const FamilySpec& cfg) {
  Vocabulary v;
  v.plain_ops = cfg.indices;
  v.o_vocabulary = cfg.o_vocabulary;
  return v;
}

std::size_t as_size(const Nat& n) {
  auto v = to_u64(n);
  return v && *v < (std::uint64_t(1) << 40) ? static_cast<std::size_t>(*v) : std::size_t(-1);
}

AxiomStream biconditionals(const FamilySpec& cfg, std::vector<std::uint64_t> js, const Nat& n, std::string tag) {
  if (js.empty()) return AxiomStream();
  auto phis = std::make_shared<FormulaEnumeration>(family_vocab(cfg));
  return counter_stream(
      [phis, js, n](std::uint64_t k) -> std::optional<Formula> {
        std::uint64_t j = js[k % js.size()];
        const Formula& phi = phis->at(k / js.size());
        auto fv = free_vars(phi);
        if (!fv.empty() && !(fv.size() == 1 && fv.count(Var{0}))) return std::nullopt;
        return biconditional_instance(j, phi, n);
      },
      std::move(tag));
}

AxiomStream truths(const FamilySpec& cfg, std::vector<std::uint64_t> js, std::string tag) {
  if (js.empty()) return AxiomStream();
  auto phis = std::make_shared<FormulaEnumeration>(family_vocab(cfg));
  return counter_stream(
      [phis, js](std::uint64_t k) -> std::optional<Formula> {
        return truth_instance(OperatorId::plain(js[k % js.size()]), phis->at(k / js.size()));
      },
      std::move(tag));
}

AxiomStream tagged(AxiomStream s, const std::string& prefix) {
  return std::move(s).map([prefix](const Axiom& a) { return Axiom{a.sentence, prefix + a.provenance}; });
}

std::vector<BlockSpec> self_truth_item2(std::uint64_t i) {
  return {BlockSpec{BlockKind::AssignedValidity, i, i}, BlockSpec{BlockKind::IValidity, i, i},
          BlockSpec{BlockKind::JDeduction, i, i}};
}

AxiomStream t_of_n_stream(const SpecPtr& cfg, const Nat& n, std::uint64_t i) {
  std::vector<AxiomStream> sources;
  sources.push_back(base_blocks(cfg, i, "item1:"));
  if (cfg->mode == FamilyMode::Plain) {
    sources.push_back(biconditionals(*cfg, cfg->indices, n, "item2:biconditional"));
    sources.push_back(truths(*cfg, below(*cfg, i, false), "item3:truth"));
  } else {
    auto ctx = make_context(cfg, i);
    for (const auto& b : self_truth_item2(i)) sources.push_back(tagged(block_instances(b, ctx), "item2:"));
    sources.push_back(truths(*cfg, below(*cfg, i, true), "item3:truth"));
    sources.push_back(biconditionals(*cfg, below(*cfg, i, false), n, "item4:biconditional"));
  }
  return dedupe(pr_close(dedupe(interleave(std::move(sources))), i));
}

// The matrix of a biconditional instance for some admissible j, rebuilt and compared.
bool is_biconditional(const FamilySpec& cfg, const std::vector<std::uint64_t>& js, const Formula& s, const Nat& n) {
  if (s.kind() != FormulaKind::Forall) return false;
  auto sides = split_iff(s.sub(0));
  if (!sides || sides->first.kind() != FormulaKind::Op) return false;
  const auto& k = sides->first.oper();
  if (k.is_strat() || std::find(js.begin(), js.end(), k.index) == js.end()) return false;
  const Formula& phi = sides->first.sub(0);
  if (!is_plain(phi) || (!cfg.o_vocabulary && uses_o_vocabulary(phi))) return false;
  auto fv = free_vars(phi);
  if (!fv.empty() && !(fv.size() == 1 && fv.count(Var{0}))) return false;
  return s == biconditional_instance(k.index, phi, n);
}

bool is_truth(const std::vector<std::uint64_t>& js, const Formula& s) {
  auto [vars, m] = strip_closure(s);
  if (m.kind() != FormulaKind::Implies || m.sub(0).kind() != FormulaKind::Op) return false;
  const auto& k = m.sub(0).oper();
  if (k.is_strat() || std::find(js.begin(), js.end(), k.index) == js.end()) return false;
  return m.sub(0).sub(0) == m.sub(1) && is_plain(s);
}

}  // namespace

Family build_T_of_n(const FamilySpec& cfg, const Nat& n) {
  cfg.validate();
  auto spec = std::make_shared<const FamilySpec>(cfg);
  return shared_family(cfg.indices, [spec, n](std::uint64_t i) { return t_of_n_stream(spec, n, i); });
}

Recognition theory_member(const FamilySpec& cfg, const Nat& n, std::uint64_t i, const Formula& sentence) {
  if (!free_vars(sentence).empty() || !has_index(cfg.indices, i)) return Recognition::No;
  auto spec = std::make_shared<const FamilySpec>(cfg);
  Recognition r = Recognition::No;
  // closure: K[i]s is a member whenever s is
  if (sentence.kind() == FormulaKind::Op && sentence.oper() == OperatorId::plain(i)) {
    r = theory_member(cfg, n, i, sentence.sub(0));
    if (r == Recognition::Yes) return r;
  }
  r = combine(r, base_member(spec, i, sentence));
  if (cfg.mode == FamilyMode::Plain) {
    if (is_biconditional(cfg, cfg.indices, sentence, n) || is_truth(below(cfg, i, false), sentence))
      return Recognition::Yes;
  } else {
    auto ctx = make_context(spec, i);
    for (const auto& b : self_truth_item2(i)) {
      r = combine(r, is_block_instance(sentence, b, ctx));
      if (r == Recognition::Yes) return r;
    }
    if (is_truth(below(cfg, i, true), sentence) || is_biconditional(cfg, below(cfg, i, false), sentence, n))
      return Recognition::Yes;
  }
  return r;
}

// ---------------------------------------------------------------- the theory enumerator

std::size_t theory_enum_budget(std::size_t round) { return std::size_t(256) << std::min<std::size_t>(round, 40); }

std::uint64_t theory_enum_fuel(std::size_t max_budget) {
  std::uint64_t total = 64;
  for (std::size_t r = 0; theory_enum_budget(r) <= max_budget; ++r) total += theory_enum_budget(r);
  return total;
}

namespace {

Nat cfg_code(const FamilySpec& cfg) {
  std::string text = family_spec_to_json(cfg);
  std::vector<std::uint8_t> bytes{0x01};
  bytes.insert(bytes.end(), text.begin(), text.end());
  return from_bytes_be(bytes);
}

std::optional<std::string> cfg_text(const Nat& code) {
  auto bytes = to_bytes_be(code);
  if (bytes.empty() || bytes[0] != 0x01) return std::nullopt;
  return std::string(bytes.begin() + 1, bytes.end());
}

struct CachedFamily {
  FamilySpec cfg;
  Family family;
};

// One family per (registry, configuration, n); W-membership queries reuse its stream prefixes.
std::shared_ptr<CachedFamily> cached_family(const Registry& reg, const Nat& code, const Nat& n) {
  static std::mutex mutex;
  static std::map<std::tuple<const Registry*, Nat, Nat>, std::shared_ptr<CachedFamily>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(&reg, code, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<CachedFamily> made;
  if (auto text = cfg_text(code)) {
    try {
      auto cfg = parse_family_spec(*text, &reg);
      made = std::make_shared<CachedFamily>(CachedFamily{cfg, build_T_of_n(cfg, n)});
    } catch (const Error&) {
      made = nullptr;
    }
  }
  cache.emplace(key, made);
  return made;
}

}  // namespace

std::optional<std::pair<std::uint64_t, Formula>> theory_enum_goal(const Nat& triple_code) {
  Triple t = untriple(triple_code);
  auto j = to_u64(t.b);
  if (!j) return std::nullopt;
  auto phi = ungodel(t.a);
  if (!phi || !is_plain(*phi)) return std::nullopt;
  auto fv = free_vars(*phi);
  if (fv.empty()) return std::make_pair(*j, *phi);
  if (fv.size() == 1 && fv.count(Var{0})) return std::make_pair(*j, substitute(*phi, Var{0}, numeral(t.c), true));
  std::size_t k = fv.size();
  if (fv.rbegin()->index + 1 != k) return std::nullopt;  // not v0..v(k-1)
  auto values = untuple(k, t.c);
  if (!values) return std::nullopt;
  Assignment s;
  for (std::uint32_t v = 0; v < k; ++v) s[Var{v}] = (*values)[v];
  return std::make_pair(*j, assign_substitute(*phi, s));
}

void register_theory_natives(Registry& reg) {
  reg.ensure_native("theory-enum", 2, 0, [](const NativeCall& c) -> NativeResult {
    auto n = c.param(0);
    auto code = c.param(1);
    if (!n || !code) return std::monostate{};
    auto goal = theory_enum_goal(c.input);
    if (!goal) return std::monostate{};
    auto fam = cached_family(c.registry, *code, *n);
    if (!fam || !fam->family.contains(goal->first)) return std::monostate{};
    // rounds of doubling budget, each paid for before it runs
    for (std::size_t r = 0;; ++r) {
      std::size_t b = theory_enum_budget(r);
      if (!c.fuel.spend(b)) return std::monostate{};
      if (entails(fam->family.open(goal->first), goal->second, b).proved()) return Nat(0);
    }
  });
  reg.ensure_native("theory-enum-builder", 1, 0, [](const NativeCall& c) -> NativeResult {
    auto code = c.param(0);
    if (!code) return std::monostate{};
    return encode(Descriptor::native("theory-enum", {Descriptor::lit(c.input), Descriptor::lit(*code)}));
  });
}

Index theory_enumerator(const FamilySpec& cfg, const Nat& n) {
  return encode(Descriptor::native("theory-enum", {Descriptor::lit(n), Descriptor::lit(cfg_code(cfg))}));
}

Index theory_transformer(const FamilySpec& cfg) {
  return encode(Descriptor::native("theory-enum-builder", {Descriptor::lit(cfg_code(cfg))}));
}

FixedPointTheory fixed_point_theory(const FamilySpec& cfg, Registry& reg) {
  cfg.validate();
  register_theory_natives(reg);
  Index f = theory_transformer(cfg);
  Index n = fixpoint(f);
  return FixedPointTheory{n, f, build_T_of_n(cfg, n)};
}

// ---------------------------------------------------------------- the stratified companion

std::vector<Stratifier> item4_stratifiers(std::uint64_t i, std::size_t ordinal_supply) {
  std::vector<Stratifier> out{Stratifier::veristratifier(i)};
  std::set<Ordinal> used;
  for (std::size_t size = 2; used.size() < ordinal_supply && size < 12; ++size)
    for (const auto& o : enum_ordinals(size)) {
      if (used.size() >= ordinal_supply) break;
      if (o.is_zero() || o.is_eps_multiple() || !used.insert(o).second) continue;
      out.push_back(Stratifier::prefix_then_all(i, {o}));
    }
  return out;
}

namespace {

std::optional<BlockSpec> stratified_counterpart(const BlockSpec& b, std::uint64_t i) {
  auto same_index = b.subject == i;
  switch (b.kind) {
    case BlockKind::JDeduction:
      return same_index ? BlockSpec{BlockKind::IStratideduction, i, i} : b;
    case BlockKind::AssignedValidity:
      return BlockSpec{BlockKind::IAssignedStrativalidity, i, i};
    case BlockKind::IValidity:
      return same_index ? BlockSpec{BlockKind::IStrativalidity, i, i} : b;
    case BlockKind::IIntrospection:
      return same_index ? BlockSpec{BlockKind::IStratrospection, i, i} : b;
    case BlockKind::JSmt:
      return same_index ? BlockSpec{BlockKind::IStratiSmt, i, i} : b;
    case BlockKind::ModifiedJDeduction:
    case BlockKind::PaAxioms:
    case BlockKind::ClosureOf:
    case BlockKind::BasicOAxioms:
      return b;
    default:
      return std::nullopt;
  }
}

std::vector<Ordinal> eps_supply(std::size_t k) {
  std::vector<Ordinal> out;
  for (std::size_t m = 1; m <= k; ++m) out.push_back(Ordinal::eps(m));
  return out;
}

AxiomStream u_stream(const SpecPtr& cfg, const Nat& n, std::uint64_t i) {
  auto ctx = make_context(cfg, i);
  ctx.stratified = true;
  auto supply = eps_supply(cfg->budgets.ordinal_supply);
  std::vector<AxiomStream> sources;

  auto it = cfg->blocks.find(i);
  if (it != cfg->blocks.end())
    for (const auto& b : it->second)
      if (auto v = stratified_counterpart(b, i)) sources.push_back(tagged(block_instances(*v, ctx), "item1:"));

  for (auto kind : {BlockKind::IAssignedStrativalidity, BlockKind::IStrativalidity, BlockKind::IStratideduction,
                    BlockKind::ICollapse})
    sources.push_back(tagged(block_instances(BlockSpec{kind, i, i}, ctx), "item2:"));

  Vocabulary sv;
  for (auto j : cfg->indices)
    if (j != i) sv.plain_ops.push_back(j);
  sv.strat_index = i;
  sv.superscripts = supply;
  sv.o_vocabulary = cfg->o_vocabulary;
  auto strat_phis = std::make_shared<FormulaEnumeration>(sv);
  sources.push_back(counter_stream(
      [strat_phis, supply, i](std::uint64_t k) -> std::optional<Formula> {
        auto a = supply[k % supply.size()];
        const Formula& phi = strat_phis->at(k / supply.size());
        if (!is_i_stratified(Formula::op(OperatorId::strat(a, i), phi), i)) return std::nullopt;
        return truth_instance(OperatorId::strat(a, i), phi);
      },
      "item3:truth"));

  auto lower = below(*cfg, i, false);
  if (!lower.empty()) {
    auto stratifiers = std::make_shared<std::vector<Stratifier>>(item4_stratifiers(i, cfg->budgets.ordinal_supply));
    auto plain_phis = std::make_shared<FormulaEnumeration>(family_vocab(*cfg));
    sources.push_back(counter_stream(
        [plain_phis, stratifiers, lower](std::uint64_t k) -> std::optional<Formula> {
          Triple t = untriple(k);
          std::size_t ji = as_size(t.a), si = as_size(t.b);
          if (ji >= lower.size() || si >= stratifiers->size()) return std::nullopt;
          return stratified_truth_instance(lower[ji], plain_phis->at(as_size(t.c)), (*stratifiers)[si]);
        },
        "item4:stratified-truth"));
    sources.push_back(biconditionals(*cfg, lower, n, "item5:biconditional"));
  }

  auto merged = dedupe(interleave(std::move(sources)))
                    .filter([i](const Axiom& a) { return is_i_stratified(a.sentence, i); });
  return dedupe(strat_close(std::move(merged), i, supply));
}

}  // namespace

Family build_U(const FamilySpec& cfg, const Nat& n) {
  if (cfg.mode != FamilyMode::SelfTruth) throw PreconditionError("the stratified companion needs a self-truth family");
  cfg.validate();
  auto spec = std::make_shared<const FamilySpec>(cfg);
  return shared_family(cfg.indices, [spec, n](std::uint64_t i) { return u_stream(spec, n, i); });
}

StratifiedFamily stratify_family(const Family& u) {
  StratifiedFamily s;
  s.erased.indices = u.indices;
  auto open = u.open;
  s.erased.open = [open](std::uint64_t i) {
    return open(i).map([](const Axiom& a) { return Axiom{erase(a.sentence), a.provenance}; });
  };
  s.cut = [open](const Ordinal& alpha, std::uint64_t i) { return theory_cut(open(i), alpha); };
  return s;
}

}  // namespace stratalab
