#include "stratalab/computability.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <set>

#include "stratalab/errors.hpp"

namespace stratalab {

namespace {

enum Tag : std::uint8_t { kNatLit = 1, kNative = 2, kPartial = 3, kDiag = 4 };
constexpr std::size_t kMaxNesting = 256;

void put_len(std::vector<std::uint8_t>& out, std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw Error("descriptor field too long to serialize");
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(n >> shift));
}

void put_nat(std::vector<std::uint8_t>& out, const Nat& n) {
  auto bytes = to_bytes_be(n);
  put_len(out, bytes.size());
  out.insert(out.end(), bytes.begin(), bytes.end());
}

void put(std::vector<std::uint8_t>& out, const Descriptor& d) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Descriptor::NatLit>) {
          out.push_back(kNatLit);
          put_nat(out, n.value);
        } else if constexpr (std::is_same_v<T, Descriptor::Native>) {
          out.push_back(kNative);
          put_len(out, n.name.size());
          out.insert(out.end(), n.name.begin(), n.name.end());
          put_len(out, n.args.size());
          for (const auto& a : n.args) put(out, a);
        } else if constexpr (std::is_same_v<T, Descriptor::Partial>) {
          out.push_back(kPartial);
          put_nat(out, n.program);
          put_nat(out, n.arg);
        } else {
          out.push_back(kDiag);
          put_nat(out, n.program);
        }
      },
      d.node);
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  bool at_end() const { return pos_ == bytes_.size(); }

  std::optional<Descriptor> descriptor(std::size_t depth) {
    if (depth > kMaxNesting || pos_ >= bytes_.size()) return std::nullopt;
    switch (bytes_[pos_++]) {
      case kNatLit: {
        auto v = nat();
        if (!v) return std::nullopt;
        return Descriptor::lit(*v);
      }
      case kNative: {
        auto len = length();
        if (!len || *len > bytes_.size() - pos_) return std::nullopt;
        std::string name(bytes_.begin() + pos_, bytes_.begin() + pos_ + *len);
        pos_ += *len;
        auto count = length();
        if (!count) return std::nullopt;
        std::vector<Descriptor> args;
        for (std::size_t k = 0; k < *count; ++k) {
          auto a = descriptor(depth + 1);
          if (!a) return std::nullopt;
          args.push_back(std::move(*a));
        }
        return Descriptor::native(std::move(name), std::move(args));
      }
      case kPartial: {
        auto e = nat();
        if (!e) return std::nullopt;
        auto a = nat();
        if (!a) return std::nullopt;
        return Descriptor::partial(*e, *a);
      }
      case kDiag: {
        auto e = nat();
        if (!e) return std::nullopt;
        return Descriptor::diag(*e);
      }
      default:
        return std::nullopt;
    }
  }

 private:
  std::optional<std::size_t> length() {
    if (bytes_.size() - pos_ < 4) return std::nullopt;
    std::size_t n = 0;
    for (int k = 0; k < 4; ++k) n = (n << 8) | bytes_[pos_++];
    return n;
  }

  std::optional<Nat> nat() {
    auto len = length();
    if (!len || *len > bytes_.size() - pos_) return std::nullopt;
    // a leading zero byte would give a second spelling of the same value
    if (*len > 0 && bytes_[pos_] == 0) return std::nullopt;
    std::vector<std::uint8_t> digits(bytes_.begin() + pos_, bytes_.begin() + pos_ + *len);
    pos_ += *len;
    return from_bytes_be(digits);
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

NativeResult halt(Nat v) { return NativeResult(std::in_place_type<Nat>, std::move(v)); }
const NativeResult kDiverge{};

}  // namespace

std::vector<std::uint8_t> serialize(const Descriptor& d) {
  std::vector<std::uint8_t> out;
  put(out, d);
  return out;
}

std::optional<Descriptor> deserialize(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  auto d = r.descriptor(0);
  if (!d || !r.at_end()) return std::nullopt;
  return d;
}

Index encode(const Descriptor& d) { return from_bytes_be(serialize(d)); }

std::optional<Descriptor> decode(const Index& e) {
  if (e.is_zero()) return std::nullopt;
  return deserialize(to_bytes_be(e));
}

std::optional<Nat> NativeCall::param(std::size_t k) const {
  if (k >= args.size()) return std::nullopt;
  if (const auto* lit = std::get_if<Descriptor::NatLit>(&args[k].node)) return lit->value;
  return std::nullopt;
}

StepOutcome NativeCall::run_arg(std::size_t k, const Nat& x) const {
  if (k >= args.size()) return StepOutcome::out_of_fuel();
  return registry.eval(args[k], x, fuel);
}

StepOutcome NativeCall::run(const Index& e, const Nat& x) const { return registry.eval(e, x, fuel); }

std::uint64_t dovetail_fuel(std::uint64_t stage) {
  std::uint64_t s = std::min<std::uint64_t>(stage, 1u << 20);
  return 16 * (s + 1) * (s + 1);
}

std::uint64_t range_enumerator_fuel(const Nat& t) {
  auto [x, s] = unpair(t);
  auto stage = to_u64(s).value_or(std::numeric_limits<std::uint64_t>::max());
  // one step for the descriptor, one for the call, then the inner run
  return 2 + dovetail_fuel(stage);
}

Registry::Registry() {
  auto unary = [this](const std::string& name, std::function<Nat(const Nat&)> f) {
    register_native(name, 0, 0, [f](const NativeCall& c) { return halt(f(c.input)); });
  };
  unary("id", [](const Nat& x) { return x; });
  unary("zero", [](const Nat&) { return Nat(0); });
  unary("succ", [](const Nat& x) { return Nat(x + 1); });
  unary("add", [](const Nat& x) {
    auto [a, b] = unpair(x);
    return Nat(a + b);
  });
  unary("proj1", [](const Nat& x) { return unpair(x).first; });
  unary("proj2", [](const Nat& x) { return unpair(x).second; });

  // order decider for i+1 < i: 1 on pair(j, i) when j = i+1
  unary("is-successor", [](const Nat& x) {
    auto [j, i] = unpair(x);
    return Nat(j == i + 1 ? 1 : 0);
  });
  register_native("triple-with", 2, 0, [](const NativeCall& c) -> NativeResult {
    auto a = c.param(0);
    auto b = c.param(1);
    return a && b ? halt(triple(*a, *b, c.input)) : kDiverge;
  });
  // k-fold 2^(.) from 0: 0, 1, 2, 4, 16, 65536. Beyond k = 5 the value outgrows any fuel.
  register_native("succ-tower", 0, 0, [](const NativeCall& c) -> NativeResult {
    if (c.input > 5) return kDiverge;
    Nat v = 0;
    for (int k = 0; c.input > k; ++k) {
      Nat next = 1;
      next <<= static_cast<unsigned>(v);
      v = next;
    }
    return halt(v);
  });
  register_native("const", 1, 0, [](const NativeCall& c) -> NativeResult {
    auto v = c.param(0);
    return v ? halt(*v) : kDiverge;
  });
  register_native("diverge", 0, 0, [](const NativeCall&) { return kDiverge; });
  register_native("halt-below", 1, 0, [](const NativeCall& c) -> NativeResult {
    auto k = c.param(0);
    return k && c.input < *k ? halt(0) : kDiverge;
  });
  register_native("halt-unless", 1, 0, [](const NativeCall& c) -> NativeResult {
    auto k = c.param(0);
    return k && c.input != *k ? halt(0) : kDiverge;
  });
  // Burns k*x units, then returns x.
  register_native("slow", 1, 0, [](const NativeCall& c) -> NativeResult {
    auto k = c.param(0);
    if (!k) return kDiverge;
    auto work = to_u64(*k * c.input);
    if (!work || !c.fuel.spend(*work)) return kDiverge;
    return halt(c.input);
  });
  register_native("compose", 2, 0, [](const NativeCall& c) -> NativeResult {
    auto inner = c.run_arg(1, c.input);
    if (!inner.is_halted()) return kDiverge;
    return TailCall{encode(c.args[0]), inner.value()};
  });
  register_native("diag-then", 1, 0, [](const NativeCall& c) -> NativeResult {
    auto f = c.param(0);
    if (!f) return kDiverge;
    return TailCall{*f, encode(Descriptor::diag(c.input))};
  });
  register_native("range-enum", 2, 0, [](const NativeCall& c) -> NativeResult {
    auto n = c.param(0);
    auto witness = c.param(1);
    if (!n || !witness) return kDiverge;
    auto [x, s] = unpair(c.input);
    auto stage = to_u64(s).value_or(std::numeric_limits<std::uint64_t>::max());
    auto budget = dovetail_fuel(stage);
    if (!c.fuel.spend(budget)) return kDiverge;
    Fuel inner(budget);
    return c.registry.eval(*n, x, inner).is_halted() ? halt(x) : halt(*witness);
  });
}

bool Registry::add(const std::string& name, std::size_t arity, std::uint64_t cost, NativeImpl impl,
                   bool throw_on_dup) {
  std::unique_lock lock(mutex_);
  for (const auto& e : entries_)
    if (e.name == name) {
      if (throw_on_dup) throw Error("native already registered: " + name);
      return false;
    }
  entries_.push_back(Entry{name, arity, cost, std::move(impl)});
  return true;
}

void Registry::register_native(const std::string& name, std::size_t arity, std::uint64_t cost, NativeImpl impl) {
  add(name, arity, cost, std::move(impl), true);
}

bool Registry::ensure_native(const std::string& name, std::size_t arity, std::uint64_t cost, NativeImpl impl) {
  return add(name, arity, cost, std::move(impl), false);
}

bool Registry::contains(const std::string& name) const { return find(name) != nullptr; }

const Registry::Entry* Registry::find(const std::string& name) const {
  std::shared_lock lock(mutex_);
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

StepOutcome Registry::eval(const Index& e, const Nat& x, Fuel& fuel) const {
  auto d = decode(e);
  if (!d) return StepOutcome::out_of_fuel();
  return eval(*d, x, fuel);
}

StepOutcome Registry::eval(const Descriptor& start, const Nat& x0, Fuel& fuel) const {
  Descriptor d = start;
  Nat x = x0;
  for (;;) {
    if (!fuel.spend(1)) return StepOutcome::out_of_fuel();
    std::optional<Descriptor> next;
    if (const auto* lit = std::get_if<Descriptor::NatLit>(&d.node)) {
      return StepOutcome::halted(lit->value);
    } else if (const auto* p = std::get_if<Descriptor::Partial>(&d.node)) {
      x = pair(p->arg, x);
      next = decode(p->program);
    } else if (const auto* g = std::get_if<Descriptor::Diag>(&d.node)) {
      auto m = eval(g->program, g->program, fuel);
      if (!m.is_halted()) return StepOutcome::out_of_fuel();
      next = decode(m.value());
    } else {
      const auto& n = std::get<Descriptor::Native>(d.node);
      const Entry* entry = find(n.name);
      if (!entry || entry->arity != n.args.size() || !fuel.spend(entry->cost)) return StepOutcome::out_of_fuel();
      NativeResult r = entry->impl(NativeCall{n.args, x, fuel, *this});
      if (auto* v = std::get_if<Nat>(&r)) return StepOutcome::halted(std::move(*v));
      auto* tail = std::get_if<TailCall>(&r);
      if (!tail) return StepOutcome::out_of_fuel();
      x = std::move(tail->input);
      next = decode(tail->program);
    }
    if (!next) return StepOutcome::out_of_fuel();
    d = std::move(*next);
  }
}

StepOutcome eval_step(const Registry& reg, const Index& e, const Nat& x, std::uint64_t fuel) {
  Fuel tank(fuel);
  return reg.eval(e, x, tank);
}

Membership we_member(const Registry& reg, const Index& e, const Nat& x, std::uint64_t fuel) {
  return eval_step(reg, e, x, fuel).is_halted() ? Membership::Yes : Membership::Unknown;
}

std::vector<Nat> we_enumerate(const Registry& reg, const Index& e, std::uint64_t budget) {
  std::vector<Nat> found;
  std::set<Nat> seen;
  auto program = decode(e);
  if (!program) return found;
  for (std::uint64_t t = 0; t < budget; ++t) {
    auto [x, s] = unpair(t);
    if (seen.count(x)) continue;
    Fuel tank(dovetail_fuel(static_cast<std::uint64_t>(s)));
    if (reg.eval(*program, x, tank).is_halted()) {
      seen.insert(x);
      found.push_back(x);
    }
  }
  return found;
}

Index smn(const Index& e, const Nat& a) { return encode(Descriptor::partial(e, a)); }

Index fixpoint(const Index& f) {
  Index h = encode(Descriptor::native("diag-then", {Descriptor::lit(f)}));
  return encode(Descriptor::diag(h));
}

Index range_enumerator(const Registry& reg, const Index& n, const Nat& witness, std::uint64_t fuel) {
  if (we_member(reg, n, witness, fuel) != Membership::Yes)
    throw PreconditionError("range_enumerator: witness not certified as a member of W_n");
  return encode(Descriptor::native("range-enum", {Descriptor::lit(n), Descriptor::lit(witness)}));
}

}  // namespace stratalab
