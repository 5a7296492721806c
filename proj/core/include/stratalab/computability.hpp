#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include "stratalab/nat.hpp"

namespace stratalab {

// Program indices are Godel numbers of descriptor serializations. Every natural is an index;
// one that does not decode to a well-formed descriptor names the everywhere-divergent function.
using Index = Nat;

struct Descriptor {
  // phi(x) = value
  struct NatLit {
    Nat value;
    bool operator==(const NatLit&) const = default;
  };
  // Host procedure from the registry. Arguments are descriptors; natives read NatLit ones as
  // parameters and may run the others as programs.
  struct Native {
    std::string name;
    std::vector<Descriptor> args;
    bool operator==(const Native&) const = default;
  };
  // phi(x) = phi_program(pair(arg, x))
  struct Partial {
    Index program;
    Nat arg;
    bool operator==(const Partial&) const = default;
  };
  // phi(x) = phi_{phi_program(program)}(x)
  struct Diag {
    Index program;
    bool operator==(const Diag&) const = default;
  };

  std::variant<NatLit, Native, Partial, Diag> node;

  static Descriptor lit(const Nat& n) { return {NatLit{n}}; }
  static Descriptor native(std::string name, std::vector<Descriptor> args = {}) {
    return {Native{std::move(name), std::move(args)}};
  }
  static Descriptor partial(const Index& e, const Nat& a) { return {Partial{e, a}}; }
  static Descriptor diag(const Index& e) { return {Diag{e}}; }

  bool operator==(const Descriptor&) const = default;
};

// Tag byte (1 NatLit, 2 Native, 3 Partial, 4 Diag) followed by the fields. Naturals and names
// are a 4-byte big-endian length then the bytes; argument lists are a 4-byte count then the items.
std::vector<std::uint8_t> serialize(const Descriptor& d);
std::optional<Descriptor> deserialize(const std::vector<std::uint8_t>& bytes);

// The serialization read as a big-endian natural. The leading tag is nonzero, so no bytes are lost.
Index encode(const Descriptor& d);
std::optional<Descriptor> decode(const Index& e);

class Fuel {
 public:
  explicit Fuel(std::uint64_t units) : left_(units) {}
  // False, and the tank emptied, when fewer than n units remain.
  bool spend(std::uint64_t n) noexcept {
    if (n > left_) {
      left_ = 0;
      return false;
    }
    left_ -= n;
    return true;
  }
  std::uint64_t left() const noexcept { return left_; }

 private:
  std::uint64_t left_;
};

class StepOutcome {
 public:
  static StepOutcome halted(Nat v) { return StepOutcome(std::move(v)); }
  static StepOutcome out_of_fuel() { return StepOutcome(std::nullopt); }
  bool is_halted() const noexcept { return value_.has_value(); }
  const Nat& value() const { return *value_; }
  bool operator==(const StepOutcome&) const = default;

 private:
  explicit StepOutcome(std::optional<Nat> v) : value_(std::move(v)) {}
  std::optional<Nat> value_;
};

class Registry;

// What a native sees. Results must depend on the arguments only, and fuel spent before halting
// must not depend on the amount available; that is what makes evaluation monotone in fuel.
struct NativeCall {
  const std::vector<Descriptor>& args;
  const Nat& input;
  Fuel& fuel;
  const Registry& registry;

  // NatLit argument k, or nullopt.
  std::optional<Nat> param(std::size_t k) const;
  // Runs argument k as a program on x, charging the shared fuel.
  StepOutcome run_arg(std::size_t k, const Nat& x) const;
  StepOutcome run(const Index& e, const Nat& x) const;
};

// A native either halts, gives up (out of fuel or divergent), or hands off to another program in
// tail position so that long chains of self-reference do not grow the host stack.
struct TailCall {
  Index program;
  Nat input;
};
using NativeResult = std::variant<std::monostate, Nat, TailCall>;
using NativeImpl = std::function<NativeResult(const NativeCall&)>;

// Append-only table of natives. Registration is synchronized; lookups take a shared lock and the
// returned entries stay valid for the registry's lifetime.
class Registry {
 public:
  // Starts with the built-in vocabulary: id, zero, succ, add, proj1, proj2, is-successor,
  // succ-tower, const(c), diverge, halt-below(k), halt-unless(k), slow(k), triple-with(a,b), compose(g,f),
  // diag-then(f), range-enum(n,w).
  Registry();
  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  // Throws Error on a duplicate name. cost is charged on every call before impl runs.
  void register_native(const std::string& name, std::size_t arity, std::uint64_t cost, NativeImpl impl);
  // Registers unless the name exists; returns whether it registered.
  bool ensure_native(const std::string& name, std::size_t arity, std::uint64_t cost, NativeImpl impl);
  bool contains(const std::string& name) const;

  StepOutcome eval(const Index& e, const Nat& x, Fuel& fuel) const;
  StepOutcome eval(const Descriptor& d, const Nat& x, Fuel& fuel) const;

 private:
  struct Entry {
    std::string name;
    std::size_t arity;
    std::uint64_t cost;
    NativeImpl impl;
  };
  const Entry* find(const std::string& name) const;
  bool add(const std::string& name, std::size_t arity, std::uint64_t cost, NativeImpl impl, bool throw_on_dup);

  mutable std::shared_mutex mutex_;
  std::deque<Entry> entries_;
};

StepOutcome eval_step(const Registry& reg, const Index& e, const Nat& x, std::uint64_t fuel);

enum class Membership { Yes, Unknown };
Membership we_member(const Registry& reg, const Index& e, const Nat& x, std::uint64_t fuel);

// Dovetailing order: step t = pair(x, s) tries input x with dovetail_fuel(s).
std::uint64_t dovetail_fuel(std::uint64_t stage);
// Members found in steps 0..budget-1, in discovery order, without repeats.
std::vector<Nat> we_enumerate(const Registry& reg, const Index& e, std::uint64_t budget);

Index smn(const Index& e, const Nat& a);
// n with phi_n = phi_{phi_f(n)}: n = Diag(h) where phi_h(u) = phi_f(encode(Diag(u))).
Index fixpoint(const Index& f);
// k with phi_k total and range(phi_k) = W_n: step t of the dovetailing of W_n, or witness when
// that step finds nothing. Throws PreconditionError unless witness is in W_n within fuel.
Index range_enumerator(const Registry& reg, const Index& n, const Nat& witness, std::uint64_t fuel);
// Fuel after which eval_step(range_enumerator(..), t, .) is guaranteed to halt.
std::uint64_t range_enumerator_fuel(const Nat& t);

}  // namespace stratalab
