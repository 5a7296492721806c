#include <doctest.h>

#include <algorithm>
#include <set>

#include "stratalab/computability.hpp"
#include "stratalab/errors.hpp"

using namespace stratalab;

namespace {

Index native(const char* name, std::vector<Descriptor> args = {}) {
  return encode(Descriptor::native(name, std::move(args)));
}

Index param_native(const char* name, std::uint64_t k) { return native(name, {Descriptor::lit(k)}); }

}  // namespace

TEST_SUITE("computability") {
  TEST_CASE("evaluation") {
    Registry reg;
    auto out = eval_step(reg, native("id"), 5, 10);
    REQUIRE(out.is_halted());
    CHECK(out.value() == 5);
    CHECK_FALSE(eval_step(reg, native("diverge"), 5, 1000000).is_halted());
    CHECK_FALSE(eval_step(reg, native("no-such-native"), 5, 1000).is_halted());
    CHECK_FALSE(eval_step(reg, Nat(12345), 5, 1000).is_halted());

    // Partial(add, 3) on x is add(pair(3, x)) = 3 + x.
    auto partial = encode(Descriptor::partial(native("add"), 3));
    auto p = eval_step(reg, partial, 4, 100);
    REQUIRE(p.is_halted());
    CHECK(p.value() == 7);
  }

  TEST_CASE("descriptor encoding") {
    std::vector<Descriptor> shapes{
        Descriptor::lit(0),
        Descriptor::lit(Nat(1) << 100),
        Descriptor::native("compose", {Descriptor::native("succ"), Descriptor::native("const", {Descriptor::lit(3)})}),
        Descriptor::partial(Nat(77), 5),
        Descriptor::diag(Nat(123456789)),
    };
    for (const auto& d : shapes) CHECK(decode(encode(d)) == d);
    CHECK_FALSE(decode(0).has_value());
    CHECK(encode(Descriptor::lit(5)) == encode(Descriptor::lit(5)));
  }

  TEST_CASE("r.e. membership") {
    Registry reg;
    CHECK(we_member(reg, native("succ"), 9, 100) == Membership::Yes);
    CHECK(we_member(reg, native("diverge"), 9, 100000) == Membership::Unknown);
    auto slow = param_native("slow", 50);
    CHECK(we_member(reg, slow, 10, 100) == Membership::Unknown);
    CHECK(we_member(reg, slow, 10, 1000) == Membership::Yes);
    CHECK(we_member(reg, slow, 10, 5000) == Membership::Yes);
  }

  TEST_CASE("enumeration") {
    Registry reg;
    auto ids = we_enumerate(reg, native("id"), 100);
    REQUIRE(ids.size() >= 5);
    for (std::size_t k = 0; k < 5; ++k) CHECK(ids[k] == k);
    CHECK(we_enumerate(reg, native("diverge"), 500).empty());
    auto below = we_enumerate(reg, param_native("halt-below", 4), 500);
    CHECK(below == std::vector<Nat>{0, 1, 2, 3});
    auto unless = we_enumerate(reg, param_native("halt-unless", 2), 300);
    CHECK(std::find(unless.begin(), unless.end(), Nat(2)) == unless.end());
    for (const auto& m : unless) CHECK(we_member(reg, param_native("halt-unless", 2), m, 1000) == Membership::Yes);
  }

  TEST_CASE("s-m-n") {
    Registry reg;
    for (std::uint64_t a : {0, 3, 11}) {
      auto second = smn(native("proj2"), a);
      auto first = smn(native("proj1"), a);
      for (std::uint64_t x : {0, 1, 8}) {
        CHECK(eval_step(reg, second, x, 100).value() == x);
        CHECK(eval_step(reg, first, x, 100).value() == a);
      }
    }
    CHECK(smn(native("add"), 4) == smn(native("add"), 4));
  }

  TEST_CASE("recursion theorem") {
    Registry reg;
    // f = constant index of halt-below(3): W_n must be {0, 1, 2}.
    auto target = param_native("halt-below", 3);
    auto n = fixpoint(native("const", {Descriptor::lit(target)}));
    CHECK(we_enumerate(reg, n, 400) == std::vector<Nat>{0, 1, 2});
    // f = index of the empty-domain program.
    auto empty = fixpoint(native("const", {Descriptor::lit(native("diverge"))}));
    CHECK(we_enumerate(reg, empty, 400).empty());
  }

  TEST_CASE("range enumerator") {
    Registry reg;
    auto single = param_native("halt-below", 1);
    auto k = range_enumerator(reg, single, 0, 100);
    for (std::uint64_t t = 0; t <= 100; ++t) {
      auto out = eval_step(reg, k, t, range_enumerator_fuel(t));
      REQUIRE(out.is_halted());
      CHECK(out.value() == 0);
    }
    auto cofinite = param_native("halt-unless", 3);
    auto k2 = range_enumerator(reg, cofinite, 0, 100);
    std::set<Nat> hit;
    for (std::uint64_t t = 0; t <= 400; ++t) {
      auto out = eval_step(reg, k2, t, range_enumerator_fuel(t));
      REQUIRE(out.is_halted());
      hit.insert(out.value());
    }
    for (std::uint64_t m : {0, 1, 2, 4, 5}) CHECK(hit.count(m) == 1);
    CHECK(hit.count(3) == 0);
    CHECK_THROWS_AS(range_enumerator(reg, cofinite, 3, 1000), PreconditionError);
  }

  TEST_CASE("registry") {
    Registry reg;
    reg.register_native("twice", 0, 1, [](const NativeCall& c) -> NativeResult { return Nat(c.input * 2); });
    CHECK(reg.contains("twice"));
    CHECK(eval_step(reg, native("twice"), 21, 10).value() == 42);
    CHECK_THROWS_AS(reg.register_native("twice", 0, 1, [](const NativeCall&) -> NativeResult { return {}; }), Error);
    CHECK_FALSE(reg.ensure_native("twice", 0, 1, [](const NativeCall&) -> NativeResult { return {}; }));
  }

  TEST_CASE("builtin order decider and tower") {
    Registry reg;
    CHECK(eval_step(reg, native("is-successor"), pair(4, 3), 10).value() == 1);
    CHECK(eval_step(reg, native("is-successor"), pair(3, 4), 10).value() == 0);
    std::vector<Nat> tower{0, 1, 2, 4, 16, 65536};
    for (std::uint64_t k = 0; k < tower.size(); ++k) CHECK(eval_step(reg, native("succ-tower"), k, 10).value() == tower[k]);
    CHECK_FALSE(eval_step(reg, native("succ-tower"), 6, 1000000).is_halted());
  }
}
