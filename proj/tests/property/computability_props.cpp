#include <doctest.h>

#include <random>

#include "stratalab/computability.hpp"

using namespace stratalab;

namespace {

Descriptor nat(std::uint64_t n) { return Descriptor::lit(n); }

// Random program over the builtin vocabulary, nesting bounded by depth.
Descriptor program(std::mt19937_64& rng, int depth) {
  auto pick = [&](std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); };
  if (depth == 0 || pick(3) == 0) {
    switch (pick(10)) {
      case 0: return Descriptor::native("id");
      case 1: return Descriptor::native("zero");
      case 2: return Descriptor::native("succ");
      case 3: return Descriptor::native("add");
      case 4: return Descriptor::native("proj1");
      case 5: return Descriptor::native("proj2");
      case 6: return Descriptor::native("halt-below", {nat(pick(6))});
      case 7: return Descriptor::native("halt-unless", {nat(pick(4))});
      case 8: return Descriptor::native("slow", {nat(pick(40))});
      default: return Descriptor::native("const", {nat(pick(9))});
    }
  }
  switch (pick(3)) {
    case 0: return Descriptor::native("compose", {program(rng, depth - 1), program(rng, depth - 1)});
    case 1: return Descriptor::partial(encode(program(rng, depth - 1)), pick(5));
    default: return Descriptor::native("triple-with", {nat(pick(3)), nat(pick(3))});
  }
}

}  // namespace

TEST_SUITE("computability") {
  TEST_CASE("evaluation is monotone in fuel and deterministic") {
    Registry reg;
    std::mt19937_64 rng(41);
    for (int k = 0; k < 500; ++k) {
      auto e = encode(program(rng, 3));
      Nat x = rng() % 12;
      std::uint64_t fuel = 1 + rng() % 200;
      auto a = eval_step(reg, e, x, fuel);
      CHECK(a == eval_step(reg, e, x, fuel));
      if (a.is_halted())
        for (std::uint64_t more : {fuel + 1, fuel * 2, fuel * 10}) CHECK(eval_step(reg, e, x, more) == a);
    }
  }

  TEST_CASE("s-m-n agrees with the paired call at every fuel") {
    Registry reg;
    std::mt19937_64 rng(42);
    for (int k = 0; k < 500; ++k) {
      auto e = encode(program(rng, 2));
      Nat a = rng() % 6, x = rng() % 6;
      std::uint64_t fuel = 5 + rng() % 300;
      auto direct = eval_step(reg, e, pair(a, x), fuel);
      // the Partial wrapper costs one step
      auto via = eval_step(reg, smn(e, a), x, fuel + 1);
      CHECK(direct == via);
      auto generous = eval_step(reg, smn(e, a), x, 100000);
      if (direct.is_halted()) CHECK(generous == direct);
    }
  }

  TEST_CASE("fixpoints of constant transformers") {
    Registry reg;
    std::mt19937_64 rng(43);
    for (int k = 0; k < 500; ++k) {
      auto target = encode(program(rng, 2));
      auto f = encode(Descriptor::native("const", {Descriptor::lit(target)}));
      auto n = fixpoint(f);
      auto image = eval_step(reg, f, n, 100);
      REQUIRE(image.is_halted());
      for (std::uint64_t x = 0; x < 3; ++x) {
        auto lhs = we_member(reg, n, x, 2000) == Membership::Yes;
        auto rhs = we_member(reg, image.value(), x, 2000) == Membership::Yes;
        if (lhs) CHECK(we_member(reg, image.value(), x, 2000) == Membership::Yes);
        if (rhs) CHECK(we_member(reg, n, x, 4000) == Membership::Yes);
      }
    }
  }

  TEST_CASE("descriptor encoding round-trips") {
    std::mt19937_64 rng(44);
    for (int k = 0; k < 2000; ++k) {
      auto d = program(rng, 4);
      if (k % 5 == 0) d = Descriptor::diag(encode(d));
      CHECK(decode(encode(d)) == d);
      CHECK(deserialize(serialize(d)) == d);
    }
    for (std::uint64_t junk = 1; junk < 2000; ++junk) {
      auto d = decode(junk);
      if (d) CHECK(encode(*d) == Nat(junk));
    }
  }
}
