#include <doctest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"

using namespace stratalab;
using namespace stratalab::testgen;

TEST_SUITE("formula") {
  TEST_CASE("assignment substitution is simultaneous and closes the formula") {
    FormulaGen gen(plain_config(), 101);
    for (int k = 0; k < 2000; ++k) {
      auto f = gen.formula();
      Assignment s;
      for (auto v : free_vars(f)) s[v] = below(gen.rng(), 5);
      auto closed = assign_substitute(f, s);
      CHECK(free_vars(closed).empty());

      std::vector<Var> order;
      for (const auto& [v, _] : s) order.push_back(v);
      for (int perm = 0; perm < 3; ++perm) {
        auto g = f;
        for (auto v : order) g = substitute(g, v, numeral(s[v]));
        CHECK(g == closed);
        std::shuffle(order.begin(), order.end(), gen.rng());
      }
    }
  }

  TEST_CASE("alpha equality is an equivalence and a congruence") {
    FormulaGen gen(plain_config(), 202);
    for (int k = 0; k < 1000; ++k) {
      auto f = gen.formula();
      auto g = alpha_variant(f);
      auto h = alpha_variant(g);
      auto other = gen.formula();
      CHECK(alpha_equal(f, f));
      CHECK(alpha_equal(f, g));
      CHECK(alpha_equal(g, f));
      CHECK(alpha_equal(f, h));
      CHECK(alpha_equal(Formula::negation(f), Formula::negation(g)));
      CHECK(alpha_equal(Formula::implies(f, other), Formula::implies(g, other)));
      CHECK(alpha_equal(Formula::implies(other, f), Formula::implies(other, g)));
      CHECK(alpha_equal(Formula::forall(Var{0}, f), Formula::forall(Var{0}, g)));
      CHECK(alpha_equal(Formula::op(OperatorId::plain(2), f), Formula::op(OperatorId::plain(2), g)));
      CHECK(alpha_equal(Formula::op(OperatorId::strat(Ordinal::eps(1), 2), f),
                        Formula::op(OperatorId::strat(Ordinal::eps(1), 2), g)));
      if (!(f == other) && alpha_equal(f, other)) CHECK(normalize_body(f).body == normalize_body(other).body);
    }
  }

  TEST_CASE("godel numbering is injective and invertible") {
    FormulaGen gen({.max_depth = 5, .superscripts = {Ordinal::finite(2), Ordinal::eps(1)}, .o_vocabulary = true}, 303);
    std::set<std::string> printed;
    std::set<Nat> codes;
    while (printed.size() < 10000) {
      auto f = gen.formula();
      if (!printed.insert(f.str()).second) continue;
      auto n = godel(f);
      CHECK(codes.insert(n).second);
      auto back = ungodel(n);
      REQUIRE(back.has_value());
      CHECK(*back == f);
    }
  }

  TEST_CASE("triple and untriple are inverse") {
    std::size_t bad = 0;
    for (std::uint64_t a = 0; a <= 200; ++a)
      for (std::uint64_t b = 0; b <= 200; ++b)
        for (std::uint64_t c = 0; c <= 200; ++c)
          if (!(untriple(triple(a, b, c)) == Triple{a, b, c})) ++bad;
    CHECK(bad == 0);
    std::mt19937_64 rng(404);
    for (int k = 0; k < 1000; ++k) {
      Nat a = Nat(rng()) << (64 + k % 200), b = rng(), c = Nat(rng()) * rng() * rng();
      CHECK(untriple(triple(a, b, c)) == Triple{a, b, c});
      CHECK(triple(untriple(a).a, untriple(a).b, untriple(a).c) == a);
    }
  }

  TEST_CASE("printing and parsing are inverse on canonical forms") {
    FormulaGen gen({.max_depth = 6, .superscripts = {Ordinal::parse("w+1"), Ordinal::eps(2)}, .o_vocabulary = true},
                   505);
    for (int k = 0; k < 3000; ++k) {
      auto f = gen.formula();
      auto text = f.str();
      auto back = parse_formula(text);
      CHECK(back == f);
      CHECK(back.str() == text);
    }
  }

  TEST_CASE("operators do not change the free variables") {
    FormulaGen gen(plain_config(), 606);
    for (int k = 0; k < 1000; ++k) {
      auto f = gen.formula();
      CHECK(free_vars(Formula::op(OperatorId::plain(4), f)) == free_vars(f));
      CHECK(free_vars(Formula::op(OperatorId::strat(Ordinal::parse("w"), 4), f)) == free_vars(f));
    }
  }
}
