#include <doctest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"

using namespace stratalab;
using namespace stratalab::testgen;

namespace {

// Every subformula of f, preorder.
void subformulas(const Formula& f, std::vector<Formula>& out) {
  out.push_back(f);
  switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Forall:
    case FormulaKind::Op:
      subformulas(f.sub(0), out);
      break;
    case FormulaKind::Implies:
      subformulas(f.sub(0), out);
      subformulas(f.sub(1), out);
      break;
    default:
      break;
  }
}

}  // namespace

TEST_SUITE("ordinal") {
  TEST_CASE("comparison is a total order and prints are unique") {
    std::mt19937_64 rng(11);
    std::vector<Ordinal> pool;
    for (int k = 0; k < 150; ++k) pool.push_back(ordinal(rng));
    for (const auto& a : pool)
      for (const auto& b : pool) {
        auto ab = ord_cmp(a, b);
        auto ba = ord_cmp(b, a);
        CHECK((ab == Cmp::EQ) == (ba == Cmp::EQ));
        CHECK((ab == Cmp::LT) == (ba == Cmp::GT));
        CHECK((ab == Cmp::EQ) == (a.str() == b.str()));
        CHECK(Ordinal::parse(a.str()) == a);
      }
    for (int k = 0; k < 3000; ++k) {
      const auto& a = pool[below(rng, pool.size())];
      const auto& b = pool[below(rng, pool.size())];
      const auto& c = pool[below(rng, pool.size())];
      if (ord_cmp(a, b) == Cmp::LT && ord_cmp(b, c) == Cmp::LT) CHECK(ord_cmp(a, c) == Cmp::LT);
    }
  }

  TEST_CASE("le1 laws") {
    std::mt19937_64 rng(12);
    std::vector<Ordinal> pool;
    for (int k = 0; k < 60; ++k) pool.push_back(ordinal(rng));
    for (std::uint64_t k = 1; k <= 4; ++k) pool.push_back(Ordinal::eps(k));
    for (const auto& a : pool) {
      CHECK(le1(a, a) == Le1Verdict::Yes);
      for (const auto& b : pool) {
        auto v = le1(a, b);
        if (v == Le1Verdict::Yes) CHECK(ord_cmp(a, b) != Cmp::GT);
        if (v == Le1Verdict::Yes && le1(b, a) == Le1Verdict::Yes) CHECK(ord_cmp(a, b) == Cmp::EQ);
        for (const auto& c : pool)
          if (v == Le1Verdict::Yes && le1(b, c) == Le1Verdict::Yes) CHECK(le1(a, c) == Le1Verdict::Yes);
      }
    }
  }

  TEST_CASE("pattern collapse guarantees") {
    std::mt19937_64 rng(13);
    int successes = 0;
    for (int k = 0; k < 2000; ++k) {
      std::uint64_t n = 2 + below(rng, 4);
      std::vector<Ordinal> xs, ys;
      for (auto& o : increasing(rng, below(rng, 3))) if (ord_cmp(o, Ordinal::eps(n)) == Cmp::LT) xs.push_back(o);
      for (std::uint64_t m = 0; m < below(rng, 3); ++m) ys.push_back(Ordinal::eps(n + below(rng, 4)));
      if (below(rng, 2) == 0) xs.push_back(Ordinal::eps(1 + below(rng, n - 1)));
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
      std::sort(ys.begin(), ys.end());
      ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
      auto r = pattern_collapse({xs.begin(), xs.end()}, {ys.begin(), ys.end()}, Ordinal::eps(n));
      if (!r) continue;
      ++successes;
      for (const auto& x : xs) {
        REQUIRE(r->map.find(x) != nullptr);
        CHECK(*r->map.find(x) == x);
      }
      CHECK(is_covering(r->map) == Le1Verdict::Yes);
      for (const auto& y : r->collapsed) CHECK(ord_cmp(y, Ordinal::eps(n)) == Cmp::LT);
    }
    CHECK(successes > 100);
  }

  TEST_CASE("ordinal enumeration is injective and stable") {
    for (std::size_t size : {1, 3, 6}) {
      auto a = enum_ordinals(size);
      CHECK(std::set<Ordinal>(a.begin(), a.end()).size() == a.size());
      CHECK(a == enum_ordinals(size));
    }
  }
}

TEST_SUITE("stratification") {
  TEST_CASE("stratifiers erase back and stratify") {
    FormulaGen gen(plain_config(5), 21);
    for (int k = 0; k < 3000; ++k) {
      auto f = gen.formula();
      for (std::uint64_t i : {0, 1}) {
        for (const auto& st : sweep_stratifiers(i)) {
          auto g = apply_stratifier(st, f);
          CHECK(erase(g) == f);
          CHECK(is_i_stratified(g, i));
          CHECK(is_i_stratified(g, i) == is_i_stratified_recursive(g, i));
        }
        CHECK(is_very_i_stratified(apply_stratifier(Stratifier::veristratifier(i), f), i));
      }
    }
  }

  TEST_CASE("lifting valid formulas") {
    FormulaGen gen(plain_config(), 22);
    for (int k = 0; k < 2000; ++k) {
      auto f = gen.formula();
      auto g = lift_valid(f, 1);
      CHECK(is_very_i_stratified(g, 1));
      CHECK(erase(g) == f);
    }
  }

  TEST_CASE("ordinal maps act functorially") {
    std::mt19937_64 rng(23);
    GenConfig cfg = plain_config();
    for (int k = 0; k < 500; ++k) {
      auto dom = increasing(rng, 3);
      cfg.superscripts = dom;
      FormulaGen gen(cfg, 1000 + k);
      auto f = gen.formula();
      CHECK(apply_ordmap(OrdMap::identity({dom.begin(), dom.end()}), f) == f);
      auto h = ordmap_on(rng, dom);
      std::vector<Ordinal> mid;
      for (const auto& [_, y] : h.pairs()) mid.push_back(y);
      auto g = ordmap_on(rng, mid);
      CHECK(apply_ordmap(g.compose_after(h), f) == apply_ordmap(g, apply_ordmap(h, f)));
    }
  }

  TEST_CASE("canonical veristratified form") {
    FormulaGen gen(plain_config(), 24);
    std::mt19937_64 rng(24);
    for (int k = 0; k < 1000; ++k) {
      auto f = gen.formula();
      auto tail = increasing(rng, 2);
      auto g = apply_stratifier(Stratifier::prefix_then_all(1, {tail.begin(), tail.end()}), f);
      REQUIRE(is_i_stratified(g, 1));
      auto c = canonical_veristratified(g, 1);
      CHECK(is_very_i_stratified(c, 1));
      CHECK(erase(c) == erase(g));
    }
  }

  TEST_CASE("composed stratifiers reproduce h of the veristratified form per subformula") {
    FormulaGen gen(plain_config(), 25);
    std::mt19937_64 rng(25);
    auto veri = Stratifier::veristratifier(1);
    for (int k = 0; k < 1000; ++k) {
      auto theta = gen.formula();
      auto plus = apply_stratifier(veri, theta);
      auto on = superscripts(plus);
      std::vector<Ordinal> dom(on.begin(), on.end());
      auto h = ordmap_on(rng, dom);
      auto star = compose_stratifier(h, veri, theta);
      std::vector<Formula> parts;
      subformulas(theta, parts);
      for (const auto& sub : parts) {
        auto sub_plus = apply_stratifier(veri, sub);
        bool inside = true;
        for (const auto& a : superscripts(sub_plus)) inside = inside && h.contains(a);
        if (inside) CHECK(apply_stratifier(star, sub) == apply_ordmap(h, sub_plus));
      }
    }
  }
}
