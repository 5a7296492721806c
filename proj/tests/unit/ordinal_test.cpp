#include <doctest.h>

#include <algorithm>
#include <set>

#include "stratalab/errors.hpp"
#include "stratalab/ordinal.hpp"

using namespace stratalab;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

}  // namespace

TEST_SUITE("ordinal") {
  TEST_CASE("comparison") {
    CHECK(ord_cmp(O("w"), O("w+1")) == Cmp::LT);
    CHECK(ord_cmp(O("e0*1"), O("w^(w)*5")) == Cmp::GT);
    CHECK(ord_cmp(O("e0*2+w*3"), O("e0*2+w*3")) == Cmp::EQ);
    CHECK(ord_cmp(O("e0*1+w^(w+1)"), O("e0*2")) == Cmp::LT);
    CHECK(ord_cmp(O("w^(w^(2))"), O("w^(w*5)*9")) == Cmp::GT);
  }

  TEST_CASE("literals print canonically") {
    CHECK(O("e0*2 + w^(2)*3 + w + 4").str() == "e0*2+w^(2)*3+w+4");
    CHECK(O("0").str() == "0");
    CHECK(O("e0").str() == "e0*1");
    CHECK_THROWS_AS(O("w+w^(2)"), ParseError);
    CHECK_THROWS_AS(O("w^(e0)"), ParseError);
  }

  TEST_CASE("le1 fragment") {
    CHECK(le1(O("e0*1"), O("e0*2")) == Le1Verdict::Yes);
    CHECK(le1(O("w+3"), O("w+3")) == Le1Verdict::Yes);
    CHECK(le1(O("e0*2"), O("e0*1")) == Le1Verdict::No);
    CHECK(le1(O("w"), O("w*2")) == Le1Verdict::Unknown);
  }

  TEST_CASE("le1 defers to an oracle when the fragment is silent") {
    struct AlwaysYes : Le1Oracle {
      Le1Verdict query(const Ordinal&, const Ordinal&) const override { return Le1Verdict::Yes; }
    } oracle;
    CHECK(le1(O("w"), O("w*2"), &oracle) == Le1Verdict::Yes);
    CHECK(le1(O("w*2"), O("w"), &oracle) == Le1Verdict::No);
  }

  TEST_CASE("coverings") {
    CHECK(is_covering(OrdMap({{O("e0*1"), O("e0*2")}, {O("e0*2"), O("e0*5")}})) == Le1Verdict::Yes);
    CHECK(is_covering(OrdMap::identity({O("w"), O("w*2"), O("e0*3")})) == Le1Verdict::Yes);
    CHECK(is_covering({{O("e0*1"), O("e0*2")}, {O("e0*2"), O("e0*1")}}) == Le1Verdict::No);
    CHECK_THROWS_AS(OrdMap({{O("e0*1"), O("e0*2")}, {O("e0*2"), O("e0*1")}}), PreconditionError);
    // e0*1 <=_1 e0*2 must map onto a certified pair
    CHECK(is_covering(OrdMap({{O("e0*1"), O("w")}, {O("e0*2"), O("w*2")}})) == Le1Verdict::Unknown);
  }

  TEST_CASE("pattern collapse") {
    auto empty = pattern_collapse({}, {}, O("e0*3"));
    REQUIRE(empty.has_value());
    CHECK(empty->collapsed.empty());
    CHECK(empty->map.empty());

    // No certified ordinal strictly between e0*1 and e0*2.
    CHECK_FALSE(pattern_collapse({O("e0*1")}, {O("e0*2")}, O("e0*2")).has_value());
    CHECK_FALSE(pattern_collapse({O("e0*1")}, {O("e0*3")}, O("e0*2")).has_value());
    CHECK_FALSE(pattern_collapse({O("e0*1"), O("e0*2")}, {O("e0*4")}, O("e0*3")).has_value());

    // e0*3, e0*5 above bound e0*4 with X = {e0*1}: copies at e0*2, e0*3.
    auto r = pattern_collapse({O("e0*1")}, {O("e0*5"), O("e0*7")}, O("e0*4"));
    REQUIRE(r.has_value());
    for (const auto& y : r->collapsed) {
      CHECK(ord_cmp(y, O("e0*4")) == Cmp::LT);
      CHECK(ord_cmp(y, O("e0*1")) == Cmp::GT);
    }
    CHECK(*r->map.find(O("e0*1")) == O("e0*1"));
    CHECK(is_covering(r->map) == Le1Verdict::Yes);
  }

  TEST_CASE("enumeration order") {
    auto one = enum_ordinals(1);
    REQUIRE(one.size() >= 3);
    CHECK(one[0] == O("0"));
    CHECK(one[1] == O("e0*1"));
    CHECK(enum_ordinals(0) == std::vector<Ordinal>{O("0")});
    auto five = enum_ordinals(5);
    CHECK(std::find(five.begin(), five.end(), O("e0*1+w")) != five.end());
    CHECK(std::set<Ordinal>(five.begin(), five.end()).size() == five.size());
    CHECK(five == enum_ordinals(5));
  }

  TEST_CASE("successor") {
    CHECK(successor(O("w")) == O("w+1"));
    CHECK(successor(O("e0*2")) == O("e0*2+1"));
    CHECK(successor(O("0")) == O("1"));
  }
}
