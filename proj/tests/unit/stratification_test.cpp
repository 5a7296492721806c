#include <doctest.h>

#include "stratalab/stratification.hpp"

using namespace stratalab;

namespace {

Formula P(const char* s) { return parse_formula(s, Dialect::Strat); }
Ordinal O(const char* s) { return Ordinal::parse(s); }

}  // namespace

TEST_SUITE("stratification") {
  TEST_CASE("superscripts") {
    CHECK(superscripts(P("K[7]^{w} K[7]^{5} (S(0)=0)")) == std::set<Ordinal>{O("5"), O("w")});
    CHECK(superscripts(P("K[1]K[2](x=0)")).empty());
    CHECK(superscripts(P("K[7]^{e0*2}(x=0)")) == std::set<Ordinal>{O("e0*2")});
  }

  TEST_CASE("i-stratified examples") {
    auto a = P("K[7]^{w}K[7]^{5}(S(0)=0) -> K[8](S(0)=0)");
    CHECK(is_i_stratified(a, 7));
    CHECK_FALSE(is_i_stratified(a, 6));
    CHECK_FALSE(is_i_stratified(a, 8));
    CHECK_FALSE(is_i_stratified(P("K[7]^{5}K[7]^{w}(S(0)=0)"), 7));
    CHECK_FALSE(is_i_stratified(P("K[7]^{5}K[7](S(0)=0)"), 7));
    CHECK(is_i_stratified(P("K[7]^{5}K[8]K[7](S(0)=0)"), 7));
    CHECK_FALSE(is_i_stratified(P("K[7]^{5}K[8]K[7]^{4}(S(0)=0)"), 7));
  }

  TEST_CASE("very i-stratified") {
    CHECK(is_very_i_stratified(P("K[7]^{e0*2}K[7]^{e0*1}(0=0)"), 7));
    CHECK_FALSE(is_very_i_stratified(P("K[7]^{w}(0=0)"), 7));
    for (std::uint64_t i : {0, 3, 9}) CHECK(is_very_i_stratified(P("0=0"), i));
  }

  TEST_CASE("ordinal maps on formulas") {
    OrdMap h({{O("1"), O("0")}, {O("w"), O("w*2+1")}});
    auto f = P("K[1]^{0}(S(0)=0) -> K[1]^{1}(S(0)=0) -> K[1]^{w}(S(0)=0)");
    CHECK(apply_ordmap(h, f) == P("K[1]^{0}(S(0)=0) -> K[1]^{0}(S(0)=0) -> K[1]^{w*2+1}(S(0)=0)"));
    CHECK(apply_ordmap(OrdMap::identity({O("1"), O("w")}), f) == f);
    CHECK(apply_ordmap(OrdMap({{O("e0*4"), O("e0*5")}}), f) == f);
    // plain operators shield their scope
    auto shielded = P("K[2]K[1]^{w}(0=0)");
    CHECK(apply_ordmap(h, shielded) == shielded);
  }

  TEST_CASE("erase") {
    auto f = P("K[5]^{w}(S(0)=0) -> K[5]^{w+1}K[5]^{w}(S(0)=0)");
    CHECK(erase(f) == P("K[5](S(0)=0) -> K[5]K[5](S(0)=0)"));
    CHECK(erase(P("K[5](0=0)")) == P("K[5](0=0)"));
    CHECK(erase(erase(f)) == erase(f));
  }

  TEST_CASE("validity lift") {
    CHECK(lift_valid(P("K[3](0=0)"), 3) == P("K[3]^{e0*1}(0=0)"));
    CHECK(lift_valid(P("K[3]K[3](0=0)"), 3) == P("K[3]^{e0*2}K[3]^{e0*1}(0=0)"));
    CHECK(lift_valid(P("K[4](0=0)"), 3) == P("K[4](0=0)"));
    CHECK_THROWS_AS(lift_valid(P("K[3]^{w}(0=0)"), 3), PreconditionError);
  }

  TEST_CASE("stratifiers") {
    auto veri = Stratifier::veristratifier(1);
    auto f = P("K[2]K[1](S(0)=0) -> K[1]K[1](S(0)=0)");
    CHECK(apply_stratifier(veri, f) == P("K[2]K[1](S(0)=0) -> K[1]^{e0*2}K[1]^{e0*1}(S(0)=0)"));
    CHECK(apply_stratifier(veri, P("x=0")) == P("x=0"));

    auto tail = Stratifier::prefix_then_all(1, {O("3"), O("w")});
    CHECK(tail.member(O("3")));
    CHECK_FALSE(tail.member(O("4")));
    CHECK(tail.member(O("w+1")));
    CHECK(apply_stratifier(tail, P("K[1]K[1]K[1](0=0)")) == P("K[1]^{w+1}K[1]^{w}K[1]^{3}(0=0)"));
  }

  TEST_CASE("composed stratifier reproduces h(theta+)") {
    auto veri = Stratifier::veristratifier(1);
    auto theta = P("K[1](0=0) -> K[1]K[1](x=0)");
    OrdMap h({{O("e0*1"), O("e0*3")}, {O("e0*2"), O("e0*6")}});
    auto star = compose_stratifier(h, veri, theta);
    CHECK(apply_stratifier(star, theta) == apply_ordmap(h, apply_stratifier(veri, theta)));
    CHECK(apply_stratifier(compose_stratifier(OrdMap::identity({O("e0*1"), O("e0*2")}), veri, theta), theta) ==
          apply_stratifier(veri, theta));
    auto no_i = P("K[2](0=0)");
    CHECK(apply_stratifier(compose_stratifier(h, veri, no_i), no_i) == no_i);
    CHECK_THROWS_AS(compose_stratifier(OrdMap({{O("e0*1"), O("e0*3")}}), veri, theta), PreconditionError);
  }

  TEST_CASE("stratifier sets") {
    auto set = StratifierSet::make(
        {Stratifier::veristratifier(1), Stratifier::veristratifier(5), Stratifier::veristratifier(2)});
    CHECK(set.indices() == std::vector<std::uint64_t>{1, 5, 2});
    CHECK_THROWS_AS(StratifierSet::make({Stratifier::veristratifier(1), Stratifier::prefix_then_all(1, {})}),
                    PreconditionError);
    IndexOrder less = [](std::uint64_t a, std::uint64_t b) { return a < b; };
    CHECK(is_above(StratifierSet{}, 7, less));
    CHECK(is_above(set, 0, less));
    CHECK_FALSE(is_above(set, 2, less));
  }

  TEST_CASE("theory cuts") {
    auto low = P("K[1]^{e0*1}(0=0)");
    auto high = P("K[1]^{e0*2}(0=0)");
    auto plain = P("0=0");
    auto cut = [&](const Ordinal& a) {
      std::vector<Formula> out;
      for (const auto& ax : theory_cut(AxiomStream::from_sentences({low, high, plain}, "t"), a).take(10))
        out.push_back(ax.sentence);
      return out;
    };
    CHECK(cut(O("e0*2")) == std::vector<Formula>{low, plain});
    CHECK(cut(O("0")) == std::vector<Formula>{plain});
    CHECK(cut(O("e0*3")).size() == 3);
  }

  TEST_CASE("canonical veristratified form") {
    CHECK(canonical_veristratified(P("K[7]^{w}K[7]^{5}(0=0)"), 7) == P("K[7]^{e0*2}K[7]^{e0*1}(0=0)"));
    auto very = P("K[7]^{e0*2}K[7]^{e0*1}(0=0)");
    CHECK(canonical_veristratified(very, 7) == very);
    CHECK(canonical_veristratified(P("0=0"), 7) == P("0=0"));
    CHECK_THROWS_AS(canonical_veristratified(P("K[7]^{5}K[7]^{w}(0=0)"), 7), PreconditionError);
  }

  TEST_CASE("recursive definition agrees on the worked examples") {
    for (const char* s : {"K[7]^{w}K[7]^{5}(S(0)=0) -> K[8](S(0)=0)", "K[7]^{5}K[7]^{w}(S(0)=0)",
                          "K[7]^{5}K[8]K[7](S(0)=0)", "K[7]^{5}K[8]K[7]^{4}(S(0)=0)", "K[7](0=0)"})
      for (std::uint64_t i : {6, 7, 8}) CHECK(is_i_stratified(P(s), i) == is_i_stratified_recursive(P(s), i));
  }
}
