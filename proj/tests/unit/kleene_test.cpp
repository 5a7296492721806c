#include <doctest.h>

#include "stratalab/kleene_o.hpp"

using namespace stratalab;

namespace {

Formula P(const char* s) { return parse_formula(s, Dialect::OExt); }

// Notation values of Succ chains computed directly: 0, then 2^previous.
Nat chain_value(std::size_t length) {
  Nat v = 0;
  for (std::size_t k = 0; k < length; ++k) v = Nat(1) << static_cast<unsigned>(v);
  return v;
}

}  // namespace

TEST_SUITE("kleene") {
  TEST_CASE("certificates serialize as tagged trees") {
    CHECK(OCert::zero().serialize() == "Z");
    CHECK(succ_chain(2).serialize() == "S S Z");
    for (std::size_t n = 0; n < 6; ++n) CHECK(OCert::deserialize(succ_chain(n).serialize()) == succ_chain(n));
    CHECK_THROWS_AS(OCert::deserialize("S S"), ParseError);
    CHECK_THROWS_AS(OCert::deserialize("Q"), ParseError);
  }

  TEST_CASE("notations of successor chains") {
    for (std::size_t n = 0; n <= 5; ++n) CHECK(succ_chain(n).notation_value() == chain_value(n));
    CHECK_FALSE(succ_chain(6).notation_value(1000).has_value());
    CHECK(succ_chain(2).notation() == Term::num(2));
  }

  TEST_CASE("values") {
    Registry reg;
    for (std::size_t n = 0; n <= 30; ++n) {
      auto v = o_value(reg, succ_chain(n));
      CHECK(v.exact);
      CHECK(v.value == Ordinal::finite(n));
    }
    auto gen = canonical_o_generator();
    std::vector<std::pair<Nat, OCert>> samples;
    for (std::size_t k = 0; k < 3; ++k) samples.push_back({k, succ_chain(k)});
    auto omega = o_value(reg, OCert::lim(gen, samples, 1000));
    CHECK(omega.exact);
    CHECK(omega.value == Ordinal::parse("w"));

    // A lie about phi_e(1) is caught.
    std::vector<std::pair<Nat, OCert>> wrong{{1, succ_chain(3)}};
    CHECK_THROWS_AS(o_value(reg, OCert::lim(gen, wrong, 1000)), PreconditionError);

    // Other programs give a certified lower bound.
    auto constant = encode(Descriptor::native("const", {Descriptor::lit(1)}));
    auto bound = o_value(reg, OCert::lim(constant, {{0, succ_chain(1)}}, 100));
    CHECK_FALSE(bound.exact);
    CHECK(bound.value == Ordinal::finite(1));
  }

  TEST_CASE("basic axioms") {
    auto items = basic_o_axioms(4).take(40);
    REQUIRE(!items.empty());
    CHECK(items.front().sentence == P("O(0)"));
    for (const auto& a : items) {
      CHECK(free_vars(a.sentence).empty());
      CHECK(is_basic_o_axiom(a.sentence) == Recognition::Yes);
    }
    CHECK(o_succ_axiom(3) == P("O(3) -> O(8)"));
    CHECK(is_basic_o_axiom(P("O(S(0))")) == Recognition::No);
    CHECK(is_basic_o_axiom(o_limit_axiom(5, OVariant::WSubset)) == Recognition::Yes);
    CHECK(o_limit_axiom(5) != o_limit_axiom(5, OVariant::WSubset));
  }

  TEST_CASE("session table") {
    Registry reg;
    OTable table(reg);
    table.insert(succ_chain(3));
    CHECK(table.size() == 1);
    CHECK(table.lookup(Term::num(4)) == IntendedVerdict::True);
    CHECK(table.lookup(parse_term("S(S(S(S(0))))")) == IntendedVerdict::True);
    CHECK(table.lookup(Term::num(3)) == IntendedVerdict::Unknown);
    auto gen = canonical_o_generator();
    CHECK_THROWS_AS(table.insert(OCert::lim(gen, {{1, succ_chain(3)}}, 1000)), PreconditionError);
  }

  TEST_CASE("norm lower bound") {
    Registry reg;
    auto theory = [] { return basic_o_axioms(4); };
    auto est = theory_norm_lb(reg, theory, 4096);
    REQUIRE(!est.basis.empty());
    CHECK(ord_cmp(est.lower, Ordinal::finite(1)) != Cmp::LT);
    for (const auto& b : est.basis) CHECK(check_certificate(b.proof));
    auto none = theory_norm_lb(reg, [] { return AxiomStream(); }, 500);
    CHECK(none.basis.empty());
    CHECK(none.lower == Ordinal::finite(0));
  }

  TEST_CASE("descent on the toy configuration") {
    Registry reg;
    auto fam = make_descent_family(toy_descent_spec(), 0, 1, reg);
    auto result = descent_check(fam, reg, 4096);
    REQUIRE(result.confirmed());
    std::string why;
    CHECK_MESSAGE(check_descent_evidence(fam, reg, *result.evidence, &why), why);
    CHECK(result.evidence->norm_ordered);

    auto tampered = *result.evidence;
    tampered.witness = 5;
    CHECK_FALSE(check_descent_evidence(fam, reg, tampered));

    CHECK_FALSE(descent_check(fam, reg, 0).confirmed());
    CHECK_THROWS_AS(make_descent_family(toy_descent_spec(), 1, 0, reg), PreconditionError);
  }

  TEST_CASE("descending chains") {
    Registry reg;
    auto succ = OrderSpec::programmatic(encode(Descriptor::native("is-successor")), reg, 100);
    auto found = wf_check(succ, 5, 10);
    REQUIRE(found.chain.has_value());
    CHECK(found.chain->size() == 5);
    for (std::size_t k = 0; k + 1 < found.chain->size(); ++k)
      CHECK(succ.precedes((*found.chain)[k + 1], (*found.chain)[k]));
    CHECK_FALSE(wf_check(OrderSpec::explicit_edges({{1, 0}}), 3, 10).chain.has_value());
    CHECK(wf_check(OrderSpec::explicit_edges({{1, 0}}), 2, 10).chain.has_value());
  }
}
