#include <doctest.h>

#include "stratalab/entailment.hpp"
#include "stratalab/stratification.hpp"

using namespace stratalab;

namespace {

Formula P(const char* s) { return parse_formula(s); }
Ordinal O(const char* s) { return Ordinal::parse(s); }

Nat godel_oracle(const std::string& printed) {
  Nat n = 1;
  for (unsigned char c : printed) n = n * 256 + c;
  return n;
}

ProofCertificate proved(const std::vector<Formula>& axioms, const Formula& goal, std::size_t budget = 4000) {
  auto v = entails(axioms, goal, budget);
  REQUIRE(v.proved());
  return *v.certificate;
}

}  // namespace

TEST_SUITE("entailment") {
  TEST_CASE("reduction to first-order atoms") {
    auto r = reduce_to_fol(P("K[1](x=0)"));
    REQUIRE(r.kind() == fol::FormulaKind::Atom);
    CHECK(r.pred().kind == fol::Predicate::Kind::Op);
    CHECK(r.pred().code == godel_oracle("(v0=0)"));
    CHECK(r.args() == std::vector<fol::Term>{fol::Term::var(0)});
    CHECK(reduce_to_fol(P("K[1] forall y. y=x")) == reduce_to_fol(P("K[1] forall z. z=x")));
    CHECK(reduce_to_fol(P("x=0")).pred().kind == fol::Predicate::Kind::Eq);
    // renaming moves the argument, not the code
    auto a = reduce_to_fol(P("K[2](x=y)"));
    auto b = reduce_to_fol(P("K[2](y=u)"));
    CHECK(a.pred() == b.pred());
    CHECK(a.args() != b.args());
  }

  TEST_CASE("validity") {
    CHECK(prove_valid(P("K[2](x=0) -> K[2](x=0)"), 500).proved());
    CHECK(prove_valid(P("forall x. x=x"), 500).proved());
    CHECK(prove_valid(P("x=y -> S(x)=S(y)"), 2000).proved());
    CHECK_FALSE(prove_valid(P("K[1](x=0 -> y=0) -> K[1](x=0) -> K[1](y=0)"), 3000).proved());
    CHECK_FALSE(prove_valid(P("K[1](0=0)"), 3000).proved());
  }

  TEST_CASE("entailment from axioms") {
    auto phi = P("forall x. ~(S(x)=0)");
    auto one = proved({phi}, phi);
    CHECK(one.axioms_used == std::vector<Formula>{phi});
    auto mp = proved({P("0=0 -> K[1](0=0)"), P("0=0")}, P("K[1](0=0)"));
    CHECK(mp.axioms_used.size() <= 2);
    CHECK(check_certificate(mp));
    CHECK_FALSE(entails(std::vector<Formula>{}, P("K[1](0=0)"), 3000).proved());
  }

  TEST_CASE("certificates are independent of the search") {
    auto cert = proved({P("forall x. (K[1](x=x) -> x=0)"), P("forall y. K[1](y=y)")}, P("S(0)=0"));
    std::string why;
    CHECK(check_certificate(cert, &why));

    auto tampered = cert;
    tampered.goal = P("0=S(0)");
    CHECK_FALSE(check_certificate(tampered, &why));

    auto dropped = cert;
    REQUIRE(dropped.derivation.nodes.size() > 2);
    dropped.derivation.nodes.pop_back();
    CHECK_FALSE(check_certificate(dropped));

    auto round = certificate_from_json(certificate_to_json(cert));
    CHECK(check_certificate(round));
    CHECK(certificate_to_json(round) == certificate_to_json(cert));
  }

  TEST_CASE("determinism") {
    auto axioms = std::vector<Formula>{P("forall x. forall y. (x=y -> y=x)"), P("S(0)=0")};
    auto a = entails(axioms, P("0=S(0)"), 3000);
    auto b = entails(axioms, P("0=S(0)"), 3000);
    REQUIRE(a.proved());
    CHECK(a.expansions == b.expansions);
    CHECK(certificate_to_json(*a.certificate) == certificate_to_json(*b.certificate));
  }

  TEST_CASE("erasure and covering transfer") {
    auto cert = proved({P("K[1]^{e0*2}(0=0) -> K[1]^{e0*1}(0=0)"), P("K[1]^{e0*2}(0=0)")}, P("K[1]^{e0*1}(0=0)"));
    auto erased = erase_certificate(cert);
    CHECK(erased.goal == P("K[1](0=0)"));
    CHECK(check_certificate(erased));
    OrdMap h({{O("e0*1"), O("e0*4")}, {O("e0*2"), O("e0*7")}});
    auto mapped = map_certificate(h, cert);
    CHECK(mapped.goal == P("K[1]^{e0*4}(0=0)"));
    CHECK(check_certificate(mapped));
  }

  TEST_CASE("collapse") {
    auto low = proved({P("K[1]^{e0*1}(0=0)")}, P("K[1]^{e0*1}(0=0)"));
    auto same = collapse_certificate(low, 2, 1);
    REQUIRE(same.has_value());
    CHECK(certificate_to_json(*same) == certificate_to_json(low));

    // Axioms at e0*3 and e0*4 move below e0*3 while the goal stays put.
    auto high = proved({P("K[1]^{e0*3}(0=0) -> K[1]^{e0*1}(0=0)"), P("K[1]^{e0*3}(0=0)")}, P("K[1]^{e0*1}(0=0)"));
    auto collapsed = collapse_certificate(high, 3, 1);
    REQUIRE(collapsed.has_value());
    CHECK(check_certificate(*collapsed));
    CHECK(collapsed->goal == high.goal);
    for (const auto& a : collapsed->axioms_used) CHECK(within_cut(a, O("e0*3")));

    // e0*1 <=_1 y must be copied strictly between e0*1 and e0*2: nothing certifiable.
    auto stuck = proved({P("K[1]^{e0*2}(0=0) -> K[1]^{e0*1}(0=0)"), P("K[1]^{e0*2}(0=0)")}, P("K[1]^{e0*1}(0=0)"));
    CHECK_FALSE(collapse_certificate(stuck, 2, 1).has_value());

    CHECK_THROWS_AS(collapse_certificate(stuck, 1, 1), PreconditionError);
  }

  TEST_CASE("internalization") {
    StratifiedSchemaSupply supply;
    auto sigma = P("forall x. ~(S(x)=0)");
    auto cert = proved({sigma}, sigma);
    auto inside = internalize(cert, O("e0*1"), O("e0*2"), 1, supply);
    CHECK(inside.goal == Formula::op(OperatorId::strat(O("e0*1"), 1), sigma));
    CHECK(check_certificate(inside));
    for (const auto& a : inside.axioms_used) CHECK(is_i_stratified(a, 1));

    auto valid = *prove_valid(P("0=0 -> 0=0"), 500).certificate;
    CHECK(check_certificate(internalize(valid, O("e0*1"), O("e0*2"), 1, supply)));
    CHECK_THROWS_AS(internalize(cert, O("e0*2"), O("e0*1"), 1, supply), PreconditionError);
  }

  TEST_CASE("box congruence") {
    StratifiedSchemaSupply supply;
    auto k = OperatorId::strat(O("e0*1"), 1);
    auto rho = P("forall x. ~(S(x)=0)");
    auto sigma = P("~(S(0)=0)");
    auto lemma = Formula::op(k, Formula::iff(rho, sigma));
    auto out = box_iff(proved({lemma}, lemma), O("e0*1"), 1, supply);
    CHECK(check_certificate(out));
    CHECK(out.goal == Formula::iff(Formula::op(k, rho), Formula::op(k, sigma)));

    auto variant = Formula::op(k, Formula::iff(rho, P("forall y. ~(S(y)=0)")));
    auto trivial = box_iff(proved({variant}, variant), O("e0*1"), 1, supply);
    CHECK(check_certificate(trivial));
    CHECK(trivial.axioms_used.empty());

    auto wrong = proved({P("0=0")}, P("0=0"));
    CHECK_THROWS_AS(box_iff(wrong, O("e0*1"), 1, supply), PreconditionError);
  }

  TEST_CASE("cut composition") {
    auto c1 = proved({P("0=0 -> S(0)=S(0)"), P("0=0")}, P("S(0)=S(0)"));
    auto c2 = *prove_chain({P("S(0)=S(0) -> K[1](0=0)"), P("S(0)=S(0)")}, P("K[1](0=0)"), 2000).certificate;
    auto joined = compose_cut(c1, c2);
    CHECK(check_certificate(joined));
    CHECK(joined.goal == P("K[1](0=0)"));
  }

  TEST_CASE("split_iff") {
    auto parts = split_iff(Formula::iff(P("x=0"), P("y=0")));
    REQUIRE(parts.has_value());
    CHECK(parts->first == P("x=0"));
    CHECK(parts->second == P("y=0"));
    CHECK_FALSE(split_iff(P("x=0 -> y=0")).has_value());
  }
}
