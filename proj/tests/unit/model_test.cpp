#include <doctest.h>

#include "stratalab/model_check.hpp"

using namespace stratalab;

namespace {

Formula P(const char* s) { return parse_formula(s, Dialect::OExt); }

IntendedVerdict check(const char* s, const Assignment& a = {}) {
  static Registry reg;
  IntendedStructure m;
  m.registry = &reg;
  return model_check(m, P(s), a);
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("arithmetic atoms") {
    CHECK(check("S(S(0))+S(0)=S(S(S(0)))") == IntendedVerdict::True);
    CHECK(check("S(0)*S(S(0))=0") == IntendedVerdict::False);
    CHECK(check("x=y", {{Var{0}, 4}, {Var{1}, 4}}) == IntendedVerdict::True);
    CHECK(check("x=y", {{Var{0}, 4}}) == IntendedVerdict::Unknown);
    CHECK(check("~(0=0) -> S(0)=0") == IntendedVerdict::True);
  }

  TEST_CASE("bounded quantifiers are exhaustive") {
    CHECK(check("forall x. ((exists z. x+S(z)=S(S(S(0)))) -> ~(x=S(S(S(0)))))") == IntendedVerdict::True);
    CHECK(check("forall x. ((exists z. x+S(z)=S(S(S(0)))) -> x=0)") == IntendedVerdict::False);
    // unbounded: only a counterexample settles it
    CHECK(check("forall x. x=x") == IntendedVerdict::Unknown);
    CHECK(check("forall x. x=0") == IntendedVerdict::False);
  }

  TEST_CASE("program atoms") {
    auto succ = encode(Descriptor::native("succ"));
    Assignment a{{Var{0}, succ}};
    CHECK(model_check({.registry = nullptr}, P("S(0) in W[x]"), a) == IntendedVerdict::Unknown);
    Registry reg;
    IntendedStructure m{.registry = &reg};
    CHECK(model_check(m, P("S(0) in W[x]"), a) == IntendedVerdict::True);
    CHECK(model_check(m, P("Phi(x, S(0), S(S(0)))"), a) == IntendedVerdict::True);
    CHECK(model_check(m, P("Phi(x, S(0), 0)"), a) == IntendedVerdict::False);
  }

  TEST_CASE("operator atoms consult the theory") {
    Registry reg;
    IntendedStructure m{.registry = &reg};
    m.theory = [](std::uint64_t) { return AxiomStream::from_sentences({parse_formula("forall x. ~(S(x)=0)")}, "t"); };
    CHECK(model_check(m, P("K[1] ~(S(S(0))=0)"), {}) == IntendedVerdict::True);
    CHECK(model_check(m, P("K[1] (S(0)=0)"), {}) == IntendedVerdict::Unknown);
  }

  TEST_CASE("term values and tuples") {
    CHECK(evaluate_term(parse_term("S(S(0))*(x+S(0))"), {{Var{0}, 3}}) == Nat(8));
    CHECK_FALSE(evaluate_term(parse_term("x"), {}).has_value());
    CHECK(evaluate_term(parse_term("<S(0), 0, 0>"), {}) == triple(1, 0, 0));
    for (std::size_t k = 0; k <= 5; ++k) {
      std::vector<Term> xs;
      std::vector<Nat> vals;
      Assignment s;
      for (std::size_t v = 0; v < k; ++v) {
        xs.push_back(Term::var(Var{static_cast<std::uint32_t>(v)}));
        vals.push_back(3 * v + 1);
        s[Var{static_cast<std::uint32_t>(v)}] = 3 * v + 1;
      }
      auto code = evaluate_term(tuple_term(xs), s);
      REQUIRE(code.has_value());
      CHECK(untuple(k, *code) == vals);
    }
  }

  TEST_CASE("arithmetic rendering") {
    std::map<std::uint64_t, Index> codes{{1, 77}, {2, 91}};
    auto plain = P("x=0 -> S(x)=S(0)");
    CHECK(fu_translate(plain, codes) == plain);
    auto boxed = fu_translate(P("K[1](x=y)"), codes);
    CHECK(free_vars(boxed) == std::set<Var>{Var{0}, Var{1}});
    CHECK_FALSE(contains_op(boxed));
    CHECK(boxed == Formula::in_w(Term::triple(Term::num(godel(P("x=y"))), Term::num(1),
                                              Term::triple(Term::var(Var{0}), Term::var(Var{1}), Term::zero())),
                                 Term::num(77)));
    auto sentence = fu_translate(P("K[2](0=0)"), codes);
    CHECK(sentence == Formula::in_w(Term::triple(Term::num(godel(P("0=0"))), Term::num(2), Term::zero()),
                                    Term::num(91)));
    CHECK_THROWS_AS(fu_translate(P("K[3](0=0)"), codes), PreconditionError);
    CHECK_THROWS_AS(fu_translate(P("K[1]^{w}(0=0)"), codes), PreconditionError);
  }
}
