#include <doctest.h>

#include <algorithm>

#include "generators.hpp"
#include "stratalab/entailment.hpp"
#include "two_point.hpp"

using namespace stratalab;
using namespace stratalab::testgen;

namespace {

GenConfig stratified_config() {
  GenConfig c = plain_config(3);
  c.op_indices = {1, 2};
  return c;
}

// The problem with every formula veristratified on index 1.
ProofProblem stratified(const ProofProblem& p) {
  auto veri = Stratifier::veristratifier(1);
  ProofProblem out{{}, apply_stratifier(veri, p.goal)};
  for (const auto& a : p.axioms) out.axioms.push_back(apply_stratifier(veri, a));
  return out;
}

fol::Formula chain_of(const ProofCertificate& c) { return certificate_root(c.axioms_used, c.goal).sub(0); }

}  // namespace

TEST_SUITE("entailment") {
  TEST_CASE("two-point operator tables obey the base-logic laws") {
    FormulaGen gen(GenConfig{.max_depth = 3, .variables = 3, .op_indices = {1}}, 30);
    const Var x{0}, y{1};
    for (int k = 0; k < 400; ++k) {
      auto phi = gen.formula();
      auto box = Formula::op(OperatorId::plain(1), phi);
      TwoPoint m(k);
      for (int mask = 0; mask < 8; ++mask) {
        std::map<std::uint32_t, int> env{{0, mask & 1}, {1, (mask >> 1) & 1}, {2, (mask >> 2) & 1}};
        // renaming bound variables
        auto variant = alpha_variant(box);
        CHECK(m.holds(fol::reduce(box), env) == m.holds(fol::reduce(variant), env));
        // substituting y for x against assigning s(y) to x
        auto moved = Formula::op(OperatorId::plain(1), substitute(phi, x, Term::var(y), true));
        auto shifted = env;
        shifted[0] = env[1];
        CHECK(m.holds(fol::reduce(moved), env) == m.holds(fol::reduce(box), shifted));
        // variables outside FV(phi)
        if (!free_vars(phi).count(Var{2})) {
          auto other = env;
          other[2] = 1 - env[2];
          CHECK(m.holds(fol::reduce(box), env) == m.holds(fol::reduce(box), other));
        }
      }
    }
  }

  TEST_CASE("proved certificates check and survive two-point structures") {
    FormulaGen gen(stratified_config(), 31);
    int proved = 0;
    for (int k = 0; k < 150; ++k) {
      auto p = proof_problem(gen);
      auto v = entails(p.axioms, p.goal, 3000);
      if (!v.proved()) continue;
      ++proved;
      CHECK(check_certificate(*v.certificate));
      auto chain = chain_of(*v.certificate);
      for (std::uint64_t seed = 0; seed < 60; ++seed) CHECK(TwoPoint(seed * 7919 + k).valid(chain));
    }
    CHECK(proved > 100);
  }

  // The certificate for A is a certificate for A u B as it stands. A fresh search over A u B
  // may find a different proof, since the round that exhausted A now sees B.
  TEST_CASE("adding axioms keeps the certificate valid") {
    FormulaGen gen(stratified_config(), 32);
    for (int k = 0; k < 60; ++k) {
      auto p = proof_problem(gen);
      auto v = entails(p.axioms, p.goal, 3000);
      if (!v.proved()) continue;
      auto more = p.axioms;
      more.push_back(universal_closure(gen.formula(2)));
      for (const auto& a : v.certificate->axioms_used)
        CHECK(std::find(more.begin(), more.end(), a) != more.end());
      CHECK(check_certificate(*v.certificate));
      auto w = entails(more, p.goal, 6000);
      REQUIRE(w.proved());
      CHECK(check_certificate(*w.certificate));
    }
  }

  TEST_CASE("erasure and order-preserving maps transfer certificates") {
    FormulaGen gen(stratified_config(), 33);
    std::mt19937_64 rng(33);
    int checked = 0;
    for (int k = 0; k < 120; ++k) {
      auto p = stratified(proof_problem(gen));
      auto v = entails(p.axioms, p.goal, 3000);
      if (!v.proved()) continue;
      ++checked;
      const auto& cert = *v.certificate;
      auto erased = erase_certificate(cert);
      CHECK(erased.goal == erase(cert.goal));
      CHECK(check_certificate(erased));

      std::set<Ordinal> on = superscripts(cert.goal);
      for (const auto& a : cert.axioms_used) for (const auto& o : superscripts(a)) on.insert(o);
      auto h = ordmap_on(rng, {on.begin(), on.end()});
      auto mapped = map_certificate(h, cert);
      CHECK(mapped.goal == apply_ordmap(h, cert.goal));
      std::string why;
      CHECK_MESSAGE(check_certificate(mapped, &why), why);
    }
    CHECK(checked > 60);
  }

  TEST_CASE("search is deterministic") {
    FormulaGen gen(stratified_config(), 34);
    for (int k = 0; k < 40; ++k) {
      auto p = proof_problem(gen);
      auto a = entails(p.axioms, p.goal, 2000);
      auto b = entails(p.axioms, p.goal, 2000);
      CHECK(a.proved() == b.proved());
      CHECK(a.expansions == b.expansions);
      if (a.proved()) CHECK(certificate_to_json(*a.certificate) == certificate_to_json(*b.certificate));
    }
  }
}
