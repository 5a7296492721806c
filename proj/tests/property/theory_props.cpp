#include <doctest.h>

#include "stratalab/kleene_o.hpp"
#include "stratalab/model_check.hpp"
#include "stratalab/theory.hpp"

using namespace stratalab;

namespace {

BlockContext context() {
  BlockContext ctx;
  ctx.indices = {0, 1};
  ctx.o_vocabulary = true;
  return ctx;
}

}  // namespace

TEST_SUITE("theory") {
  TEST_CASE("generated block instances are never rejected") {
    auto ctx = context();
    auto order = OrderSpec::explicit_edges({{1, 0}});
    ctx.order = &order;
    for (auto kind : {BlockKind::JDeduction, BlockKind::AssignedValidity, BlockKind::IValidity,
                      BlockKind::IIntrospection, BlockKind::PaAxioms, BlockKind::JSmt, BlockKind::BasicOAxioms}) {
      BlockSpec b{kind, 0, kind == BlockKind::IIntrospection ? 0u : 1u};
      for (const auto& a : block_instances(b, ctx).take(40))
        CHECK_MESSAGE(is_block_instance(a.sentence, b, ctx) != Recognition::No, (to_string(kind) + " " + a.sentence.str()));
    }
    auto strat = context();
    strat.stratified = true;
    for (auto kind : {BlockKind::IStratideduction, BlockKind::IAssignedStrativalidity, BlockKind::IStrativalidity,
                      BlockKind::IStratrospection, BlockKind::IStratiSmt, BlockKind::ICollapse}) {
      BlockSpec b{kind, 0, 0};
      for (const auto& a : block_instances(b, strat).take(30)) {
        CHECK(is_i_stratified(a.sentence, 0));
        CHECK_MESSAGE(is_block_instance(a.sentence, b, strat) != Recognition::No, to_string(kind));
      }
    }
  }

  TEST_CASE("enumerations are duplicate-free") {
    auto ctx = context();
    for (auto kind : {BlockKind::JDeduction, BlockKind::PaAxioms, BlockKind::AssignedValidity}) {
      auto items = block_instances(BlockSpec{kind, 0, 0}, ctx).take(80);
      for (std::size_t a = 0; a < items.size(); ++a)
        for (std::size_t b = a + 1; b < items.size(); ++b) CHECK_FALSE(alpha_equal(items[a].sentence, items[b].sentence));
    }
  }

  TEST_CASE("family json is canonical") {
    FamilySpec cfg;
    cfg.order = OrderSpec::explicit_edges({{1, 0}, {2, 1}});
    cfg.indices = {0, 1, 2};
    cfg.mode = FamilyMode::SelfTruth;
    cfg.blocks[0] = {BlockSpec{BlockKind::PaAxioms, 0, 0}, BlockSpec{BlockKind::JDeduction, 0, 1}};
    cfg.blocks[2] = {BlockSpec{BlockKind::ModifiedJDeduction, 2, 0}};
    cfg.budgets.sample = 9;
    auto text = family_spec_to_json(cfg);
    CHECK(family_spec_to_json(parse_family_spec(text)) == text);
  }
}

TEST_SUITE("kleene") {
  TEST_CASE("successor certificates add one") {
    Registry reg;
    for (std::size_t n = 0; n < 40; ++n) {
      auto c = succ_chain(n);
      auto v = o_value(reg, c);
      auto w = o_value(reg, OCert::succ(c));
      CHECK(w.value == successor(v.value));
    }
    std::vector<std::pair<Nat, OCert>> samples;
    for (std::size_t k = 0; k < 3; ++k) samples.push_back({k, succ_chain(k)});
    auto lim = OCert::lim(canonical_o_generator(), samples, 1000);
    for (int k = 0; k < 5; ++k) {
      CHECK(o_value(reg, OCert::succ(lim)).value == successor(o_value(reg, lim).value));
      lim = OCert::succ(lim);
    }
  }

  TEST_CASE("norm lower bounds grow with the budget") {
    Registry reg;
    auto theory = [] { return basic_o_axioms(6); };
    Ordinal last = Ordinal::finite(0);
    for (std::size_t budget : {64, 512, 4096}) {
      auto est = theory_norm_lb(reg, theory, budget);
      CHECK(ord_cmp(last, est.lower) != Cmp::GT);
      for (const auto& b : est.basis) CHECK(check_certificate(b.proof));
      last = est.lower;
    }
  }

  TEST_CASE("basic O axioms are never false") {
    Registry reg;
    OTable table(reg);
    for (std::size_t n = 0; n <= 5; ++n) table.insert(succ_chain(n));
    IntendedStructure m{.registry = &reg};
    m.o_atom = [&table](const Term& t) { return table.lookup(t); };
    int true_count = 0;
    for (auto variant : {OVariant::Standard, OVariant::WSubset})
      for (const auto& a : basic_o_axioms(8, variant).take(40)) {
        auto v = model_check(m, a.sentence, {});
        CHECK(v != IntendedVerdict::False);
        true_count += v == IntendedVerdict::True;
      }
    CHECK(true_count > 5);
  }
}
