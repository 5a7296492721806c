#include <benchmark/benchmark.h>

#include <vector>

#include "stratalab/computability.hpp"
#include "stratalab/entailment.hpp"
#include "stratalab/formula_gen.hpp"
#include "stratalab/stratification.hpp"

using namespace stratalab;

namespace {

std::vector<Formula> sample(std::size_t n, unsigned depth) {
  FormulaGen gen(GenConfig{.max_depth = depth}, 7);
  std::vector<Formula> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(gen.formula());
  return out;
}

void BM_Godel(benchmark::State& state) {
  auto pool = sample(256, static_cast<unsigned>(state.range(0)));
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(godel(pool[k++ % pool.size()]));
}
BENCHMARK(BM_Godel)->Arg(2)->Arg(4)->Arg(6);

void BM_Veristratify(benchmark::State& state) {
  auto pool = sample(256, static_cast<unsigned>(state.range(0)));
  auto veri = Stratifier::veristratifier(1);
  std::size_t k = 0;
  for (auto _ : state) {
    auto g = apply_stratifier(veri, pool[k++ % pool.size()]);
    benchmark::DoNotOptimize(is_i_stratified(g, 1));
  }
}
BENCHMARK(BM_Veristratify)->Arg(2)->Arg(4)->Arg(6);

// Deduction chain of length n: the prover must find n modus ponens steps.
void BM_ProveChain(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Formula> axioms{parse_formula("K[1](0=0)")};
  for (std::size_t k = 0; k < n; ++k)
    axioms.push_back(parse_formula(("K[1](" + std::to_string(k) + "=" + std::to_string(k) + ") -> K[1](" +
                                    std::to_string(k + 1) + "=" + std::to_string(k + 1) + ")")
                                       .c_str()));
  auto goal = parse_formula(("K[1](" + std::to_string(n) + "=" + std::to_string(n) + ")").c_str());
  for (auto _ : state) {
    auto v = entails(axioms, goal, 100000);
    if (!v.proved()) state.SkipWithError("chain not proved");
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_ProveChain)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_CheckCertificate(benchmark::State& state) {
  auto v = prove_valid(parse_formula("(x=0 -> y=0) -> (y=0 -> z=0) -> x=0 -> z=0"), 100000);
  if (!v.proved()) {
    state.SkipWithError("not proved");
    return;
  }
  for (auto _ : state) benchmark::DoNotOptimize(check_certificate(*v.certificate));
}
BENCHMARK(BM_CheckCertificate);

void BM_WeEnumerate(benchmark::State& state) {
  Registry reg;
  auto e = encode(Descriptor::native("halt-below", {Descriptor::lit(50)}));
  for (auto _ : state) benchmark::DoNotOptimize(we_enumerate(reg, e, static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(BM_WeEnumerate)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
