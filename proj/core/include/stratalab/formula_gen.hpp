#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "stratalab/formula.hpp"

namespace stratalab {

// Random formula source for sweeps and benchmarks. Deterministic for a given seed.
struct GenConfig {
  unsigned max_depth = 4;
  std::uint32_t variables = 3;                 // draws from v0..v(variables-1)
  std::vector<std::uint64_t> op_indices{0, 1, 2};
  std::vector<Ordinal> superscripts;           // empty: plain operators only
  bool o_vocabulary = false;                   // O(t), Phi(e,x,y), pow2, lim
  unsigned max_numeral = 3;
};

class FormulaGen {
 public:
  explicit FormulaGen(GenConfig config, std::uint64_t seed = 1) : config_(std::move(config)), rng_(seed) {}

  Term term(unsigned depth);
  Formula formula() { return formula(config_.max_depth); }
  Formula formula(unsigned depth);
  Formula sentence() { return universal_closure(formula()); }

  std::mt19937_64& rng() noexcept { return rng_; }

 private:
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }
  Formula atom();

  GenConfig config_;
  std::mt19937_64 rng_;
};

}  // namespace stratalab
