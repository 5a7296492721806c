#pragma once

#include <cstddef>
#include <optional>

#include "stratalab/certificate.hpp"

namespace stratalab::detail {

struct Refutation {
  std::optional<Derivation> derivation;  // closed, ground
  std::size_t expansions = 0;
};

// Free-variable tableau for ~root with iterative deepening on quantifier instances per branch.
// A budget unit is one node added to the tree, counted across all deepening rounds.
Refutation refute(const fol::Formula& root, std::size_t budget);

}  // namespace stratalab::detail
