#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>

#include "stratalab/formula.hpp"
#include "stratalab/stream.hpp"

namespace stratalab::detail {

inline std::string alpha_key(const Formula& f) { return normalize_body(f).body.str(); }

// A counter-driven schema: attempt(k) proposes the k-th candidate. Gives up after `patience`
// consecutive misses so that a schema with no instances ends instead of spinning.
inline AxiomStream counter_stream(std::function<std::optional<Formula>(std::uint64_t)> attempt,
                                  std::string provenance, std::uint64_t patience = 20000) {
  struct State {
    std::uint64_t k = 0;
    std::unordered_set<std::string> seen;
  };
  auto st = std::make_shared<State>();
  return AxiomStream([st, attempt = std::move(attempt), provenance = std::move(provenance),
                      patience]() -> std::optional<Axiom> {
    for (std::uint64_t misses = 0; misses < patience; ++misses) {
      auto f = attempt(st->k++);
      if (!f) continue;
      if (!st->seen.insert(alpha_key(*f)).second) continue;
      return Axiom{*f, provenance};
    }
    return std::nullopt;
  });
}

}  // namespace stratalab::detail
