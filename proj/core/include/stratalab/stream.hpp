#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stratalab/formula.hpp"

namespace stratalab {

// A sentence together with the block or closure step that produced it.
struct Axiom {
  Formula sentence;
  std::string provenance;
};

// Single-consumer lazy sequence of axioms. Exhaustion is signalled by nullopt and is final.
class AxiomStream {
 public:
  using Pull = std::function<std::optional<Axiom>()>;

  AxiomStream() : pull_([] { return std::optional<Axiom>(); }) {}
  explicit AxiomStream(Pull pull) : pull_(std::move(pull)) {}

  static AxiomStream from(std::vector<Axiom> items);
  static AxiomStream from_sentences(const std::vector<Formula>& items, const std::string& provenance);

  std::optional<Axiom> next() {
    if (done_) return std::nullopt;
    auto a = pull_();
    if (!a) done_ = true;
    return a;
  }

  // Drains at most n items.
  std::vector<Axiom> take(std::size_t n);

  AxiomStream filter(std::function<bool(const Axiom&)> keep) &&;
  AxiomStream map(std::function<Axiom(const Axiom&)> f) &&;

 private:
  Pull pull_;
  bool done_ = false;
};

}  // namespace stratalab
