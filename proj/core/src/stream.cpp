#include "stratalab/stream.hpp"

namespace stratalab {

AxiomStream AxiomStream::from(std::vector<Axiom> items) {
  auto data = std::make_shared<std::vector<Axiom>>(std::move(items));
  auto pos = std::make_shared<std::size_t>(0);
  return AxiomStream([data, pos]() -> std::optional<Axiom> {
    if (*pos >= data->size()) return std::nullopt;
    return (*data)[(*pos)++];
  });
}

AxiomStream AxiomStream::from_sentences(const std::vector<Formula>& items, const std::string& provenance) {
  std::vector<Axiom> out;
  out.reserve(items.size());
  for (const auto& f : items) out.push_back(Axiom{f, provenance});
  return from(std::move(out));
}

std::vector<Axiom> AxiomStream::take(std::size_t n) {
  std::vector<Axiom> out;
  while (out.size() < n) {
    auto a = next();
    if (!a) break;
    out.push_back(std::move(*a));
  }
  return out;
}

AxiomStream AxiomStream::filter(std::function<bool(const Axiom&)> keep) && {
  auto src = std::make_shared<AxiomStream>(std::move(*this));
  return AxiomStream([src, keep = std::move(keep)]() -> std::optional<Axiom> {
    while (auto a = src->next()) {
      if (keep(*a)) return a;
    }
    return std::nullopt;
  });
}

AxiomStream AxiomStream::map(std::function<Axiom(const Axiom&)> f) && {
  auto src = std::make_shared<AxiomStream>(std::move(*this));
  return AxiomStream([src, f = std::move(f)]() -> std::optional<Axiom> {
    auto a = src->next();
    if (!a) return std::nullopt;
    return f(*a);
  });
}

}  // namespace stratalab
