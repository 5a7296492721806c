#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stratalab/fol.hpp"

namespace stratalab::testgen {

// A structure with universe {0, 1}. Function symbols and non-equality predicates are random
// tables drawn from the seed; = is identity. An operator atom K phi[s] is a random bit of K and
// the normal form of phi with each free variable x replaced by a marker numeral for s(x). That
// table ignores non-free variables, identifies alphabetic variants, and commutes with
// substituting y for x, which is all a base-logic structure may assume of its operators.
class TwoPoint {
 public:
  explicit TwoPoint(std::uint64_t seed) : seed_(seed) {}

  int term(const fol::Term& t, const std::map<std::uint32_t, int>& env) const {
    switch (t.kind()) {
      case fol::TermKind::Var:
      case fol::TermKind::Meta:
        return env.at(t.id());
      case fol::TermKind::Num: {
        // S^n(0): on two points the orbit is periodic from step 2 with period dividing 2.
        const Nat& n = t.value();
        std::uint64_t steps = n < 2 ? static_cast<std::uint64_t>(n) : 2 + static_cast<std::uint64_t>(n % 2);
        int v = bit("0", {});
        for (std::uint64_t k = 0; k < steps; ++k) v = bit("S", {v});
        return v;
      }
      case fol::TermKind::App: {
        std::vector<int> args;
        for (const auto& a : t.args()) args.push_back(term(a, env));
        return bit(t.symbol(), args);
      }
    }
    return 0;
  }

  bool holds(const fol::Formula& f, std::map<std::uint32_t, int>& env) const {
    switch (f.kind()) {
      case fol::FormulaKind::Atom: {
        std::vector<int> args;
        for (const auto& a : f.args()) args.push_back(term(a, env));
        if (f.pred().kind == fol::Predicate::Kind::Eq) return args[0] == args[1];
        if (f.pred().kind == fol::Predicate::Kind::Op) return bit(operator_key(f.pred(), args), {}) == 1;
        return bit("P" + f.pred().name(), args) == 1;
      }
      case fol::FormulaKind::Not:
        return !holds(f.sub(0), env);
      case fol::FormulaKind::Implies:
        return !holds(f.sub(0), env) || holds(f.sub(1), env);
      case fol::FormulaKind::Forall: {
        auto v = f.bound();
        auto saved = env.find(v) == env.end() ? -1 : env[v];
        bool all = true;
        for (int d = 0; d < 2 && all; ++d) {
          env[v] = d;
          all = holds(f.sub(0), env);
        }
        if (saved < 0) env.erase(v); else env[v] = saved;
        return all;
      }
    }
    return false;
  }

  // Truth under every assignment of the free variables.
  bool valid(const fol::Formula& f) const {
    auto fv = fol::free_vars(f);
    std::vector<std::uint32_t> vars(fv.begin(), fv.end());
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << vars.size()); ++mask) {
      std::map<std::uint32_t, int> env;
      for (std::size_t k = 0; k < vars.size(); ++k) env[vars[k]] = static_cast<int>((mask >> k) & 1);
      if (!holds(f, env)) return false;
    }
    return true;
  }

 private:
  // The reduced atom's arguments are the body's free variables v0..v(m-1) in order.
  std::string operator_key(const fol::Predicate& p, const std::vector<int>& args) const {
    auto it = bodies_.find(p.code);
    if (it == bodies_.end()) it = bodies_.emplace(p.code, *ungodel(p.code)).first;
    Assignment s;
    for (std::size_t k = 0; k < args.size(); ++k) s[Var{static_cast<std::uint32_t>(k)}] = kMarker + args[k];
    return p.oper.str() + "|" + normalize_body(assign_substitute(it->second, s)).body.str();
  }

  int bit(const std::string& symbol, const std::vector<int>& args) const {
    std::uint64_t h = seed_ ^ std::hash<std::string>{}(symbol);
    for (int a : args) h = mix(h + 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(a));
    return static_cast<int>(mix(h) & 1);
  }
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kMarker = 1000003;

  std::uint64_t seed_;
  mutable std::map<Nat, Formula> bodies_;
};

}  // namespace stratalab::testgen
