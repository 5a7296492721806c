#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace stratalab {

struct CnfTerm;

// An ordinal below e0*omega: e0*k + w^(a1)*c1 + ... + w^(an)*cn with a1 > ... > an, ci >= 1,
// and every ai below e0.
class Ordinal {
 public:
  Ordinal() = default;  // zero

  static Ordinal finite(std::uint64_t n);
  static Ordinal omega_power(const Ordinal& exponent, std::uint64_t coeff = 1);
  static Ordinal eps(std::uint64_t k);  // e0*k
  // Throws PreconditionError unless the arguments already form a Cantor normal form.
  static Ordinal make(std::uint64_t eps_mult, std::vector<CnfTerm> tail);

  // Literal grammar: 0 | e0*k | w^(ord)*c | w*c | w | n, summands joined by '+' in
  // non-increasing order. Throws ParseError.
  static Ordinal parse(std::string_view text);

  std::uint64_t eps_mult() const noexcept { return eps_mult_; }
  const std::vector<CnfTerm>& tail() const noexcept { return tail_; }

  bool is_zero() const noexcept { return eps_mult_ == 0 && tail_.empty(); }
  bool is_eps_multiple() const noexcept { return tail_.empty(); }
  bool is_positive_eps_multiple() const noexcept { return tail_.empty() && eps_mult_ > 0; }
  std::optional<std::uint64_t> as_finite() const;

  // Number of symbols: k + sum(ci + size(ai)). Finitely many ordinals share each size.
  std::size_t size() const;

  std::string str() const;

  friend bool operator==(const Ordinal& a, const Ordinal& b);
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

 private:
  std::uint64_t eps_mult_ = 0;
  std::vector<CnfTerm> tail_;
};

struct CnfTerm {
  Ordinal exponent;
  std::uint64_t coeff = 1;
  friend bool operator==(const CnfTerm& a, const CnfTerm& b) {
    return a.coeff == b.coeff && a.exponent == b.exponent;
  }
};

// Least ordinal above a.
Ordinal successor(const Ordinal& a);

enum class Cmp { LT, EQ, GT };
Cmp ord_cmp(const Ordinal& a, const Ordinal& b);
const char* to_string(Cmp c);

enum class Le1Verdict { Yes, No, Unknown };
const char* to_string(Le1Verdict v);

// Extension point for a fuller decision procedure for <=_1. Answers must be sound.
class Le1Oracle {
 public:
  virtual ~Le1Oracle() = default;
  virtual Le1Verdict query(const Ordinal& a, const Ordinal& b) const = 0;
};

// Certified fragment: reflexivity, e0*m <=_1 e0*n for 1 <= m <= n, and No when b < a.
// When the fragment is silent and an oracle is supplied, the oracle decides.
Le1Verdict le1(const Ordinal& a, const Ordinal& b, const Le1Oracle* oracle = nullptr);

// Finite strictly order preserving map between ordinals.
class OrdMap {
 public:
  OrdMap() = default;
  // Throws PreconditionError if the pairs are not strictly order preserving or repeat a key.
  explicit OrdMap(std::vector<std::pair<Ordinal, Ordinal>> pairs);
  static OrdMap identity(const std::set<Ordinal>& domain);
  // Accepts any function; used to test order preservation.
  static std::optional<OrdMap> try_make(std::vector<std::pair<Ordinal, Ordinal>> pairs);

  const std::map<Ordinal, Ordinal>& pairs() const noexcept { return map_; }
  std::set<Ordinal> domain() const;
  bool contains(const Ordinal& a) const { return map_.count(a) != 0; }
  const Ordinal* find(const Ordinal& a) const;
  bool empty() const noexcept { return map_.empty(); }
  // (g . h) restricted to the points of dom(h) whose image lies in dom(g).
  OrdMap compose_after(const OrdMap& h) const;
  std::string str() const;

  friend bool operator==(const OrdMap&, const OrdMap&) = default;

 private:
  std::map<Ordinal, Ordinal> map_;
};

// Order preservation is checked first; a raw pair list may violate it.
Le1Verdict is_covering(const std::vector<std::pair<Ordinal, Ordinal>>& h,
                       const Le1Oracle* oracle = nullptr);
Le1Verdict is_covering(const OrdMap& h, const Le1Oracle* oracle = nullptr);

struct CollapseResult {
  std::set<Ordinal> collapsed;  // the image of Y
  OrdMap map;                   // defined on X u Y, identity on X
};

// Search for Y' with X < Y' < bound and X u Y' isomorphic to X u Y under (<=, <=_1), fixing X.
// Only certified (Yes/No) comparisons are used; returns nullopt when none can be certified.
std::optional<CollapseResult> pattern_collapse(const std::set<Ordinal>& x,
                                               const std::set<Ordinal>& y,
                                               const Ordinal& bound,
                                               const Le1Oracle* oracle = nullptr);

// All ordinals of size <= budget: 0, then e0*1, e0*2, ..., then the rest by (size, value).
std::vector<Ordinal> enum_ordinals(std::size_t budget);

}  // namespace stratalab

template <>
struct std::hash<stratalab::Ordinal> {
  std::size_t operator()(const stratalab::Ordinal& o) const noexcept;
};
