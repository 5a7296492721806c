#include "stratalab/ordinal.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "stratalab/errors.hpp"

namespace stratalab {

namespace {

std::strong_ordering cmp_tail(const std::vector<CnfTerm>& a, const std::vector<CnfTerm>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a[i].exponent <=> b[i].exponent; c != 0) return c;
    if (auto c = a[i].coeff <=> b[i].coeff; c != 0) return c;
  }
  return a.size() <=> b.size();
}

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view s) : s_(s) {}

  Ordinal parse_all() {
    Ordinal o = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(pos_, "unexpected text in ordinal");
    return o;
  }

  Ordinal parse_sum() {
    std::uint64_t eps = 0;
    std::vector<CnfTerm> tail;
    bool any = false;
    bool saw_zero = false;
    do {
      skip_ws();
      std::size_t at = pos_;
      if (accept("e0")) {
        std::uint64_t k = 1;
        if (accept("^")) throw ParseError(at, "ordinal out of range: must lie below e0*w");
        if (accept("*")) {
          if (accept("w") || accept("e0")) throw ParseError(at, "ordinal out of range: must lie below e0*w");
          k = parse_positive();
        }
        if (!tail.empty()) throw ParseError(at, "e0 summand after a smaller summand");
        eps += k;
      } else if (accept("w")) {
        Ordinal exponent = Ordinal::finite(1);
        if (accept("^")) {
          skip_ws();
          if (accept("(")) {
            exponent = parse_sum();
            expect(")");
          } else {
            exponent = Ordinal::finite(parse_natural());
          }
        }
        std::uint64_t c = 1;
        if (accept("*")) c = parse_positive();
        if (exponent.eps_mult() != 0) throw ParseError(at, "exponent must lie below e0");
        push(tail, exponent, c, at);
      } else if (peek_digit()) {
        std::uint64_t n = parse_natural();
        if (n == 0) {
          saw_zero = true;
        } else {
          push(tail, Ordinal(), n, at);
        }
      } else {
        throw ParseError(at, "expected ordinal summand");
      }
      any = true;
    } while (accept("+"));
    if (saw_zero && (eps != 0 || !tail.empty())) throw ParseError(pos_, "0 used as a summand");
    (void)any;
    return Ordinal::make(eps, std::move(tail));
  }

 private:
  void push(std::vector<CnfTerm>& tail, const Ordinal& e, std::uint64_t c, std::size_t at) {
    if (!tail.empty()) {
      auto order = tail.back().exponent <=> e;
      if (order == 0) {
        tail.back().coeff += c;
        return;
      }
      if (order < 0) throw ParseError(at, "summands not in Cantor normal form");
    }
    tail.push_back(CnfTerm{e, c});
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) throw ParseError(pos_, "expected '" + std::string(tok) + "'");
  }
  bool peek_digit() {
    skip_ws();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }
  std::uint64_t parse_natural() {
    skip_ws();
    std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      unsigned d = static_cast<unsigned>(s_[pos_] - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10)
        throw ParseError(start, "number too large");
      v = v * 10 + d;
      ++pos_;
    }
    if (pos_ == start) throw ParseError(start, "expected number");
    return v;
  }
  std::uint64_t parse_positive() {
    std::size_t at = pos_;
    std::uint64_t v = parse_natural();
    if (v == 0) throw ParseError(at, "coefficient must be positive");
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string term_str(const CnfTerm& t) {
  const Ordinal& e = t.exponent;
  std::string out;
  if (e.is_zero()) return std::to_string(t.coeff);
  if (e == Ordinal::finite(1)) {
    out = "w";
  } else {
    out = "w^(" + e.str() + ")";
  }
  if (t.coeff != 1) out += "*" + std::to_string(t.coeff);
  return out;
}

// All ordinals below e0 with size <= s, memoised per call tree.
class BelowE0 {
 public:
  const std::vector<Ordinal>& upto(std::size_t s) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    std::vector<Ordinal> out;
    std::vector<Ordinal> exps = s == 0 ? std::vector<Ordinal>{} : upto(s - 1);
    std::sort(exps.begin(), exps.end(), std::greater<>());
    std::vector<CnfTerm> cur;
    extend(exps, 0, s, cur, out);
    return memo_.emplace(s, std::move(out)).first->second;
  }

 private:
  void extend(const std::vector<Ordinal>& exps, std::size_t from, std::size_t left,
              std::vector<CnfTerm>& cur, std::vector<Ordinal>& out) {
    out.push_back(Ordinal::make(0, cur));
    for (std::size_t i = from; i < exps.size(); ++i) {
      std::size_t es = exps[i].size();
      for (std::uint64_t c = 1; es + c <= left; ++c) {
        cur.push_back(CnfTerm{exps[i], c});
        extend(exps, i + 1, left - es - c, cur, out);
        cur.pop_back();
      }
    }
  }
  std::map<std::size_t, std::vector<Ordinal>> memo_;
};

}  // namespace

Ordinal successor(const Ordinal& a) {
  std::vector<CnfTerm> tail = a.tail();
  if (!tail.empty() && tail.back().exponent.is_zero()) {
    tail.back().coeff += 1;
  } else {
    tail.push_back(CnfTerm{Ordinal(), 1});
  }
  return Ordinal::make(a.eps_mult(), std::move(tail));
}

Ordinal Ordinal::finite(std::uint64_t n) {
  Ordinal o;
  if (n != 0) o.tail_.push_back(CnfTerm{Ordinal(), n});
  return o;
}

Ordinal Ordinal::omega_power(const Ordinal& exponent, std::uint64_t coeff) {
  return make(0, {CnfTerm{exponent, coeff}});
}

Ordinal Ordinal::eps(std::uint64_t k) {
  Ordinal o;
  o.eps_mult_ = k;
  return o;
}

Ordinal Ordinal::make(std::uint64_t eps_mult, std::vector<CnfTerm> tail) {
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (tail[i].coeff == 0) throw PreconditionError("ordinal coefficient must be positive");
    if (tail[i].exponent.eps_mult() != 0) throw PreconditionError("ordinal exponent must lie below e0");
    if (i > 0 && !(tail[i].exponent < tail[i - 1].exponent))
      throw PreconditionError("ordinal exponents must strictly decrease");
  }
  Ordinal o;
  o.eps_mult_ = eps_mult;
  o.tail_ = std::move(tail);
  return o;
}

Ordinal Ordinal::parse(std::string_view text) { return OrdinalParser(text).parse_all(); }

std::optional<std::uint64_t> Ordinal::as_finite() const {
  if (eps_mult_ != 0) return std::nullopt;
  if (tail_.empty()) return 0;
  if (tail_.size() == 1 && tail_[0].exponent.is_zero()) return tail_[0].coeff;
  return std::nullopt;
}

std::size_t Ordinal::size() const {
  std::size_t s = eps_mult_;
  for (const auto& t : tail_) s += t.coeff + t.exponent.size();
  return s;
}

std::string Ordinal::str() const {
  if (is_zero()) return "0";
  std::string out;
  if (eps_mult_ != 0) out = "e0*" + std::to_string(eps_mult_);
  for (const auto& t : tail_) {
    if (!out.empty()) out += "+";
    out += term_str(t);
  }
  return out;
}

bool operator==(const Ordinal& a, const Ordinal& b) {
  return a.eps_mult_ == b.eps_mult_ && a.tail_ == b.tail_;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  if (auto c = a.eps_mult_ <=> b.eps_mult_; c != 0) return c;
  return cmp_tail(a.tail_, b.tail_);
}

Cmp ord_cmp(const Ordinal& a, const Ordinal& b) {
  auto c = a <=> b;
  if (c < 0) return Cmp::LT;
  if (c > 0) return Cmp::GT;
  return Cmp::EQ;
}

const char* to_string(Cmp c) {
  switch (c) {
    case Cmp::LT: return "LT";
    case Cmp::EQ: return "EQ";
    case Cmp::GT: return "GT";
  }
  return "?";
}

const char* to_string(Le1Verdict v) {
  switch (v) {
    case Le1Verdict::Yes: return "yes";
    case Le1Verdict::No: return "no";
    case Le1Verdict::Unknown: return "unknown";
  }
  return "?";
}

Le1Verdict le1(const Ordinal& a, const Ordinal& b, const Le1Oracle* oracle) {
  if (a == b) return Le1Verdict::Yes;
  if (b < a) return Le1Verdict::No;
  if (a.is_positive_eps_multiple() && b.is_positive_eps_multiple()) return Le1Verdict::Yes;
  if (oracle) return oracle->query(a, b);
  return Le1Verdict::Unknown;
}

std::optional<OrdMap> OrdMap::try_make(std::vector<std::pair<Ordinal, Ordinal>> pairs) {
  OrdMap m;
  for (auto& [k, v] : pairs) {
    if (!m.map_.emplace(k, v).second) return std::nullopt;
  }
  const Ordinal* prev = nullptr;
  for (const auto& [k, v] : m.map_) {
    if (prev && !(*prev < v)) return std::nullopt;
    prev = &v;
  }
  return m;
}

OrdMap::OrdMap(std::vector<std::pair<Ordinal, Ordinal>> pairs) {
  auto m = try_make(std::move(pairs));
  if (!m) throw PreconditionError("ordinal map is not strictly order preserving");
  map_ = std::move(m->map_);
}

OrdMap OrdMap::identity(const std::set<Ordinal>& domain) {
  OrdMap m;
  for (const auto& a : domain) m.map_.emplace(a, a);
  return m;
}

std::set<Ordinal> OrdMap::domain() const {
  std::set<Ordinal> out;
  for (const auto& kv : map_) out.insert(kv.first);
  return out;
}

const Ordinal* OrdMap::find(const Ordinal& a) const {
  auto it = map_.find(a);
  return it == map_.end() ? nullptr : &it->second;
}

OrdMap OrdMap::compose_after(const OrdMap& h) const {
  OrdMap out;
  for (const auto& [k, v] : h.map_) {
    if (const Ordinal* w = find(v)) out.map_.emplace(k, *w);
  }
  return out;
}

std::string OrdMap::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : map_) {
    if (!first) out += ", ";
    first = false;
    out += k.str() + "->" + v.str();
  }
  return out + "}";
}

Le1Verdict is_covering(const std::vector<std::pair<Ordinal, Ordinal>>& h, const Le1Oracle* oracle) {
  auto m = OrdMap::try_make(h);
  if (!m) return Le1Verdict::No;
  return is_covering(*m, oracle);
}

Le1Verdict is_covering(const OrdMap& h, const Le1Oracle* oracle) {
  bool unknown = false;
  const auto& pairs = h.pairs();
  for (auto i = pairs.begin(); i != pairs.end(); ++i) {
    for (auto j = std::next(i); j != pairs.end(); ++j) {
      // A pair the map fixes keeps whatever relation it had.
      if (i->first == i->second && j->first == j->second) continue;
      Le1Verdict src = le1(i->first, j->first, oracle);
      if (src == Le1Verdict::No) continue;
      if (src == Le1Verdict::Unknown) {
        unknown = true;
        continue;
      }
      Le1Verdict dst = le1(i->second, j->second, oracle);
      if (dst == Le1Verdict::No) return Le1Verdict::No;
      if (dst == Le1Verdict::Unknown) unknown = true;
    }
  }
  return unknown ? Le1Verdict::Unknown : Le1Verdict::Yes;
}

std::optional<CollapseResult> pattern_collapse(const std::set<Ordinal>& x, const std::set<Ordinal>& y,
                                               const Ordinal& bound, const Le1Oracle* oracle) {
  if (!bound.is_positive_eps_multiple()) throw PreconditionError("collapse bound must be e0*n with n >= 1");
  for (const auto& a : x)
    if (!(a < bound)) throw PreconditionError("collapse: X must lie below the bound");
  for (const auto& b : y)
    if (b < bound) throw PreconditionError("collapse: Y must lie at or above the bound");

  if (y.empty()) return CollapseResult{{}, OrdMap::identity(x)};

  // Only the least candidate above X and the e0-multiples below the bound can be
  // related to anything by the certified fragment.
  std::vector<Ordinal> pool;
  Ordinal floor = x.empty() ? Ordinal() : successor(*x.rbegin());
  pool.push_back(floor);
  for (std::uint64_t k = 1; k < bound.eps_mult(); ++k) {
    Ordinal e = Ordinal::eps(k);
    if (floor < e) pool.push_back(e);
  }

  std::vector<Ordinal> ys(y.begin(), y.end());
  std::vector<Ordinal> chosen;

  auto certified_same = [&](const Ordinal& a, const Ordinal& b, const Ordinal& ha, const Ordinal& hb) {
    Le1Verdict v = le1(a, b, oracle);
    Le1Verdict w = le1(ha, hb, oracle);
    return v != Le1Verdict::Unknown && w != Le1Verdict::Unknown && v == w;
  };

  std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t idx, std::size_t from) -> bool {
    if (idx == ys.size()) return true;
    for (std::size_t p = from; p < pool.size(); ++p) {
      const Ordinal& cand = pool[p];
      bool ok = true;
      for (const auto& a : x) {
        if (!certified_same(a, ys[idx], a, cand)) {
          ok = false;
          break;
        }
      }
      for (std::size_t q = 0; ok && q < idx; ++q) {
        if (!certified_same(ys[q], ys[idx], chosen[q], cand)) ok = false;
      }
      if (!ok) continue;
      chosen.push_back(cand);
      if (search(idx + 1, p + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };

  if (!search(0, 0)) return std::nullopt;
  std::vector<std::pair<Ordinal, Ordinal>> pairs;
  for (const auto& a : x) pairs.emplace_back(a, a);
  for (std::size_t q = 0; q < ys.size(); ++q) pairs.emplace_back(ys[q], chosen[q]);
  return CollapseResult{std::set<Ordinal>(chosen.begin(), chosen.end()), OrdMap(std::move(pairs))};
}

std::vector<Ordinal> enum_ordinals(std::size_t budget) {
  BelowE0 below;
  const auto& tails = below.upto(budget);
  std::vector<Ordinal> rest;
  for (std::uint64_t k = 0; k <= budget; ++k) {
    for (const auto& t : tails) {
      if (t.is_zero()) continue;
      if (k + t.size() > budget) continue;
      rest.push_back(Ordinal::make(k, t.tail()));
    }
  }
  std::sort(rest.begin(), rest.end(), [](const Ordinal& a, const Ordinal& b) {
    auto sa = a.size(), sb = b.size();
    if (sa != sb) return sa < sb;
    return a < b;
  });
  std::vector<Ordinal> out;
  out.push_back(Ordinal());
  for (std::uint64_t k = 1; k <= budget; ++k) out.push_back(Ordinal::eps(k));
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace stratalab

std::size_t std::hash<stratalab::Ordinal>::operator()(const stratalab::Ordinal& o) const noexcept {
  std::size_t h = std::hash<std::uint64_t>{}(o.eps_mult()) * 0x9e3779b97f4a7c15ULL;
  for (const auto& t : o.tail()) {
    h ^= (*this)(t.exponent) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint64_t>{}(t.coeff) + (h << 6) + (h >> 2);
  }
  return h;
}
