#include <cctype>
#include <limits>

#include "stratalab/errors.hpp"
#include "stratalab/formula.hpp"

namespace stratalab {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view text, Dialect dialect) : s_(text), dialect_(dialect) {}

  Formula formula() {
    Formula f = parse_iff();
    finish();
    return f;
  }

  Term term() {
    Term t = parse_term();
    finish();
    return t;
  }

 private:
  void finish() {
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(pos_, "unexpected '" + std::string(s_.substr(pos_, 16)) + "'");
  }

  // ------------------------------------------------------------ lexing helpers
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool starts(std::string_view tok) {
    skip_ws();
    return s_.substr(pos_, tok.size()) == tok;
  }
  bool accept(std::string_view tok) {
    if (!starts(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  bool accept_word(std::string_view word) {
    if (!starts(word)) return false;
    std::size_t end = pos_ + word.size();
    if (end < s_.size() && ident_char(s_[end])) return false;
    pos_ = end;
    return true;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) throw ParseError(pos_, "expected '" + std::string(tok) + "'");
  }
  std::uint64_t natural() {
    skip_ws();
    std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      unsigned d = static_cast<unsigned>(s_[pos_] - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10) throw ParseError(start, "number too large");
      v = v * 10 + d;
      ++pos_;
    }
    if (start == pos_) throw ParseError(start, "expected number");
    return v;
  }
  void require_oext(std::size_t at, const char* what) {
    if (dialect_ != Dialect::OExt) throw ParseError(at, std::string(what) + " requires the o-ext dialect");
  }

  // ------------------------------------------------------------ formulas
  Formula parse_iff() {
    Formula l = parse_imp();
    if (accept("<->")) return Formula::iff(l, parse_iff());
    return l;
  }
  Formula parse_imp() {
    Formula l = parse_or();
    if (accept("->")) return Formula::implies(l, parse_imp());
    return l;
  }
  Formula parse_or() {
    Formula l = parse_and();
    while (accept("|")) l = Formula::disj(l, parse_and());
    return l;
  }
  Formula parse_and() {
    Formula l = parse_unary();
    while (accept("&")) l = Formula::conj(l, parse_unary());
    return l;
  }

  Var bound_var() {
    skip_ws();
    std::size_t at = pos_;
    Term t = parse_term();
    if (t.kind() != TermKind::Var) throw ParseError(at, "expected a variable");
    return t.var();
  }

  Formula parse_unary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    if (accept("~")) return Formula::negation(parse_unary());
    if (accept_word("forall")) {
      Var v = bound_var();
      expect(".");
      return Formula::forall(v, parse_unary());
    }
    if (accept_word("exists")) {
      Var v = bound_var();
      expect(".");
      return Formula::exists(v, parse_unary());
    }
    if (accept("K[")) {
      std::uint64_t i = natural();
      expect("]");
      OperatorId k = OperatorId::plain(i);
      std::size_t at = pos_;
      if (accept("^{")) {
        if (dialect_ == Dialect::Plain) throw ParseError(at, "superscripts are not allowed in the plain dialect");
        std::size_t close = s_.find('}', pos_);
        if (close == std::string_view::npos) throw ParseError(at, "unterminated superscript");
        try {
          k = OperatorId::strat(Ordinal::parse(s_.substr(pos_, close - pos_)), i);
        } catch (const ParseError& e) {
          throw ParseError(pos_ + e.position(), e.reason());
        }
        pos_ = close + 1;
      }
      return Formula::op(k, parse_unary());
    }
    if (starts("(") && paren_holds_formula()) {
      ++pos_;
      Formula f = parse_iff();
      expect(")");
      return f;
    }
    return parse_atom();
  }

  // At '(' decide whether the group is a formula or a term by looking for formula-only tokens
  // at the group's own nesting level.
  bool paren_holds_formula() {
    std::size_t i = pos_ + 1;
    int depth = 1;
    while (i < s_.size()) {
      char c = s_[i];
      if (c == '(') {
        ++depth;
      } else if (c == ')') {
        if (--depth == 0) return false;
      } else if (depth == 1) {
        if (c == '=' || c == '~' || c == '&' || c == '|') return true;
        if (c == '-' && i + 1 < s_.size() && s_[i + 1] == '>') return true;
        if (c == '[' && i > 0 && s_[i - 1] == 'K') return true;
        if (ident_char(c) && (i == 0 || !ident_char(s_[i - 1]))) {
          std::size_t j = i;
          while (j < s_.size() && ident_char(s_[j])) ++j;
          std::string_view word = s_.substr(i, j - i);
          if (word == "in" || word == "forall" || word == "exists") return true;
          if ((word == "O" || word == "Phi") && j < s_.size() && s_[j] == '(') return true;
          i = j;
          continue;
        }
      }
      ++i;
    }
    return false;
  }

  Formula parse_atom() {
    skip_ws();
    std::size_t at = pos_;
    if (accept("O(")) {
      require_oext(at, "O atoms");
      Term t = parse_term();
      expect(")");
      return Formula::o_atom(t);
    }
    if (accept("Phi(")) {
      require_oext(at, "Phi atoms");
      Term e = parse_term();
      expect(",");
      Term x = parse_term();
      expect(",");
      Term y = parse_term();
      expect(")");
      return Formula::phi_atom(e, x, y);
    }
    Term l = parse_term();
    if (accept("=")) return Formula::eq(l, parse_term());
    if (accept_word("in")) {
      expect("W[");
      Term e = parse_term();
      expect("]");
      return Formula::in_w(l, e);
    }
    throw ParseError(pos_, "expected '=' or 'in'");
  }

  // ------------------------------------------------------------ terms
  // Infix sugar: * binds tighter than +, both associate to the left.
  Term parse_term() {
    Term t = parse_product();
    while (accept("+")) t = Term::plus(t, parse_product());
    return t;
  }

  Term parse_product() {
    Term t = parse_primary();
    while (accept("*")) t = Term::times(t, parse_primary());
    return t;
  }

  Term parse_primary() {
    skip_ws();
    std::size_t at = pos_;
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Term t = parse_term();
      expect(")");
      return t;
    }
    if (c == '<') {
      ++pos_;
      Term a = parse_term();
      expect(",");
      Term b = parse_term();
      expect(",");
      Term d = parse_term();
      expect(">");
      return Term::triple(a, b, d);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return numeral(*parse_decimal(s_.substr(start, pos_ - start)));
    }
    if (ident_char(c)) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
      std::string_view word = s_.substr(start, pos_ - start);
      if (word == "S" && accept("(")) {
        Term t = parse_term();
        expect(")");
        return Term::succ(t);
      }
      if ((word == "pow2" || word == "lim") && accept("(")) {
        require_oext(at, word == "pow2" ? "pow2" : "lim");
        Term t = parse_term();
        expect(")");
        return word == "pow2" ? Term::pow2(t) : Term::lim(t);
      }
      if (word.size() >= 2 && word[0] == 'v') {
        bool digits = true;
        for (char d : word.substr(1)) digits = digits && std::isdigit(static_cast<unsigned char>(d));
        if (digits) {
          auto n = parse_decimal(word.substr(1));
          if (!n || *n > std::numeric_limits<std::uint32_t>::max()) throw ParseError(at, "variable index too large");
          return Term::var(Var{n->convert_to<std::uint32_t>()});
        }
      }
      if (word == "x") return Term::var(Var{0});
      if (word == "y") return Term::var(Var{1});
      if (word == "z") return Term::var(Var{2});
      if (word == "u") return Term::var(Var{3});
      throw ParseError(at, "unknown identifier '" + std::string(word) + "'");
    }
    throw ParseError(at, std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  Dialect dialect_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text, Dialect dialect) { return Parser(text, dialect).formula(); }
Term parse_term(std::string_view text, Dialect dialect) { return Parser(text, dialect).term(); }

}  // namespace stratalab
