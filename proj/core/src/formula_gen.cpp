#include "stratalab/formula_gen.hpp"

namespace stratalab {

Term FormulaGen::term(unsigned depth) {
  std::uint64_t leaves = config_.variables > 0 ? 2 : 1;
  std::uint64_t choices = depth == 0 ? leaves : leaves + (config_.o_vocabulary ? 6 : 4);
  switch (below(choices)) {
    case 0:
      return numeral(below(config_.max_numeral + 1));
    case 1:
      if (config_.variables > 0) return Term::var(Var{static_cast<std::uint32_t>(below(config_.variables))});
      [[fallthrough]];
    default:
      break;
  }
  switch (below(config_.o_vocabulary ? 6 : 4)) {
    case 0:
      return Term::succ(term(depth - 1));
    case 1:
      return Term::plus(term(depth - 1), term(depth - 1));
    case 2:
      return Term::times(term(depth - 1), term(depth - 1));
    case 3:
      return Term::triple(term(depth - 1), term(depth - 1), term(depth - 1));
    case 4:
      return Term::pow2(term(depth - 1));
    default:
      return Term::lim(term(depth - 1));
  }
}

Formula FormulaGen::atom() {
  switch (below(config_.o_vocabulary ? 4 : 2)) {
    case 0:
      return Formula::eq(term(2), term(2));
    case 1:
      return Formula::in_w(term(1), term(1));
    case 2:
      return Formula::o_atom(term(1));
    default:
      return Formula::phi_atom(term(1), term(1), term(1));
  }
}

Formula FormulaGen::formula(unsigned depth) {
  if (depth == 0) return atom();
  switch (below(6)) {
    case 0:
      return atom();
    case 1:
      return Formula::negation(formula(depth - 1));
    case 2:
    case 3:
      return Formula::implies(formula(depth - 1), formula(depth - 1));
    case 4: {
      std::uint32_t span = std::max<std::uint32_t>(config_.variables, 1);
      return Formula::forall(Var{static_cast<std::uint32_t>(below(span))}, formula(depth - 1));
    }
    default: {
      if (config_.op_indices.empty()) return Formula::negation(formula(depth - 1));
      std::uint64_t i = config_.op_indices[below(config_.op_indices.size())];
      OperatorId k = OperatorId::plain(i);
      if (!config_.superscripts.empty() && below(2) == 0) {
        k = OperatorId::strat(config_.superscripts[below(config_.superscripts.size())], i);
      }
      return Formula::op(k, formula(depth - 1));
    }
  }
}

}  // namespace stratalab
