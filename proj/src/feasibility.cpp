#include "tchedge/feasibility.hpp"

#include "tchedge/errors.hpp"
#include "hedge_lp.hpp"

namespace tchedge {

HedgeCheck hedging_feasible(const ScenarioTree& tree, const Claim& claim,
                            const std::vector<Rat>& v) {
  detail::HedgeLpSpec spec;
  spec.tree = &tree;
  spec.claim = &claim;
  spec.endowment = &v;
  detail::HedgeLp hedge = detail::build_hedge_lp(spec);
  hedge.problem.set_objective({}, lp::Sense::minimize);

  const lp::LpSolution solution = lp::solve_lp(hedge.problem);
  if (solution.status == lp::Status::infeasible) return {false, std::nullopt};
  if (solution.status != lp::Status::optimal)
    throw InternalError("hedging feasibility LP cannot be unbounded");

  Strategy witness = detail::extract_strategy(hedge, tree, solution);
  detail::verify_witness(tree, claim, v, witness, nullptr);
  return {true, std::move(witness)};
}

Rat min_hedging_capital(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& w) {
  if (static_cast<int>(w.size()) != tree.dimension())
    throw InputError("direction has wrong dimension");
  bool nonzero = false;
  for (const Rat& c : w) {
    if (c < 0) throw PreconditionError("direction must be componentwise non-negative");
    if (c != 0) nonzero = true;
  }
  if (!nonzero) throw PreconditionError("direction must be nonzero");

  detail::HedgeLpSpec spec;
  spec.tree = &tree;
  spec.claim = &claim;
  spec.direction = &w;
  detail::HedgeLp hedge = detail::build_hedge_lp(spec);
  hedge.problem.set_objective({{hedge.capital_var, Rat(1)}}, lp::Sense::minimize);

  const lp::LpSolution solution = lp::solve_lp(hedge.problem);
  if (solution.status == lp::Status::infeasible)
    throw InternalError("hedging capital LP infeasible; large capital always hedges");
  if (solution.status == lp::Status::unbounded)
    throw PreconditionError("hedging capital unbounded below (market admits arbitrage)");
  return solution.value;
}

}  // namespace tchedge
