#include "tchedge/quantile.hpp"

#include "tchedge/errors.hpp"
#include "tchedge/feasibility.hpp"
#include "hedge_lp.hpp"

namespace tchedge {

namespace {

void require_some_admissible(const ScenarioTree& tree, const std::vector<Rat>& v) {
  if (!hedging_feasible(tree, zero_claim(tree), v).feasible)
    throw PreconditionError("endowment supports no admissible strategy");
}

std::vector<lp::Term> effectiveness_terms(const ScenarioTree& tree,
                                          const std::map<int, int>& phi_vars) {
  std::vector<lp::Term> terms;
  for (const auto& [leaf, var] : phi_vars) terms.push_back({var, tree.path_probability(leaf)});
  return terms;
}

}  // namespace

QuantileResult maximize_effectiveness(const ScenarioTree& tree, const Claim& claim,
                                      const std::vector<Rat>& v0) {
  require_some_admissible(tree, v0);

  detail::HedgeLpSpec spec;
  spec.tree = &tree;
  spec.claim = &claim;
  spec.endowment = &v0;
  spec.scale_claim_by_phi = true;
  detail::HedgeLp hedge = detail::build_hedge_lp(spec);
  hedge.problem.set_objective(effectiveness_terms(tree, hedge.phi_vars), lp::Sense::maximize);

  const lp::LpSolution solution = lp::solve_lp(hedge.problem);
  if (solution.status != lp::Status::optimal)
    throw InternalError("effectiveness LP is feasible (phi = 0) and bounded (phi <= 1)");

  QuantileResult result;
  result.phi = detail::extract_phi(hedge, solution);
  result.strategy = detail::extract_strategy(hedge, tree, solution);
  result.value = solution.value;
  detail::verify_witness(tree, claim, v0, result.strategy, &result.phi);
  return result;
}

bool gamma_eps_member(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& v,
                      const Rat& eps) {
  if (eps < 0 || eps > 1) throw InputError("eps must lie in [0,1]");
  return maximize_effectiveness(tree, claim, v).value >= Rat(1) - eps;
}

Rat min_capital_eps(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& w,
                    const Rat& eps) {
  if (eps < 0 || eps > 1) throw InputError("eps must lie in [0,1]");
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
  spec.scale_claim_by_phi = true;
  detail::HedgeLp hedge = detail::build_hedge_lp(spec);
  hedge.problem.add_constraint(effectiveness_terms(tree, hedge.phi_vars),
                               lp::Relation::greater_eq, Rat(1) - eps);
  hedge.problem.set_objective({{hedge.capital_var, Rat(1)}}, lp::Sense::minimize);

  const lp::LpSolution solution = lp::solve_lp(hedge.problem);
  if (solution.status == lp::Status::infeasible)
    throw InternalError("capital LP infeasible; large capital hedges the full claim");
  if (solution.status == lp::Status::unbounded)
    throw PreconditionError("capital unbounded below (market admits arbitrage)");
  return solution.value;
}

}  // namespace tchedge
