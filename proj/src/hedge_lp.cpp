#include "hedge_lp.hpp"

#include "tchedge/cones.hpp"
#include "tchedge/errors.hpp"

namespace tchedge::detail {

HedgeLp build_hedge_lp(const HedgeLpSpec& spec) {
  const ScenarioTree& tree = *spec.tree;
  const Claim& claim = *spec.claim;
  const int d = tree.dimension();

  if (spec.endowment && static_cast<int>(spec.endowment->size()) != d)
    throw InputError("endowment has wrong dimension");
  if (spec.direction && static_cast<int>(spec.direction->size()) != d)
    throw InputError("direction has wrong dimension");
  for (int leaf : tree.leaf_ids()) {
    auto it = claim.payoffs.find(leaf);
    if (it == claim.payoffs.end()) throw InputError("claim missing leaf " + std::to_string(leaf));
    if (static_cast<int>(it->second.size()) != d)
      throw InputError("claim payoff has wrong dimension at leaf " + std::to_string(leaf));
  }

  HedgeLp hedge;
  lp::LpProblem& problem = hedge.problem;

  for (int id : tree.node_ids()) {
    std::vector<int>& vars = hedge.transfer_vars[id];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) vars.push_back(problem.add_nonneg_variable());
  }
  if (spec.direction) hedge.capital_var = problem.add_variable();
  std::map<int, GeneratorCone> leaf_cones;
  for (int leaf : tree.leaf_ids()) {
    leaf_cones.emplace(leaf, solvency_cone(tree.node(leaf).costs));
    std::vector<int>& vars = hedge.cone_vars[leaf];
    for (size_t k = 0; k < leaf_cones.at(leaf).generators.size(); ++k)
      vars.push_back(problem.add_nonneg_variable());
    if (spec.scale_claim_by_phi) hedge.phi_vars[leaf] = problem.add_variable(Rat(0), Rat(1));
  }

  // Terminal wealth per leaf: the endowment and every transfer effect on the
  // path grow with the price ratio from their node to the leaf.
  for (int leaf : tree.leaf_ids()) {
    const TreeNode& leaf_node = tree.node(leaf);
    const std::vector<Rat>& payoff = claim.payoffs.at(leaf);
    const std::vector<int> path = tree.path_from_root(leaf);
    for (int i = 0; i < d; ++i) {
      std::vector<lp::Term> row;
      Rat rhs(0);
      const Rat root_growth = leaf_node.prices[i] / tree.node(tree.root_id()).prices[i];
      if (spec.direction) {
        row.push_back({hedge.capital_var, -(*spec.direction)[i] * root_growth});
      } else {
        rhs -= (*spec.endowment)[i] * root_growth;
      }
      for (int node_id : path) {
        const TreeNode& n = tree.node(node_id);
        const Rat growth = leaf_node.prices[i] / n.prices[i];
        const std::vector<int>& vars = hedge.transfer_vars.at(node_id);
        int idx = 0;
        for (int a = 0; a < d; ++a) {
          for (int b = 0; b < d; ++b) {
            if (a == b) continue;
            // Transfer a->b: account b gains 1, account a pays 1+lambda_ab.
            if (b == i) row.push_back({vars[idx], -growth});
            if (a == i) row.push_back({vars[idx], growth * (Rat(1) + n.costs.at(a, b))});
            ++idx;
          }
        }
      }
      const std::vector<int>& cone = hedge.cone_vars.at(leaf);
      const GeneratorCone& gens = leaf_cones.at(leaf);
      for (size_t k = 0; k < gens.generators.size(); ++k) {
        if (gens.generators[k][i] != 0) row.push_back({cone[k], gens.generators[k][i]});
      }
      if (spec.scale_claim_by_phi) {
        if (payoff[i] != 0) row.push_back({hedge.phi_vars.at(leaf), payoff[i]});
      } else {
        rhs += payoff[i];
      }
      // All terms entered with the sign of  -V_T + [phi]H + alpha.g; rhs
      // holds the constant part, so the equation V_T - [phi]H = alpha.g
      // becomes  row == -rhs.
      problem.add_constraint(std::move(row), lp::Relation::equal, -rhs);
    }
  }
  return hedge;
}

Strategy extract_strategy(const HedgeLp& hedge, const ScenarioTree& tree,
                          const lp::LpSolution& solution) {
  const int d = tree.dimension();
  Strategy strategy;
  for (const auto& [id, vars] : hedge.transfer_vars) {
    TransferMatrix transfer(d);
    int idx = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) transfer.at(i, j) = solution.assignment[vars[idx++]];
    strategy.actions.emplace(id, std::move(transfer));
  }
  return strategy;
}

std::map<int, Rat> extract_phi(const HedgeLp& hedge, const lp::LpSolution& solution) {
  std::map<int, Rat> phi;
  for (const auto& [leaf, var] : hedge.phi_vars) phi.emplace(leaf, solution.assignment[var]);
  return phi;
}

void verify_witness(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& v,
                    const Strategy& strategy, const std::map<int, Rat>* phi) {
  const WealthPath path = run_strategy(tree, v, strategy);
  for (int leaf : tree.leaf_ids()) {
    std::vector<Rat> target = claim.payoffs.at(leaf);
    if (phi) {
      const Rat& scale = phi->at(leaf);
      for (Rat& h : target) h *= scale;
    }
    if (!dominates(path.values.at(leaf), target, tree.node(leaf).costs))
      throw InternalError("hedge witness fails cone domination at leaf " + std::to_string(leaf));
  }
}

}  // namespace tchedge::detail
