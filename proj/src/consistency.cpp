#include "tchedge/consistency.hpp"

#include "tchedge/cones.hpp"
#include "tchedge/errors.hpp"
#include "tchedge/lp.hpp"

#include <ostream>

namespace tchedge {

namespace {

// Variables Zhat per node; martingale rows tie Z = Zhat*S to the children.
struct DualSystemLp {
  lp::LpProblem problem;
  std::map<int, std::vector<int>> zhat;
};

DualSystemLp build_dual_system(const ScenarioTree& tree, const Rat& cone_rhs) {
  DualSystemLp dual;
  const int d = tree.dimension();
  for (int id : tree.node_ids()) {
    std::vector<int>& vars = dual.zhat[id];
    for (int i = 0; i < d; ++i) vars.push_back(dual.problem.add_variable());
  }
  for (int id : tree.node_ids()) {
    const TreeNode& n = tree.node(id);
    for (const std::vector<Rat>& g : solvency_cone(n.costs).generators) {
      std::vector<lp::Term> row;
      for (int i = 0; i < d; ++i)
        if (g[i] != 0) row.push_back({dual.zhat.at(id)[i], g[i]});
      dual.problem.add_constraint(std::move(row), lp::Relation::greater_eq, cone_rhs);
    }
    if (n.children.empty()) continue;
    for (int i = 0; i < d; ++i) {
      std::vector<lp::Term> row{{dual.zhat.at(id)[i], n.prices[i]}};
      for (int child : n.children) {
        const TreeNode& c = tree.node(child);
        row.push_back({dual.zhat.at(child)[i], -c.prob * c.prices[i]});
      }
      dual.problem.add_constraint(std::move(row), lp::Relation::equal, Rat(0));
    }
  }
  return dual;
}

}  // namespace

std::optional<PriceSystem> find_strict_cps(const ScenarioTree& tree) {
  for (int id : tree.node_ids()) {
    if (!check_ef(tree.node(id).costs))
      throw PreconditionError("efficient friction fails at node " + std::to_string(id));
  }
  DualSystemLp dual = build_dual_system(tree, Rat(1));
  dual.problem.set_objective({}, lp::Sense::minimize);
  const lp::LpSolution solution = lp::solve_lp(dual.problem);
  if (solution.status == lp::Status::infeasible) return std::nullopt;
  if (solution.status != lp::Status::optimal)
    throw InternalError("strict price-system LP cannot be unbounded");

  PriceSystem system;
  for (int id : tree.node_ids()) {
    const TreeNode& n = tree.node(id);
    std::vector<Rat> z(tree.dimension());
    for (int i = 0; i < tree.dimension(); ++i)
      z[i] = solution.assignment[dual.zhat.at(id)[i]] * n.prices[i];
    system.values.emplace(id, std::move(z));
  }
  if (!check_price_system(tree, system).empty())
    throw InternalError("strict price system fails its own invariants");
  return system;
}

std::vector<std::string> check_price_system(const ScenarioTree& tree, const PriceSystem& system) {
  std::vector<std::string> report;
  const int d = tree.dimension();
  for (int id : tree.node_ids()) {
    auto it = system.values.find(id);
    if (it == system.values.end() || static_cast<int>(it->second.size()) != d) {
      report.push_back("node " + std::to_string(id) + ": missing or misshaped value");
      continue;
    }
    const TreeNode& n = tree.node(id);
    std::vector<Rat> zhat(d);
    for (int i = 0; i < d; ++i) zhat[i] = it->second[i] / n.prices[i];
    if (!dual_cone_contains(n.costs, zhat))
      report.push_back("node " + std::to_string(id) + ": Zhat outside the dual cone");
    if (n.children.empty()) continue;
    for (int i = 0; i < d; ++i) {
      Rat expect(0);
      for (int child : n.children) expect += tree.node(child).prob * system.values.at(child)[i];
      if (expect != it->second[i])
        report.push_back("node " + std::to_string(id) + ": martingale identity fails");
    }
  }
  return report;
}

Rat dual_hedge_gap(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& v) {
  const int d = tree.dimension();
  if (static_cast<int>(v.size()) != d) throw InputError("endowment has wrong dimension");
  for (int leaf : tree.leaf_ids())
    if (!claim.payoffs.count(leaf)) throw InputError("claim missing leaf " + std::to_string(leaf));

  DualSystemLp dual = build_dual_system(tree, Rat(0));
  std::vector<lp::Term> norm;
  for (int i = 0; i < d; ++i) norm.push_back({dual.zhat.at(tree.root_id())[i], Rat(1)});
  dual.problem.add_constraint(std::move(norm), lp::Relation::equal, Rat(1));

  std::vector<lp::Term> objective;
  for (int i = 0; i < d; ++i) objective.push_back({dual.zhat.at(tree.root_id())[i], v[i]});
  for (int leaf : tree.leaf_ids()) {
    const Rat p = tree.path_probability(leaf);
    const std::vector<Rat>& payoff = claim.payoffs.at(leaf);
    for (int i = 0; i < d; ++i) {
      if (payoff[i] != 0) objective.push_back({dual.zhat.at(leaf)[i], -p * payoff[i]});
    }
  }
  dual.problem.set_objective(std::move(objective), lp::Sense::minimize);

  const lp::LpSolution solution = lp::solve_lp(dual.problem);
  if (solution.status == lp::Status::infeasible)
    throw PreconditionError("no consistent price system with nonzero initial value");
  if (solution.status == lp::Status::unbounded)
    throw InternalError("dual hedge gap LP is bounded by construction");
  return solution.value;
}

void write_price_system_csv(std::ostream& out, const ScenarioTree& tree,
                            const PriceSystem& system) {
  out << "node_id";
  for (int i = 1; i <= tree.dimension(); ++i) out << ",Z_" << i;
  out << '\n';
  for (const auto& [id, z] : system.values) {
    out << id;
    for (const Rat& value : z) out << ',' << rat_to_string(value);
    out << '\n';
  }
}

}  // namespace tchedge
