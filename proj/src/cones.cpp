#include "tchedge/cones.hpp"

#include "tchedge/errors.hpp"
#include "tchedge/lp.hpp"

namespace tchedge {

GeneratorCone transfer_cone(const CostMatrix& costs) {
  const int d = costs.dim();
  GeneratorCone cone;
  cone.dim = d;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      std::vector<Rat> g(d, Rat(0));
      g[i] = Rat(1) + costs.at(i, j);
      g[j] = -1;
      cone.generators.push_back(std::move(g));
    }
  }
  return cone;
}

GeneratorCone solvency_cone(const CostMatrix& costs) {
  GeneratorCone cone = transfer_cone(costs);
  for (int i = 0; i < costs.dim(); ++i) {
    std::vector<Rat> g(costs.dim(), Rat(0));
    g[i] = 1;
    cone.generators.push_back(std::move(g));
  }
  return cone;
}

bool cone_contains(const GeneratorCone& cone, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != cone.dim)
    throw InputError("cone membership: dimension mismatch");
  if (cone.generators.empty()) {
    for (const Rat& r : x)
      if (r != 0) return false;
    return true;
  }
  lp::LpProblem problem;
  std::vector<int> alpha;
  alpha.reserve(cone.generators.size());
  for (size_t k = 0; k < cone.generators.size(); ++k)
    alpha.push_back(problem.add_nonneg_variable());
  for (int i = 0; i < cone.dim; ++i) {
    std::vector<lp::Term> row;
    for (size_t k = 0; k < cone.generators.size(); ++k) {
      if (cone.generators[k][i] != 0) row.push_back({alpha[k], cone.generators[k][i]});
    }
    problem.add_constraint(std::move(row), lp::Relation::equal, x[i]);
  }
  return lp::solve_lp(problem).status == lp::Status::optimal;
}

bool dominates(const std::vector<Rat>& x, const std::vector<Rat>& y, const CostMatrix& costs) {
  if (x.size() != y.size()) throw InputError("dominates: dimension mismatch");
  std::vector<Rat> diff(x.size());
  for (size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
  return cone_contains(solvency_cone(costs), diff);
}

bool check_ef(const CostMatrix& costs) {
  const int d = costs.dim();
  const GeneratorCone cone = solvency_cone(costs);
  // maximize s*x_i over {x in K, -x in K, |x_j| <= 1}; all optima zero iff
  // the lineality space is trivial.
  for (int i = 0; i < d; ++i) {
    for (int sign : {1, -1}) {
      lp::LpProblem problem;
      std::vector<int> x_vars;
      for (int j = 0; j < d; ++j) x_vars.push_back(problem.add_variable(Rat(-1), Rat(1)));
      std::vector<int> alpha, beta;
      for (size_t k = 0; k < cone.generators.size(); ++k) {
        alpha.push_back(problem.add_nonneg_variable());
        beta.push_back(problem.add_nonneg_variable());
      }
      for (int row = 0; row < d; ++row) {
        std::vector<lp::Term> pos{{x_vars[row], Rat(1)}};
        std::vector<lp::Term> neg{{x_vars[row], Rat(-1)}};
        for (size_t k = 0; k < cone.generators.size(); ++k) {
          if (cone.generators[k][row] != 0) {
            pos.push_back({alpha[k], -cone.generators[k][row]});
            neg.push_back({beta[k], -cone.generators[k][row]});
          }
        }
        problem.add_constraint(std::move(pos), lp::Relation::equal, Rat(0));
        problem.add_constraint(std::move(neg), lp::Relation::equal, Rat(0));
      }
      problem.set_objective({{x_vars[i], Rat(sign)}}, lp::Sense::maximize);
      const lp::LpSolution solution = lp::solve_lp(problem);
      if (solution.status != lp::Status::optimal)
        throw InternalError("EF check LP must be feasible and bounded");
      if (solution.value != 0) return false;
    }
  }
  return true;
}

bool dual_cone_contains(const CostMatrix& costs, const std::vector<Rat>& w) {
  if (static_cast<int>(w.size()) != costs.dim())
    throw InputError("dual cone membership: dimension mismatch");
  for (const std::vector<Rat>& g : solvency_cone(costs).generators) {
    Rat dot(0);
    for (size_t i = 0; i < w.size(); ++i) dot += w[i] * g[i];
    if (dot < 0) return false;
  }
  return true;
}

Liquidation liquidation_value(const std::vector<Rat>& position, const CostMatrix& costs,
                              int asset) {
  const int d = costs.dim();
  if (static_cast<int>(position.size()) != d)
    throw InputError("liquidation: dimension mismatch");
  if (asset < 0 || asset >= d) throw InputError("liquidation: asset index out of range");

  // max c with position - c*e_asset = outflow - inflow of some transfer L.
  lp::LpProblem problem;
  const int c = problem.add_variable();
  std::vector<std::vector<int>> transfer(d, std::vector<int>(d, -1));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) transfer[i][j] = problem.add_nonneg_variable();
  for (int i = 0; i < d; ++i) {
    std::vector<lp::Term> row;
    if (i == asset) row.push_back({c, Rat(1)});
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      row.push_back({transfer[i][j], Rat(1) + costs.at(i, j)});
      row.push_back({transfer[j][i], Rat(-1)});
    }
    problem.add_constraint(std::move(row), lp::Relation::equal, position[i]);
  }
  problem.set_objective({{c, Rat(1)}}, lp::Sense::maximize);

  const lp::LpSolution solution = lp::solve_lp(problem);
  if (solution.status == lp::Status::infeasible)
    throw PreconditionError("position not liquidatable");
  if (solution.status == lp::Status::unbounded)
    throw PreconditionError("liquidation value unbounded (friction violates EF)");

  Liquidation result{solution.value, TransferMatrix(d)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) result.transfer.at(i, j) = solution.assignment[transfer[i][j]];
  return result;
}

}  // namespace tchedge
