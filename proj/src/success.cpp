#include "tchedge/success.hpp"

#include "tchedge/cones.hpp"
#include "tchedge/errors.hpp"
#include "tchedge/lp.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>
#include <thread>

namespace tchedge {

ProportionalTransfer optimal_proportional_transfer(const std::vector<Rat>& wealth,
                                                   const std::vector<Rat>& claim,
                                                   const CostMatrix& costs) {
  const int d = costs.dim();
  if (static_cast<int>(wealth.size()) != d || static_cast<int>(claim.size()) != d)
    throw InputError("proportional transfer: dimension mismatch");

  if (costs.is_zero()) {
    Rat total(0);
    for (const Rat& h : claim) total += h;
    if (total <= 0) throw PreconditionError("claim not strictly positive");
  } else {
    for (const Rat& h : claim)
      if (h <= 0) throw PreconditionError("claim not strictly positive");
  }
  if (!dominates(wealth, std::vector<Rat>(d, Rat(0)), costs))
    throw PreconditionError("wealth is not admissible at this leaf");

  // max c with wealth - c*claim = (cost-loaded outflow) - inflow.
  lp::LpProblem problem;
  const int c = problem.add_variable();
  std::vector<std::vector<int>> transfer(d, std::vector<int>(d, -1));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) transfer[i][j] = problem.add_nonneg_variable();
  for (int i = 0; i < d; ++i) {
    std::vector<lp::Term> row{{c, claim[i]}};
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      row.push_back({transfer[i][j], Rat(1) + costs.at(i, j)});
      row.push_back({transfer[j][i], Rat(-1)});
    }
    problem.add_constraint(std::move(row), lp::Relation::equal, wealth[i]);
  }
  problem.set_objective({{c, Rat(1)}}, lp::Sense::maximize);

  const lp::LpSolution solution = lp::solve_lp(problem);
  if (solution.status == lp::Status::infeasible)
    throw PreconditionError("no proportional transfer exists");
  if (solution.status == lp::Status::unbounded)
    throw PreconditionError("proportional transfer unbounded (friction violates EF)");

  ProportionalTransfer result{solution.value, TransferMatrix(d)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) result.transfer.at(i, j) = solution.assignment[transfer[i][j]];
  return result;
}

SuccessProfile success_function(const ScenarioTree& tree, const WealthPath& path,
                                const Claim& claim, int jobs) {
  if (!is_admissible(tree, path)) throw PreconditionError("wealth path is not admissible");
  const std::vector<int>& leaves = tree.leaf_ids();
  for (int leaf : leaves) {
    if (!claim.payoffs.count(leaf)) throw InputError("claim missing leaf " + std::to_string(leaf));
  }

  std::vector<LeafSuccess> results(leaves.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto evaluate = [&](size_t begin, size_t end) {
    try {
      for (size_t k = begin; k < end; ++k) {
        const int leaf = leaves[k];
        const std::vector<Rat>& wealth = path.values.at(leaf);
        const std::vector<Rat>& payoff = claim.payoffs.at(leaf);
        const CostMatrix& costs = tree.node(leaf).costs;
        LeafSuccess& out = results[k];
        if (dominates(wealth, payoff, costs)) {
          out.hedged = true;
          out.phi = 1;
        } else {
          ProportionalTransfer best = optimal_proportional_transfer(wealth, payoff, costs);
          out.hedged = false;
          out.phi = std::move(best.ratio);
          out.witness = std::move(best.transfer);
          if (out.phi < 0 || out.phi >= 1)
            throw InternalError("success value outside [0,1) on an unhedged leaf");
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(leaves.size())));
  if (jobs == 1) {
    evaluate(0, leaves.size());
  } else {
    std::vector<std::thread> workers;
    const size_t chunk = (leaves.size() + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t) {
      const size_t begin = t * chunk;
      const size_t end = std::min(leaves.size(), begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(evaluate, begin, end);
    }
    for (std::thread& w : workers) w.join();
  }
  if (failure) std::rethrow_exception(failure);

  SuccessProfile profile;
  for (size_t k = 0; k < leaves.size(); ++k) profile.leaves.emplace(leaves[k], std::move(results[k]));
  return profile;
}

std::map<int, Rat> shortfall(const SuccessProfile& profile) {
  std::map<int, Rat> out;
  for (const auto& [leaf, success] : profile.leaves) out.emplace(leaf, Rat(1) - success.phi);
  return out;
}

Rat effectiveness(const ScenarioTree& tree, const SuccessProfile& profile) {
  Rat total(0);
  for (int leaf : tree.leaf_ids()) {
    auto it = profile.leaves.find(leaf);
    if (it == profile.leaves.end())
      throw InputError("success profile missing leaf " + std::to_string(leaf));
    total += tree.path_probability(leaf) * it->second.phi;
  }
  return total;
}

void write_success_csv(std::ostream& out, const ScenarioTree& tree,
                       const SuccessProfile& profile) {
  out << "leaf_id,probability,hedged,phi,shortfall\n";
  for (const auto& [leaf, success] : profile.leaves) {
    out << leaf << ',' << rat_to_string(tree.path_probability(leaf)) << ','
        << (success.hedged ? 1 : 0) << ',' << rat_to_string(success.phi) << ','
        << rat_to_string(Rat(1) - success.phi) << '\n';
  }
}

}  // namespace tchedge
