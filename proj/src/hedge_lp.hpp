#pragma once

// Shared construction of the strategy-existence LP: transfer variables at
// every node, the self-financing recursion folded into per-leaf terminal
// wealth expressions, and a solvency-cone decomposition at each leaf.
// Used by the feasibility check and both optimizers.

#include "tchedge/lp.hpp"
#include "tchedge/market.hpp"
#include "tchedge/wealth.hpp"

#include <map>
#include <vector>

namespace tchedge::detail {

struct HedgeLp {
  lp::LpProblem problem;
  // node id -> d*(d-1) transfer variables, ordered (i,j) row-major, i != j.
  std::map<int, std::vector<int>> transfer_vars;
  // leaf id -> cone coefficients over solvency_cone generators.
  std::map<int, std::vector<int>> cone_vars;
  // leaf id -> phi variable in [0,1] (only when phi scaling is enabled).
  std::map<int, int> phi_vars;
  // capital scale x (only in direction mode; endowment = x * direction).
  int capital_var = -1;
};

struct HedgeLpSpec {
  const ScenarioTree* tree = nullptr;
  const Claim* claim = nullptr;           // payoff at each leaf
  const std::vector<Rat>* endowment = nullptr;   // fixed v, or
  const std::vector<Rat>* direction = nullptr;   // v = x * w with x free
  bool scale_claim_by_phi = false;         // leaf constraint uses phi*H
};

/// Builds variables and the per-leaf constraints
///   V_T(leaf) - [phi *] H(leaf) = sum_k alpha_k g_k(leaf),  alpha >= 0.
/// No objective is set.
HedgeLp build_hedge_lp(const HedgeLpSpec& spec);

Strategy extract_strategy(const HedgeLp& hedge, const ScenarioTree& tree,
                          const lp::LpSolution& solution);

std::map<int, Rat> extract_phi(const HedgeLp& hedge, const lp::LpSolution& solution);

/// Exact post-check, independent of the LP internals: runs the strategy and
/// verifies cone domination of the (scaled) claim at every leaf.
void verify_witness(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& v,
                    const Strategy& strategy, const std::map<int, Rat>* phi);

}  // namespace tchedge::detail
