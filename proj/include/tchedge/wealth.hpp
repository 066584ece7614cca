#pragma once

#include "tchedge/market.hpp"
#include "tchedge/rational.hpp"
#include "tchedge/wealth_types.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace tchedge {

/// One transfer action per tree node, including leaves.
struct Strategy {
  std::map<int, TransferMatrix> actions;
};

/// Wealth vector at every node, satisfying the self-financing recursion.
struct WealthPath {
  std::map<int, std::vector<Rat>> values;
};

Strategy zero_strategy(const ScenarioTree& tree);

/// Net effect of a transfer on the account values: inflows minus cost-loaded
/// outflows per account.
std::vector<Rat> transfer_effect(const TransferMatrix& transfer, const CostMatrix& costs);

/// Runs the self-financing recursion from initial endowment v; at each node
/// wealth drifts with prices and then takes the node's transfer.
WealthPath run_strategy(const ScenarioTree& tree, const std::vector<Rat>& v,
                        const Strategy& strategy);

/// Terminal admissibility: wealth at every leaf dominates zero in that
/// leaf's solvency cone.
bool is_admissible(const ScenarioTree& tree, const WealthPath& path);

/// Strategy file: array of {node, transfers}; omitted nodes mean no action.
Strategy load_strategy(std::istream& in, const ScenarioTree& tree);
std::string serialize_strategy(const Strategy& strategy, const ScenarioTree& tree);

}  // namespace tchedge
