#pragma once

#include "tchedge/market.hpp"
#include "tchedge/wealth.hpp"

#include <iosfwd>
#include <map>
#include <optional>

namespace tchedge {

struct LeafSuccess {
  bool hedged = false;
  Rat phi;
  std::optional<TransferMatrix> witness;  // present exactly on unhedged leaves
};

struct SuccessProfile {
  std::map<int, LeafSuccess> leaves;
};

struct ProportionalTransfer {
  Rat ratio;  // c-hat
  TransferMatrix transfer;
};

/// Best proportional hedge fraction: max c such that wealth - c*claim lies
/// in the transfer cone, with the realizing transfer. The claim must be
/// strictly positive componentwise under friction; with zero costs only a
/// positive component sum is required (the fraction is then the ratio of
/// the sums).
ProportionalTransfer optimal_proportional_transfer(const std::vector<Rat>& wealth,
                                                   const std::vector<Rat>& claim,
                                                   const CostMatrix& costs);

/// Per-leaf success values of an admissible terminal wealth against the
/// claim: 1 where the wealth dominates the payoff, otherwise the optimal
/// proportional fraction. jobs > 1 evaluates leaves concurrently.
SuccessProfile success_function(const ScenarioTree& tree, const WealthPath& path,
                                const Claim& claim, int jobs = 1);

/// Unhedged fraction per leaf: 1 - phi.
std::map<int, Rat> shortfall(const SuccessProfile& profile);

/// Expected success: sum of path probability times phi over the leaves.
Rat effectiveness(const ScenarioTree& tree, const SuccessProfile& profile);

/// CSV export: leaf_id,probability,hedged,phi,shortfall (exact rationals).
void write_success_csv(std::ostream& out, const ScenarioTree& tree, const SuccessProfile& profile);

}  // namespace tchedge
