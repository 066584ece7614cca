#pragma once

#include "tchedge/market.hpp"
#include "tchedge/wealth.hpp"

#include <map>

namespace tchedge {

struct QuantileResult {
  std::map<int, Rat> phi;  // optimal success fraction per leaf
  Strategy strategy;       // hedges the phi-scaled claim from v0
  Rat value;               // expected success E[phi]
};

/// Maximizes expected success over per-leaf fractions phi in [0,1] subject
/// to v0 hedging the scaled claim H*phi; one LP over transfers, cone slacks
/// and phi. Requires v0 to support some admissible strategy.
QuantileResult maximize_effectiveness(const ScenarioTree& tree, const Claim& claim,
                                      const std::vector<Rat>& v0);

/// Can v reach effectiveness at least 1 - eps? eps in [0,1].
bool gamma_eps_member(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& v,
                      const Rat& eps);

/// Smallest x with x*w reaching effectiveness 1 - eps; w >= 0, w != 0.
Rat min_capital_eps(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& w,
                    const Rat& eps);

}  // namespace tchedge
