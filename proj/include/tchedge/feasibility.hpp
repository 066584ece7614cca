#pragma once

#include "tchedge/market.hpp"
#include "tchedge/wealth.hpp"

#include <optional>

namespace tchedge {

struct HedgeCheck {
  bool feasible = false;
  std::optional<Strategy> strategy;  // witness, re-verified by running it
};

/// Does some self-financing strategy from endowment v terminally dominate
/// the claim in every leaf's solvency cone? On success the witness strategy
/// is returned after an exact re-check against the wealth recursion.
HedgeCheck hedging_feasible(const ScenarioTree& tree, const Claim& claim,
                            const std::vector<Rat>& v);

/// Smallest x such that x*w supports a hedge of the claim; w >= 0, w != 0.
/// The raw LP optimum is reported (it can be negative for degenerate
/// claims).
Rat min_hedging_capital(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& w);

}  // namespace tchedge
