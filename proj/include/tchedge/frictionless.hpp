#pragma once

#include "tchedge/market.hpp"
#include "tchedge/wealth.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace tchedge {

/// True iff every node's cost matrix is identically zero.
bool is_frictionless(const ScenarioTree& tree);

/// Component sums; at zero cost these are invariant under transfers. All
/// overloads throw PreconditionError on a frictional tree.
Rat scalarize(const ScenarioTree& tree, const std::vector<Rat>& x);
std::map<int, Rat> scalarize(const ScenarioTree& tree, const Claim& claim);
std::map<int, Rat> scalarize(const ScenarioTree& tree, const WealthPath& path);

/// Supremum of E^Q[C] over martingale measures for the scalar claim C. The
/// LP runs over the closed measure polytope; certify_strict additionally
/// demands a strictly positive measure exist. Throws PreconditionError
/// ("EMM violated") when no martingale measure exists.
Rat emm_price(const ScenarioTree& tree, const std::map<int, Rat>& scalar_claim,
              bool certify_strict = false);

struct FlReport {
  bool success_functions_match = false;  // cone success == scalar success, leafwise
  bool effectiveness_matches = false;    // cone optimum == scalar quantile LP
  bool capital_matches = false;          // cone min capital == scalar cost-minimizing capital
  Rat cone_value;
  Rat scalar_value;
  Rat cone_capital;
  Rat scalar_capital;
  Rat eps;
  int strategies_checked = 0;
  bool passed() const {
    return success_functions_match && effectiveness_matches && capital_matches;
  }
};

/// Checks, on this zero-cost instance, that the cone machinery reproduces
/// the scalar quantile-hedging theory: success functions agree leafwise on
/// sampled admissible strategies, the effectiveness optimum matches an
/// independent scalar LP built on extreme martingale measures, and the
/// minimal capital at effectiveness 1 - eps matches the scalar one.
FlReport verify_fl_correspondence(const ScenarioTree& tree, const Claim& claim,
                                  const std::vector<Rat>& v0, const Rat& eps = Rat(1, 4),
                                  int sample_strategies = 3, std::uint64_t seed = 987654321);

/// Extreme points of {q >= 0, sum q = 1, every asset a martingale under q},
/// one probability per leaf. Exposed for the scalar-side oracles.
std::vector<std::map<int, Rat>> extreme_martingale_measures(const ScenarioTree& tree);

}  // namespace tchedge
