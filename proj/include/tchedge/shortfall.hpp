#pragma once

#include "tchedge/market.hpp"
#include "tchedge/wealth.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

namespace tchedge {

/// Non-decreasing convex piecewise-linear penalty on the shortfall fraction,
/// given by breakpoints from (0,0) to (1, u(1)).
struct LossFunction {
  std::vector<std::pair<Rat, Rat>> breakpoints;  // (x, u(x)), x strictly increasing

  static LossFunction identity() { return {{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}}; }
};

/// Validates every LossFunction invariant and returns the input; throws
/// InputError naming the violated breakpoint otherwise.
LossFunction check_loss(LossFunction loss);

/// Loss file: JSON array of [x, u] rational-string pairs.
LossFunction load_loss(std::istream& in);

/// u(x) by linear interpolation; x must lie in [0,1].
Rat loss_value(const LossFunction& loss, const Rat& x);

struct ShortfallResult {
  std::map<int, Rat> phi;
  Strategy strategy;  // hedges the phi-scaled claim from v0
  Rat risk;           // E[u(1 - phi)]
};

/// Minimizes expected loss of the shortfall fraction over hedgeable phi;
/// the convex piecewise-linear loss enters through epigraph variables, so
/// this stays one exact LP.
ShortfallResult minimize_shortfall_risk(const ScenarioTree& tree, const Claim& claim,
                                        const std::vector<Rat>& v0, const LossFunction& loss);

/// Is the minimal shortfall risk from v at most alpha? alpha >= 0.
bool gamma_alpha_member(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& v,
                        const LossFunction& loss, const Rat& alpha);

struct GridSearchResult {
  std::map<int, Rat> phi;
  Rat risk;
};

/// Exhaustive search over the per-leaf grid {0, 1/steps, ..., 1} for an
/// arbitrary non-decreasing loss, feasibility decided per grid point by the
/// hedging LP. Exact over the grid; limited to trees with at most 3 leaves.
GridSearchResult minimize_shortfall_risk_grid(const ScenarioTree& tree, const Claim& claim,
                                              const std::vector<Rat>& v0,
                                              const std::function<Rat(const Rat&)>& loss,
                                              int steps);

}  // namespace tchedge
