#pragma once

#include "tchedge/market.hpp"
#include "tchedge/rational.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

namespace tchedge {

/// A martingale Z whose discounted version Z-hat (componentwise Z^i / S^i)
/// lies in the dual solvency cone at every node.
struct PriceSystem {
  std::map<int, std::vector<Rat>> values;  // node id -> Z
};

/// A strictly consistent price system, if one exists: Z-hat strictly inside
/// every node's dual cone (encoded as Z-hat . g >= 1 per generator, which is
/// equivalent up to scaling). Existence certifies strict no-arbitrage under
/// efficient friction. Throws PreconditionError naming the first node where
/// efficient friction fails.
std::optional<PriceSystem> find_strict_cps(const ScenarioTree& tree);

/// Violations of the PriceSystem invariants; empty means valid.
std::vector<std::string> check_price_system(const ScenarioTree& tree, const PriceSystem& system);

/// min over consistent price systems with sum_i Zhat_0^i = 1 of
/// Zhat_0 . v - E[Zhat_T . H]; the endowment hedges the claim iff >= 0.
Rat dual_hedge_gap(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& v);

/// CSV export: node_id,Z_1,...,Z_d.
void write_price_system_csv(std::ostream& out, const ScenarioTree& tree, const PriceSystem& system);

}  // namespace tchedge
