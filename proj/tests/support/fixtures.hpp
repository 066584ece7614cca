#pragma once

#include "tchedge/market.hpp"

namespace testsupport {

using tchedge::Claim;
using tchedge::CostMatrix;
using tchedge::Rat;
using tchedge::ScenarioTree;

// Two assets, one period: asset 1 is a flat bond, asset 2 moves 1 -> 2 or
// 1 -> 1/2 with probability 1/2 each. Node ids: 0 root, 1 up, 2 down.
inline ScenarioTree binomial_tree(const Rat& lambda) {
  tchedge::TreeBuilder builder(2);
  const CostMatrix costs = CostMatrix::uniform(2, lambda);
  const int root = builder.add_root({Rat(1), Rat(1)}, costs);
  builder.add_child(root, Rat(1, 2), {Rat(1), Rat(2)}, costs);
  builder.add_child(root, Rat(1, 2), {Rat(1), Rat(1, 2)}, costs);
  return builder.build();
}

// Pays one unit on the bond account in the up state, nothing otherwise.
inline Claim up_claim(const ScenarioTree&) {
  Claim claim;
  claim.payoffs[1] = {Rat(1), Rat(0)};
  claim.payoffs[2] = {Rat(0), Rat(0)};
  return claim;
}

// Asset 2 rises from 1 to 2 with certainty; an arbitrage under small costs.
inline ScenarioTree deterministic_rise_tree(const Rat& lambda) {
  tchedge::TreeBuilder builder(2);
  const CostMatrix costs = CostMatrix::uniform(2, lambda);
  const int root = builder.add_root({Rat(1), Rat(1)}, costs);
  builder.add_child(root, Rat(1), {Rat(1), Rat(2)}, costs);
  return builder.build();
}

inline ScenarioTree single_node_tree(int dim, const CostMatrix& costs) {
  tchedge::TreeBuilder builder(dim);
  builder.add_root(std::vector<Rat>(dim, Rat(1)), costs);
  return builder.build();
}

// Three leaves under one root, asset 2 at 2, 1, or 1/2.
inline ScenarioTree trinomial_tree(const Rat& lambda) {
  tchedge::TreeBuilder builder(2);
  const CostMatrix costs = CostMatrix::uniform(2, lambda);
  const int root = builder.add_root({Rat(1), Rat(1)}, costs);
  builder.add_child(root, Rat(1, 3), {Rat(1), Rat(2)}, costs);
  builder.add_child(root, Rat(1, 3), {Rat(1), Rat(1)}, costs);
  builder.add_child(root, Rat(1, 3), {Rat(1), Rat(1, 2)}, costs);
  return builder.build();
}

}  // namespace testsupport
