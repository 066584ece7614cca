#pragma once

#include "tchedge/market.hpp"
#include "tchedge/rational.hpp"
#include "tchedge/wealth_types.hpp"

#include <vector>

namespace tchedge {

/// Polyhedral cone given by its generator list; the represented set is the
/// set of non-negative combinations.
struct GeneratorCone {
  int dim = 0;
  std::vector<std::vector<Rat>> generators;
};

/// Positions convertible into zero by a non-negative transfer. Generators
/// are (1+lambda_ij) e_i - e_j over all ordered pairs i != j.
GeneratorCone transfer_cone(const CostMatrix& costs);

/// Transfer cone plus the coordinate directions e_1..e_d.
GeneratorCone solvency_cone(const CostMatrix& costs);

/// Exact membership x in cone(generators), decided by an LP feasibility.
bool cone_contains(const GeneratorCone& cone, const std::vector<Rat>& x);

/// Partial ordering induced by the solvency cone: x >= y iff x - y in K.
bool dominates(const std::vector<Rat>& x, const std::vector<Rat>& y, const CostMatrix& costs);

/// Efficient friction: K proper, i.e. K cap (-K) = {0}. Decided by 2d
/// bounded LPs maximizing +-x_i over the boxed lineality slice.
bool check_ef(const CostMatrix& costs);

/// Dual-cone membership: w . g >= 0 for every solvency generator g.
bool dual_cone_contains(const CostMatrix& costs, const std::vector<Rat>& w);

struct Liquidation {
  Rat value;
  TransferMatrix transfer;
};

/// Largest c such that position - c*e_asset lies in the transfer cone, with
/// the transfer realizing it. asset is 0-based. Throws PreconditionError
/// ("position not liquidatable") when no transfer reaches the target axis.
Liquidation liquidation_value(const std::vector<Rat>& position, const CostMatrix& costs,
                              int asset);

}  // namespace tchedge
