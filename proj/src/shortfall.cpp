#include "tchedge/shortfall.hpp"

#include "tchedge/errors.hpp"
#include "tchedge/feasibility.hpp"
#include "hedge_lp.hpp"

#include <json.hpp>

#include <istream>

namespace tchedge {

using nlohmann::json;

LossFunction check_loss(LossFunction loss) {
  const auto& pts = loss.breakpoints;
  if (pts.size() < 2) throw InputError("loss function needs at least two breakpoints");
  if (pts.front().first != 0) throw InputError("first breakpoint must be at x = 0");
  if (pts.front().second != 0) throw InputError("u(0) != 0");
  if (pts.back().first != 1) throw InputError("last breakpoint must be at x = 1");
  std::optional<Rat> prev_slope;
  for (size_t k = 1; k < pts.size(); ++k) {
    if (pts[k].first <= pts[k - 1].first)
      throw InputError("breakpoint " + std::to_string(k + 1) + ": x not strictly increasing");
    if (pts[k].second < pts[k - 1].second)
      throw InputError("breakpoint " + std::to_string(k + 1) + ": decreasing segment");
    const Rat slope = (pts[k].second - pts[k - 1].second) / (pts[k].first - pts[k - 1].first);
    if (prev_slope && slope < *prev_slope)
      throw InputError("breakpoint " + std::to_string(k + 1) + ": non-convex (slope drops " +
                       rat_to_string(*prev_slope) + " -> " + rat_to_string(slope) + ")");
    prev_slope = slope;
  }
  return loss;
}

LossFunction load_loss(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("loss file: syntax error: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("loss file: expected an array of [x, u] pairs");
  LossFunction loss;
  for (const json& pair : doc) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
      throw InputError("loss file: entries must be [x, u] rational-string pairs");
    loss.breakpoints.emplace_back(parse_rat(pair[0].get<std::string>()),
                                  parse_rat(pair[1].get<std::string>()));
  }
  return check_loss(std::move(loss));
}

Rat loss_value(const LossFunction& loss, const Rat& x) {
  const auto& pts = loss.breakpoints;
  if (x < 0 || x > 1) throw InputError("loss argument outside [0,1]");
  for (size_t k = 1; k < pts.size(); ++k) {
    if (x <= pts[k].first) {
      const Rat slope = (pts[k].second - pts[k - 1].second) / (pts[k].first - pts[k - 1].first);
      return pts[k - 1].second + slope * (x - pts[k - 1].first);
    }
  }
  return pts.back().second;
}

namespace {

void require_some_admissible(const ScenarioTree& tree, const std::vector<Rat>& v) {
  if (!hedging_feasible(tree, zero_claim(tree), v).feasible)
    throw PreconditionError("endowment supports no admissible strategy");
}

}  // namespace

ShortfallResult minimize_shortfall_risk(const ScenarioTree& tree, const Claim& claim,
                                        const std::vector<Rat>& v0, const LossFunction& loss) {
  const LossFunction u = check_loss(loss);
  require_some_admissible(tree, v0);

  detail::HedgeLpSpec spec;
  spec.tree = &tree;
  spec.claim = &claim;
  spec.endowment = &v0;
  spec.scale_claim_by_phi = true;
  detail::HedgeLp hedge = detail::build_hedge_lp(spec);

  // Epigraph: y >= every segment line evaluated at the shortfall 1 - phi;
  // convexity makes the max of the lines equal u.
  std::vector<lp::Term> objective;
  std::map<int, int> risk_vars;
  for (const auto& [leaf, phi_var] : hedge.phi_vars) {
    const int y = hedge.problem.add_variable();
    risk_vars[leaf] = y;
    objective.push_back({y, tree.path_probability(leaf)});
    const auto& pts = u.breakpoints;
    for (size_t k = 1; k < pts.size(); ++k) {
      const Rat slope = (pts[k].second - pts[k - 1].second) / (pts[k].first - pts[k - 1].first);
      // y >= u_k + slope*((1 - phi) - x_k)
      hedge.problem.add_constraint({{y, Rat(1)}, {phi_var, slope}}, lp::Relation::greater_eq,
                                   pts[k - 1].second + slope * (Rat(1) - pts[k - 1].first));
    }
  }
  hedge.problem.set_objective(std::move(objective), lp::Sense::minimize);

  const lp::LpSolution solution = lp::solve_lp(hedge.problem);
  if (solution.status != lp::Status::optimal)
    throw InternalError("shortfall LP is feasible (phi = 0) and bounded (u >= 0)");

  ShortfallResult result;
  result.phi = detail::extract_phi(hedge, solution);
  result.strategy = detail::extract_strategy(hedge, tree, solution);
  result.risk = solution.value;
  detail::verify_witness(tree, claim, v0, result.strategy, &result.phi);

  Rat recomputed(0);
  for (const auto& [leaf, phi] : result.phi)
    recomputed += tree.path_probability(leaf) * loss_value(u, Rat(1) - phi);
  if (recomputed != result.risk)
    throw InternalError("epigraph value disagrees with the interpolated loss");
  return result;
}

bool gamma_alpha_member(const ScenarioTree& tree, const Claim& claim, const std::vector<Rat>& v,
                        const LossFunction& loss, const Rat& alpha) {
  if (alpha < 0) throw InputError("alpha must be non-negative");
  return minimize_shortfall_risk(tree, claim, v, loss).risk <= alpha;
}

GridSearchResult minimize_shortfall_risk_grid(const ScenarioTree& tree, const Claim& claim,
                                              const std::vector<Rat>& v0,
                                              const std::function<Rat(const Rat&)>& loss,
                                              int steps) {
  const std::vector<int>& leaves = tree.leaf_ids();
  if (leaves.size() > 3)
    throw PreconditionError("grid mode handles at most 3 leaves");
  if (steps < 1) throw InputError("grid needs at least one step");
  require_some_admissible(tree, v0);

  std::vector<Rat> grid(steps + 1);
  for (int k = 0; k <= steps; ++k) grid[k] = Rat(k, steps);
  std::vector<Rat> grid_loss(steps + 1);
  for (int k = 0; k <= steps; ++k) grid_loss[k] = loss(Rat(1) - grid[k]);
  for (int k = 1; k <= steps; ++k)
    if (grid_loss[k] > grid_loss[k - 1])
      throw InputError("loss must be non-decreasing on [0,1]");

  std::vector<Rat> probs;
  for (int leaf : leaves) probs.push_back(tree.path_probability(leaf));

  auto feasible = [&](const std::vector<int>& levels) {
    std::map<int, Rat> phi;
    for (size_t i = 0; i < leaves.size(); ++i) phi[leaves[i]] = grid[levels[i]];
    return hedging_feasible(tree, scale_claim(claim, phi), v0).feasible;
  };

  GridSearchResult best;
  best.risk = Rat(0);
  bool have_best = false;
  std::vector<int> levels(leaves.size(), 0);

  // Descending scan per leaf. Feasibility is downward closed in phi, the
  // risk of a prefix only grows as its phi falls, and the innermost leaf
  // wants the largest feasible value, found by bisection on the grid.
  auto search = [&](auto&& self, size_t depth, const Rat& prefix_risk) -> void {
    if (depth + 1 == leaves.size()) {
      if (have_best && prefix_risk >= best.risk) return;
      int lo = 0, hi = steps;
      if (!feasible(levels)) return;  // levels[depth] == 0 infeasible
      while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        levels[depth] = mid;
        if (feasible(levels)) lo = mid;
        else hi = mid - 1;
      }
      levels[depth] = lo;
      const Rat risk = prefix_risk + probs[depth] * grid_loss[lo];
      if (!have_best || risk < best.risk) {
        have_best = true;
        best.risk = risk;
        best.phi.clear();
        for (size_t i = 0; i < leaves.size(); ++i) best.phi[leaves[i]] = grid[levels[i]];
      }
      levels[depth] = 0;
      return;
    }
    for (int level = steps; level >= 0; --level) {
      levels[depth] = level;
      const Rat risk = prefix_risk + probs[depth] * grid_loss[level];
      if (have_best && risk >= best.risk) break;  // smaller levels only get worse
      bool prefix_feasible = true;
      for (size_t i = depth + 1; i < leaves.size(); ++i) levels[i] = 0;
      if (level > 0 && !feasible(levels)) prefix_feasible = false;
      if (prefix_feasible) self(self, depth + 1, risk);
    }
    levels[depth] = 0;
  };
  search(search, 0, Rat(0));

  if (!have_best) throw InternalError("phi = 0 is always feasible from an admissible endowment");
  return best;
}

}  // namespace tchedge
