#include "tchedge/frictionless.hpp"

#include "tchedge/errors.hpp"
#include "tchedge/lp.hpp"
#include "tchedge/quantile.hpp"
#include "tchedge/success.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace tchedge {

bool is_frictionless(const ScenarioTree& tree) {
  for (int id : tree.node_ids())
    if (!tree.node(id).costs.is_zero()) return false;
  return true;
}

namespace {

void require_frictionless(const ScenarioTree& tree) {
  if (!is_frictionless(tree))
    throw PreconditionError("operation requires zero transaction costs");
}

bool has_constant_price_asset(const ScenarioTree& tree) {
  for (int i = 0; i < tree.dimension(); ++i) {
    const Rat& base = tree.node(tree.root_id()).prices[i];
    bool constant = true;
    for (int id : tree.node_ids()) {
      if (tree.node(id).prices[i] != base) {
        constant = false;
        break;
      }
    }
    if (constant) return true;
  }
  return false;
}

Rat sum(const std::vector<Rat>& x) {
  Rat total(0);
  for (const Rat& v : x) total += v;
  return total;
}

// Martingale rows over leaf probabilities: for internal n and asset i every
// leaf under child c contributes (S^i(c) - S^i(n)) q_leaf.
struct MeasureSystem {
  std::vector<int> leaves;
  std::map<int, int> leaf_index;
  std::vector<std::vector<Rat>> rows;  // homogeneous martingale rows
};

MeasureSystem measure_system(const ScenarioTree& tree) {
  MeasureSystem sys;
  sys.leaves = tree.leaf_ids();
  for (size_t k = 0; k < sys.leaves.size(); ++k) sys.leaf_index[sys.leaves[k]] = static_cast<int>(k);

  std::vector<int> stack{tree.root_id()};
  std::vector<int> internal;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (!tree.is_leaf(id)) internal.push_back(id);
    for (int child : tree.node(id).children) stack.push_back(child);
  }
  std::sort(internal.begin(), internal.end());

  auto leaves_under = [&](int id) {
    std::vector<int> out, work{id};
    while (!work.empty()) {
      const int n = work.back();
      work.pop_back();
      if (tree.is_leaf(n)) out.push_back(n);
      for (int child : tree.node(n).children) work.push_back(child);
    }
    return out;
  };

  for (int id : internal) {
    const TreeNode& n = tree.node(id);
    for (int i = 0; i < tree.dimension(); ++i) {
      std::vector<Rat> row(sys.leaves.size(), Rat(0));
      bool nontrivial = false;
      for (int child : n.children) {
        const Rat diff = tree.node(child).prices[i] - n.prices[i];
        if (diff == 0) continue;
        nontrivial = true;
        for (int leaf : leaves_under(child)) row[sys.leaf_index.at(leaf)] = diff;
      }
      if (nontrivial) sys.rows.push_back(std::move(row));
    }
  }
  return sys;
}

bool strictly_positive_measure_exists(const ScenarioTree& tree, const MeasureSystem& sys) {
  (void)tree;
  // Homogeneous feasibility with q >= 1 stands in for q > 0: any strictly
  // positive measure scales up to it and the normalized solution is one.
  lp::LpProblem problem;
  std::vector<int> q;
  for (size_t k = 0; k < sys.leaves.size(); ++k)
    q.push_back(problem.add_variable(Rat(1), std::nullopt));
  for (const std::vector<Rat>& row : sys.rows) {
    std::vector<lp::Term> terms;
    for (size_t k = 0; k < row.size(); ++k)
      if (row[k] != 0) terms.push_back({q[k], row[k]});
    problem.add_constraint(std::move(terms), lp::Relation::equal, Rat(0));
  }
  problem.set_objective({}, lp::Sense::minimize);
  return lp::solve_lp(problem).status == lp::Status::optimal;
}

// Exact Gaussian elimination; reports consistency and uniqueness.
struct GaussResult {
  bool consistent = false;
  bool unique = false;
  std::vector<Rat> solution;
};

GaussResult solve_linear(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  const size_t rows = a.size();
  const size_t cols = rows ? a[0].size() : 0;
  std::vector<int> pivot_col_of_row;
  size_t row = 0;
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t pivot = row;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[row]);
    std::swap(b[pivot], b[row]);
    const Rat inv = Rat(1) / a[row][col];
    for (Rat& cell : a[row]) cell *= inv;
    b[row] *= inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Rat factor = a[r][col];
      for (size_t c = 0; c < cols; ++c) a[r][c] -= factor * a[row][c];
      b[r] -= factor * b[row];
    }
    pivot_col_of_row.push_back(static_cast<int>(col));
    ++row;
  }
  for (size_t r = row; r < rows; ++r) {
    if (b[r] != 0) return {};  // inconsistent
  }
  GaussResult result;
  result.consistent = true;
  result.unique = pivot_col_of_row.size() == cols;
  if (result.unique) {
    result.solution.assign(cols, Rat(0));
    for (size_t r = 0; r < pivot_col_of_row.size(); ++r)
      result.solution[pivot_col_of_row[r]] = b[r];
  }
  return result;
}

size_t matrix_rank(const std::vector<std::vector<Rat>>& a) {
  std::vector<std::vector<Rat>> m = a;
  const size_t rows = m.size();
  const size_t cols = rows ? m[0].size() : 0;
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t pivot = rank;
    while (pivot < rows && m[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[rank]);
    const Rat inv = Rat(1) / m[rank][col];
    for (Rat& cell : m[rank]) cell *= inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const Rat factor = m[r][col];
      for (size_t c = 0; c < cols; ++c) m[r][c] -= factor * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<std::map<int, Rat>> extreme_martingale_measures(const ScenarioTree& tree) {
  const MeasureSystem sys = measure_system(tree);
  const size_t n = sys.leaves.size();

  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  a.emplace_back(n, Rat(1));  // probabilities sum to one
  b.emplace_back(1);
  for (const std::vector<Rat>& row : sys.rows) {
    a.push_back(row);
    b.emplace_back(0);
  }
  const size_t rank = matrix_rank(a);

  std::set<std::vector<Rat>> seen;
  std::vector<std::map<int, Rat>> vertices;
  std::vector<size_t> support(rank);
  // Basic feasible solutions over all column subsets of size rank.
  auto visit = [&](const std::vector<size_t>& cols) {
    std::vector<std::vector<Rat>> sub(a.size(), std::vector<Rat>(cols.size()));
    for (size_t r = 0; r < a.size(); ++r)
      for (size_t c = 0; c < cols.size(); ++c) sub[r][c] = a[r][cols[c]];
    const GaussResult solved = solve_linear(std::move(sub), b);
    if (!solved.consistent || !solved.unique) return;
    for (const Rat& v : solved.solution)
      if (v < 0) return;
    std::vector<Rat> full(n, Rat(0));
    for (size_t c = 0; c < cols.size(); ++c) full[cols[c]] = solved.solution[c];
    if (!seen.insert(full).second) return;
    std::map<int, Rat> measure;
    for (size_t k = 0; k < n; ++k) measure[sys.leaves[k]] = full[k];
    vertices.push_back(std::move(measure));
  };
  auto recurse = [&](auto&& self, size_t start, size_t depth) -> void {
    if (depth == rank) {
      visit(support);
      return;
    }
    for (size_t c = start; c + (rank - depth - 1) < n; ++c) {
      support[depth] = c;
      self(self, c + 1, depth + 1);
    }
  };
  if (rank <= n) recurse(recurse, 0, 0);
  return vertices;
}

Rat scalarize(const ScenarioTree& tree, const std::vector<Rat>& x) {
  require_frictionless(tree);
  return sum(x);
}

std::map<int, Rat> scalarize(const ScenarioTree& tree, const Claim& claim) {
  require_frictionless(tree);
  std::map<int, Rat> out;
  for (const auto& [leaf, payoff] : claim.payoffs) out.emplace(leaf, sum(payoff));
  return out;
}

std::map<int, Rat> scalarize(const ScenarioTree& tree, const WealthPath& path) {
  require_frictionless(tree);
  std::map<int, Rat> out;
  for (const auto& [node, wealth] : path.values) out.emplace(node, sum(wealth));
  return out;
}

Rat emm_price(const ScenarioTree& tree, const std::map<int, Rat>& scalar_claim,
              bool certify_strict) {
  require_frictionless(tree);
  const MeasureSystem sys = measure_system(tree);
  for (int leaf : sys.leaves)
    if (!scalar_claim.count(leaf)) throw InputError("claim missing leaf " + std::to_string(leaf));
  if (certify_strict && !strictly_positive_measure_exists(tree, sys))
    throw PreconditionError("EMM violated: no equivalent martingale measure");

  lp::LpProblem problem;
  std::vector<int> q;
  for (size_t k = 0; k < sys.leaves.size(); ++k) q.push_back(problem.add_nonneg_variable());
  {
    std::vector<lp::Term> norm;
    for (int var : q) norm.push_back({var, Rat(1)});
    problem.add_constraint(std::move(norm), lp::Relation::equal, Rat(1));
  }
  for (const std::vector<Rat>& row : sys.rows) {
    std::vector<lp::Term> terms;
    for (size_t k = 0; k < row.size(); ++k)
      if (row[k] != 0) terms.push_back({q[k], row[k]});
    problem.add_constraint(std::move(terms), lp::Relation::equal, Rat(0));
  }
  std::vector<lp::Term> objective;
  for (size_t k = 0; k < sys.leaves.size(); ++k) {
    const Rat& c = scalar_claim.at(sys.leaves[k]);
    if (c != 0) objective.push_back({q[k], c});
  }
  problem.set_objective(std::move(objective), lp::Sense::maximize);

  const lp::LpSolution solution = lp::solve_lp(problem);
  if (solution.status == lp::Status::infeasible)
    throw PreconditionError("EMM violated: no martingale measure");
  if (solution.status != lp::Status::optimal)
    throw InternalError("EMM price LP is bounded over a probability simplex");
  return solution.value;
}

namespace {

// Deterministic in-library sampler for the correspondence check: rebalance
// to equal accounts first, then random non-negativity-preserving transfers.
class StrategySampler {
 public:
  StrategySampler(std::uint64_t seed) : eng_(seed) {}

  Rat unit_fraction() {  // in [0,1], denominator <= 16
    std::uniform_int_distribution<int> den(1, 16);
    const int q = den(eng_);
    std::uniform_int_distribution<int> num(0, q);
    return Rat(num(eng_), q);
  }
  bool coin() { return std::uniform_int_distribution<int>(0, 1)(eng_) == 1; }

  Strategy sample(const ScenarioTree& tree, const std::vector<Rat>& v0, bool rebalance_root) {
    const int d = tree.dimension();
    Strategy strategy = zero_strategy(tree);
    std::map<int, std::vector<Rat>> wealth;
    std::vector<int> order{tree.root_id()};
    for (size_t k = 0; k < order.size(); ++k)
      for (int child : tree.node(order[k]).children) order.push_back(child);

    for (int id : order) {
      const TreeNode& n = tree.node(id);
      std::vector<Rat> w(d);
      if (!n.parent) {
        w = v0;
      } else {
        const TreeNode& parent = tree.node(*n.parent);
        const std::vector<Rat>& prev = wealth.at(parent.id);
        for (int i = 0; i < d; ++i) w[i] = prev[i] * n.prices[i] / parent.prices[i];
      }
      TransferMatrix action(d);
      if (!n.parent && rebalance_root) {
        // Move every account to the average; zero-cost transfers make this
        // exact and leave each account non-negative afterwards.
        Rat total(0);
        for (const Rat& x : w) total += x;
        const Rat mean = total / d;
        std::vector<Rat> excess(d), deficit(d);
        for (int i = 0; i < d; ++i) {
          excess[i] = w[i] > mean ? w[i] - mean : Rat(0);
          deficit[i] = w[i] < mean ? mean - w[i] : Rat(0);
        }
        int j = 0;
        for (int i = 0; i < d; ++i) {
          while (excess[i] > 0) {
            while (j < d && deficit[j] == 0) ++j;
            if (j == d) break;
            const Rat move = std::min(excess[i], deficit[j]);
            action.at(i, j) += move;
            excess[i] -= move;
            deficit[j] -= move;
          }
        }
      } else {
        for (int i = 0; i < d; ++i) {
          if (w[i] <= 0) continue;
          Rat budget = w[i];
          for (int j = 0; j < d; ++j) {
            if (i == j || !coin()) continue;
            const Rat amount = budget * unit_fraction() / 2;
            action.at(i, j) += amount;
            budget -= amount;
          }
        }
      }
      const std::vector<Rat> effect = transfer_effect(action, n.costs);
      for (int i = 0; i < d; ++i) w[i] += effect[i];
      strategy.actions.insert_or_assign(id, std::move(action));
      wealth.emplace(id, std::move(w));
    }
    return strategy;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace

FlReport verify_fl_correspondence(const ScenarioTree& tree, const Claim& claim,
                                  const std::vector<Rat>& v0, const Rat& eps,
                                  int sample_strategies, std::uint64_t seed) {
  require_frictionless(tree);
  if (eps < 0 || eps > 1) throw InputError("eps must lie in [0,1]");
  // The scalar theory lives in the classical market, which carries a
  // riskless asset. Without one, martingale measures no longer price
  // super-hedges (general deflators do) and the correspondence fails.
  if (!has_constant_price_asset(tree))
    throw PreconditionError("scalar correspondence requires a constant-price asset");
  const MeasureSystem sys = measure_system(tree);
  if (!strictly_positive_measure_exists(tree, sys))
    throw PreconditionError("EMM violated: no equivalent martingale measure");

  FlReport report;
  report.eps = eps;
  const std::map<int, Rat> scalar_claim = scalarize(tree, claim);
  const Rat x0 = scalarize(tree, v0);

  // (a) cone success function vs the scalar one, on sampled strategies.
  StrategySampler sampler(seed);
  report.success_functions_match = true;
  const int samples = std::max(1, sample_strategies);
  for (int s = 0; s < samples; ++s) {
    const Strategy strategy = sampler.sample(tree, v0, true);
    const WealthPath path = run_strategy(tree, v0, strategy);
    const SuccessProfile profile = success_function(tree, path, claim);
    const std::map<int, Rat> scalar_wealth = scalarize(tree, path);
    for (int leaf : tree.leaf_ids()) {
      const Rat& x_t = scalar_wealth.at(leaf);
      const Rat& c = scalar_claim.at(leaf);
      const Rat scalar_phi = x_t >= c ? Rat(1) : x_t / c;
      if (profile.leaves.at(leaf).phi != scalar_phi) report.success_functions_match = false;
    }
    ++report.strategies_checked;
  }

  // (b) effectiveness optimum vs the scalar quantile LP over extreme
  // martingale measures.
  const std::vector<std::map<int, Rat>> measures = extreme_martingale_measures(tree);
  if (measures.empty()) throw InternalError("strict EMM held, so the measure polytope is nonempty");
  report.cone_value = maximize_effectiveness(tree, claim, v0).value;
  {
    lp::LpProblem problem;
    std::map<int, int> phi;
    for (int leaf : tree.leaf_ids()) phi[leaf] = problem.add_variable(Rat(0), Rat(1));
    for (const auto& measure : measures) {
      std::vector<lp::Term> row;
      for (int leaf : tree.leaf_ids()) {
        const Rat coeff = measure.at(leaf) * scalar_claim.at(leaf);
        if (coeff != 0) row.push_back({phi.at(leaf), coeff});
      }
      problem.add_constraint(std::move(row), lp::Relation::less_eq, x0);
    }
    std::vector<lp::Term> objective;
    for (int leaf : tree.leaf_ids()) objective.push_back({phi.at(leaf), tree.path_probability(leaf)});
    problem.set_objective(std::move(objective), lp::Sense::maximize);
    const lp::LpSolution solution = lp::solve_lp(problem);
    if (solution.status != lp::Status::optimal)
      throw InternalError("scalar quantile LP is feasible and bounded");
    report.scalar_value = solution.value;
  }
  report.effectiveness_matches = report.cone_value == report.scalar_value;

  // (c) minimal capital at effectiveness 1 - eps vs the scalar one.
  std::vector<Rat> direction(tree.dimension(), Rat(0));
  direction[0] = 1;
  report.cone_capital = min_capital_eps(tree, claim, direction, eps);
  {
    lp::LpProblem problem;
    const int x = problem.add_variable();
    std::map<int, int> phi;
    for (int leaf : tree.leaf_ids()) phi[leaf] = problem.add_variable(Rat(0), Rat(1));
    for (const auto& measure : measures) {
      std::vector<lp::Term> row{{x, Rat(-1)}};
      for (int leaf : tree.leaf_ids()) {
        const Rat coeff = measure.at(leaf) * scalar_claim.at(leaf);
        if (coeff != 0) row.push_back({phi.at(leaf), coeff});
      }
      problem.add_constraint(std::move(row), lp::Relation::less_eq, Rat(0));
    }
    std::vector<lp::Term> target;
    for (int leaf : tree.leaf_ids()) target.push_back({phi.at(leaf), tree.path_probability(leaf)});
    problem.add_constraint(std::move(target), lp::Relation::greater_eq, Rat(1) - eps);
    problem.set_objective({{x, Rat(1)}}, lp::Sense::minimize);
    const lp::LpSolution solution = lp::solve_lp(problem);
    if (solution.status != lp::Status::optimal)
      throw InternalError("scalar capital LP is feasible and bounded");
    report.scalar_capital = solution.value;
  }
  report.capital_matches = report.cone_capital == report.scalar_capital;
  return report;
}

}  // namespace tchedge
