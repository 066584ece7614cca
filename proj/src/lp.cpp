#include "tchedge/lp.hpp"

#include "tchedge/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>

namespace tchedge::lp {

namespace {

std::mutex stats_mutex;
SolverStats stats;

// Standard-form program: minimize cost . y  s.t.  rows . y == rhs, y >= 0.
// Original variables map onto columns via shift/negation/splitting.
struct ColumnMap {
  int pos = -1;        // column for the (shifted) variable
  int neg = -1;        // second column when the variable is free
  Rat offset;          // x = offset + sign * y
  int sign = 1;
};

struct Tableau {
  // rows[i] has width() columns followed by the rhs cell.
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> obj;  // reduced-cost row, same layout, rhs cell = -z
  std::vector<int> basis;
  int cols = 0;

  int rhs_col() const { return cols; }

  void pivot(int row, int col, std::int64_t& pivot_count) {
    ++pivot_count;
    std::vector<Rat>& pr = rows[row];
    const Rat inv = Rat(1) / pr[col];
    if (inv != 1) {
      for (Rat& cell : pr) {
        if (cell != 0) cell *= inv;
      }
    }
    auto eliminate = [&](std::vector<Rat>& target) {
      const Rat factor = target[col];
      if (factor == 0) return;
      for (int j = 0; j <= cols; ++j) {
        if (pr[j] != 0) target[j] -= factor * pr[j];
      }
      target[col] = 0;  // cancel residue exactly
    };
    for (size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) != row) eliminate(rows[i]);
    }
    eliminate(obj);
    basis[row] = col;
  }
};

constexpr std::int64_t kPivotCap = 2'000'000;

// Bland's rule: entering column is the lowest index with a negative reduced
// cost, the leaving row is the minimum-ratio row with the lowest basic index.
// Returns optimal or unbounded.
Status run_simplex(Tableau& t, const std::vector<bool>& banned, std::int64_t& pivot_count) {
  for (;;) {
    if (pivot_count > kPivotCap) throw InternalError("simplex pivot cap exceeded");
    int enter = -1;
    for (int j = 0; j < t.cols; ++j) {
      if (!banned[j] && t.obj[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return Status::optimal;

    int leave = -1;
    for (size_t i = 0; i < t.rows.size(); ++i) {
      const Rat& a = t.rows[i][enter];
      if (a <= 0) continue;
      if (leave < 0) {
        leave = static_cast<int>(i);
        continue;
      }
      const Rat& b_i = t.rows[i][t.rhs_col()];
      const Rat& b_l = t.rows[leave][t.rhs_col()];
      const Rat& a_l = t.rows[leave][enter];
      // b_i/a < b_l/a_l  <=>  b_i*a_l < b_l*a  (both pivots positive)
      const Rat lhs = b_i * a_l;
      const Rat rhs = b_l * a;
      if (lhs < rhs || (lhs == rhs && t.basis[i] < t.basis[leave])) leave = static_cast<int>(i);
    }
    if (leave < 0) return Status::unbounded;
    t.pivot(leave, enter, pivot_count);
  }
}

void price_out_basis(Tableau& t, const std::vector<Rat>& cost) {
  t.obj.assign(t.cols + 1, Rat(0));
  for (int j = 0; j < t.cols; ++j) t.obj[j] = cost[j];
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const Rat& c = cost[t.basis[i]];
    if (c == 0) continue;
    for (int j = 0; j <= t.cols; ++j) {
      if (t.rows[i][j] != 0) t.obj[j] -= c * t.rows[i][j];
    }
  }
}

Rat eval_terms(const std::vector<Term>& terms, const std::vector<Rat>& x) {
  Rat total(0);
  for (const Term& term : terms) total += term.coeff * x[term.var];
  return total;
}

void verify_solution(const LpProblem& p, const std::vector<Rat>& x) {
  for (int j = 0; j < p.variable_count(); ++j) {
    const Bounds& b = p.bounds()[j];
    if (b.lower && x[j] < *b.lower) throw InternalError("solver violated a lower bound");
    if (b.upper && x[j] > *b.upper) throw InternalError("solver violated an upper bound");
  }
  for (const Constraint& c : p.constraints()) {
    const Rat lhs = eval_terms(c.terms, x);
    const bool ok = c.rel == Relation::less_eq      ? lhs <= c.rhs
                    : c.rel == Relation::greater_eq ? lhs >= c.rhs
                                                    : lhs == c.rhs;
    if (!ok) throw InternalError("solver returned an assignment violating a constraint");
  }
}

LpSolution solve_impl(const LpProblem& problem, std::int64_t& pivot_count) {
  const int nvar = problem.variable_count();
  auto check_terms = [&](const std::vector<Term>& terms) {
    for (const Term& term : terms) {
      if (term.var < 0 || term.var >= nvar)
        throw InputError("constraint references unknown variable index " +
                         std::to_string(term.var));
    }
  };
  for (const Constraint& c : problem.constraints()) check_terms(c.terms);
  check_terms(problem.objective());

  // Column layout: shifted/negated originals first, bound rows appended to
  // the constraint list, then row slacks, then artificials.
  std::vector<ColumnMap> cmap(nvar);
  int cols = 0;
  std::vector<Constraint> extra_rows;
  for (int j = 0; j < nvar; ++j) {
    const Bounds& b = problem.bounds()[j];
    if (b.lower && b.upper && *b.lower > *b.upper)
      throw InputError("variable " + std::to_string(j) + " has lower bound > upper bound");
    if (b.lower) {
      cmap[j] = {cols++, -1, *b.lower, 1};
      if (b.upper) extra_rows.push_back({{{j, Rat(1)}}, Relation::less_eq, *b.upper});
    } else if (b.upper) {
      cmap[j] = {cols++, -1, *b.upper, -1};
    } else {
      cmap[j].pos = cols++;
      cmap[j].neg = cols++;
      cmap[j].offset = 0;
    }
  }

  std::vector<Constraint> all_rows = problem.constraints();
  all_rows.insert(all_rows.end(), extra_rows.begin(), extra_rows.end());
  const int nrows = static_cast<int>(all_rows.size());

  // Dense rows over the substituted columns, rhs adjusted by offsets.
  std::vector<std::vector<Rat>> dense(nrows);
  std::vector<Rat> rhs(nrows);
  std::vector<Relation> rel(nrows);
  for (int i = 0; i < nrows; ++i) {
    dense[i].assign(cols, Rat(0));
    rhs[i] = all_rows[i].rhs;
    rel[i] = all_rows[i].rel;
    for (const Term& term : all_rows[i].terms) {
      const ColumnMap& m = cmap[term.var];
      if (m.neg >= 0) {
        dense[i][m.pos] += term.coeff;
        dense[i][m.neg] -= term.coeff;
      } else {
        dense[i][m.pos] += m.sign * term.coeff;
        rhs[i] -= term.coeff * m.offset;
      }
    }
  }
  for (int i = 0; i < nrows; ++i) {
    if (rhs[i] < 0) {
      for (Rat& cell : dense[i]) cell = -cell;
      rhs[i] = -rhs[i];
      rel[i] = rel[i] == Relation::less_eq      ? Relation::greater_eq
               : rel[i] == Relation::greater_eq ? Relation::less_eq
                                                : Relation::equal;
    }
  }

  // Slack / artificial columns. A +1 slack doubles as the initial basis.
  const int struct_cols = cols;
  std::vector<int> slack_col(nrows, -1), art_col(nrows, -1);
  for (int i = 0; i < nrows; ++i) {
    if (rel[i] == Relation::less_eq) slack_col[i] = cols++;
    else if (rel[i] == Relation::greater_eq) slack_col[i] = cols++;
  }
  int first_art = cols;
  for (int i = 0; i < nrows; ++i) {
    if (rel[i] == Relation::less_eq) continue;
    art_col[i] = cols++;
  }

  Tableau t;
  t.cols = cols;
  t.basis.resize(nrows);
  t.rows.resize(nrows);
  for (int i = 0; i < nrows; ++i) {
    t.rows[i].assign(cols + 1, Rat(0));
    for (int j = 0; j < struct_cols; ++j) t.rows[i][j] = std::move(dense[i][j]);
    t.rows[i][t.rhs_col()] = rhs[i];
    if (rel[i] == Relation::less_eq) {
      t.rows[i][slack_col[i]] = 1;
      t.basis[i] = slack_col[i];
    } else {
      if (slack_col[i] >= 0) t.rows[i][slack_col[i]] = -1;  // surplus
      t.rows[i][art_col[i]] = 1;
      t.basis[i] = art_col[i];
    }
  }

  std::vector<bool> banned(cols, false);

  // Phase 1: drive the artificials to zero.
  if (first_art < cols) {
    std::vector<Rat> cost(cols, Rat(0));
    for (int j = first_art; j < cols; ++j) cost[j] = 1;
    price_out_basis(t, cost);
    run_simplex(t, banned, pivot_count);  // bounded below by 0, never unbounded
    const Rat phase1 = -t.obj[t.rhs_col()];
    if (phase1 > 0) return {Status::infeasible, Rat(0), {}};

    // Degenerate-pivot basic artificials out; rows that cannot pivot are
    // redundant (all-zero) and get dropped.
    for (int i = static_cast<int>(t.rows.size()) - 1; i >= 0; --i) {
      if (t.basis[i] < first_art) continue;
      int col = -1;
      for (int j = 0; j < first_art; ++j) {
        if (t.rows[i][j] != 0) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        t.pivot(i, col, pivot_count);
      } else {
        t.rows.erase(t.rows.begin() + i);
        t.basis.erase(t.basis.begin() + i);
      }
    }
    for (int j = first_art; j < cols; ++j) banned[j] = true;
  }

  // Phase 2 on the real objective (always minimized internally).
  std::vector<Rat> cost(cols, Rat(0));
  const int obj_sign = problem.sense() == Sense::maximize ? -1 : 1;
  for (const Term& term : problem.objective()) {
    const ColumnMap& m = cmap[term.var];
    if (m.neg >= 0) {
      cost[m.pos] += obj_sign * term.coeff;
      cost[m.neg] -= obj_sign * term.coeff;
    } else {
      cost[m.pos] += obj_sign * term.coeff * m.sign;
    }
  }
  price_out_basis(t, cost);
  if (run_simplex(t, banned, pivot_count) == Status::unbounded)
    return {Status::unbounded, Rat(0), {}};

  std::vector<Rat> y(cols, Rat(0));
  for (size_t i = 0; i < t.rows.size(); ++i) y[t.basis[i]] = t.rows[i][t.rhs_col()];

  LpSolution solution;
  solution.status = Status::optimal;
  solution.assignment.resize(nvar);
  for (int j = 0; j < nvar; ++j) {
    const ColumnMap& m = cmap[j];
    solution.assignment[j] =
        m.neg >= 0 ? y[m.pos] - y[m.neg] : m.offset + Rat(m.sign) * y[m.pos];
  }
  solution.value = eval_terms(problem.objective(), solution.assignment);
  verify_solution(problem, solution.assignment);
  return solution;
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
  const auto start = std::chrono::steady_clock::now();
  std::int64_t pivots = 0;
  LpSolution solution = solve_impl(problem, pivots);
  const auto micros =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start)
          .count();
  {
    std::lock_guard<std::mutex> lock(stats_mutex);
    ++stats.solves;
    stats.pivots += pivots;
    stats.max_micros = std::max(stats.max_micros, static_cast<std::int64_t>(micros));
  }
  return solution;
}

SolverStats solver_stats() {
  std::lock_guard<std::mutex> lock(stats_mutex);
  return stats;
}

void reset_solver_stats() {
  std::lock_guard<std::mutex> lock(stats_mutex);
  stats = {};
}

}  // namespace tchedge::lp
