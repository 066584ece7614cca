#pragma once

#include "tchedge/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tchedge::lp {

enum class Relation { less_eq, equal, greater_eq };
enum class Sense { minimize, maximize };
enum class Status { optimal, infeasible, unbounded };

struct Term {
  int var;
  Rat coeff;
};

struct Constraint {
  std::vector<Term> terms;
  Relation rel = Relation::equal;
  Rat rhs;
};

struct Bounds {
  std::optional<Rat> lower;
  std::optional<Rat> upper;
};

/// A linear program over exact rationals. Variables are referenced by the
/// index returned from add_variable; duplicate terms in a row are summed.
class LpProblem {
 public:
  int add_variable() { return add_variable(std::nullopt, std::nullopt); }
  int add_variable(std::optional<Rat> lower, std::optional<Rat> upper) {
    bounds_.push_back({std::move(lower), std::move(upper)});
    return static_cast<int>(bounds_.size()) - 1;
  }
  int add_nonneg_variable() { return add_variable(Rat(0), std::nullopt); }

  void add_constraint(std::vector<Term> terms, Relation rel, Rat rhs) {
    constraints_.push_back({std::move(terms), rel, std::move(rhs)});
  }
  void set_objective(std::vector<Term> terms, Sense sense) {
    objective_ = std::move(terms);
    sense_ = sense;
  }

  int variable_count() const { return static_cast<int>(bounds_.size()); }
  const std::vector<Bounds>& bounds() const { return bounds_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }
  Sense sense() const { return sense_; }

 private:
  std::vector<Bounds> bounds_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  Sense sense_ = Sense::minimize;
};

struct LpSolution {
  Status status = Status::infeasible;
  Rat value;                    // meaningful iff status == optimal
  std::vector<Rat> assignment;  // one entry per variable iff status == optimal
};

/// Two-phase exact simplex with Bland's rule. All comparisons are exact;
/// identical problems yield identical solutions. On optimal the returned
/// assignment is re-checked against every constraint and bound before the
/// call returns.
LpSolution solve_lp(const LpProblem& problem);

struct SolverStats {
  std::int64_t solves = 0;
  std::int64_t pivots = 0;
  std::int64_t max_micros = 0;  // slowest single solve seen since reset
};

SolverStats solver_stats();
void reset_solver_stats();

}  // namespace tchedge::lp
