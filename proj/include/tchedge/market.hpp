#pragma once

#include "tchedge/rational.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tchedge {

/// Proportional-cost matrix: entry (i,j) is the fee rate for moving value
/// from account i to account j. Non-negative off-diagonal, zero diagonal.
class CostMatrix {
 public:
  explicit CostMatrix(int dim) : dim_(dim), entries_(static_cast<size_t>(dim) * dim, Rat(0)) {}
  CostMatrix(int dim, std::vector<Rat> entries);

  static CostMatrix uniform(int dim, const Rat& rate);

  int dim() const { return dim_; }
  const Rat& at(int i, int j) const { return entries_[static_cast<size_t>(i) * dim_ + j]; }
  Rat& at(int i, int j) { return entries_[static_cast<size_t>(i) * dim_ + j]; }
  bool is_zero() const;
  bool operator==(const CostMatrix&) const = default;

 private:
  int dim_;
  std::vector<Rat> entries_;
};

struct TreeNode {
  int id = 0;
  std::optional<int> parent;
  int time = 0;
  Rat prob;  // conditional probability given the parent; 1 at the root
  std::vector<Rat> prices;
  CostMatrix costs{0};
  std::vector<int> children;
};

/// Finite filtered market: rooted tree with per-node conditional
/// probabilities, strictly positive price vectors, and cost matrices.
/// Immutable once built; shared concurrent reads are safe.
class ScenarioTree {
 public:
  static ScenarioTree from_nodes(int dimension, int horizon, std::vector<TreeNode> nodes);

  int dimension() const { return dimension_; }
  int horizon() const { return horizon_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int root_id() const { return root_; }
  bool has_node(int id) const { return index_.count(id) != 0; }
  const TreeNode& node(int id) const;
  const std::vector<int>& node_ids() const { return ids_; }    // sorted
  const std::vector<int>& leaf_ids() const { return leaves_; }  // sorted
  bool is_leaf(int id) const { return node(id).children.empty(); }
  Rat path_probability(int id) const;
  /// Nodes on the root-to-node path, root first.
  std::vector<int> path_from_root(int id) const;

 private:
  int dimension_ = 0;
  int horizon_ = 0;
  int root_ = 0;
  std::vector<TreeNode> nodes_;
  std::map<int, int> index_;  // id -> position in nodes_
  std::vector<int> ids_;
  std::vector<int> leaves_;
};

/// Incremental construction for tests and generators; ids are sequential.
class TreeBuilder {
 public:
  explicit TreeBuilder(int dimension) : dimension_(dimension) {}
  int add_root(std::vector<Rat> prices, CostMatrix costs);
  int add_child(int parent, Rat prob, std::vector<Rat> prices, CostMatrix costs);
  /// Validates all tree invariants; throws InputError on any violation.
  ScenarioTree build() const;

 private:
  int dimension_;
  std::vector<TreeNode> nodes_;
};

/// Terminal payoff, one d-vector per leaf.
struct Claim {
  std::map<int, std::vector<Rat>> payoffs;
};

Claim zero_claim(const ScenarioTree& tree);
/// The modified claim H*phi; phi must cover every leaf of the claim.
Claim scale_claim(const Claim& claim, const std::map<int, Rat>& phi);

struct MarketData {
  ScenarioTree tree;
  std::optional<Claim> claim;
};

/// Parses the market file without value-level validation. Structural
/// problems (bad JSON, unknown fields, duplicate ids, cycles, claims off
/// leaves) throw InputError.
MarketData parse_market(std::istream& in);

/// parse_market + validate; throws InputError listing every violated
/// invariant if the report is non-empty.
MarketData load_market(std::istream& in);

/// Claim from either a bare array of {node, payoff} entries or a full
/// market file whose claim section is used; validated against the tree.
Claim load_claim(std::istream& in, const ScenarioTree& tree);

/// Value-level invariant report; empty means valid. Claim positivity is
/// checked against the terminal solvency cone at each leaf.
std::vector<std::string> validate(const ScenarioTree& tree, const Claim* claim);

std::string serialize(const ScenarioTree& tree, const Claim* claim);

std::vector<std::string> validate_cost_matrix(const CostMatrix& costs);

}  // namespace tchedge
