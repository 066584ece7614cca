#include "tchedge/market.hpp"

#include "tchedge/cones.hpp"
#include "tchedge/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>

namespace tchedge {

using nlohmann::json;

CostMatrix::CostMatrix(int dim, std::vector<Rat> entries) : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<size_t>(dim) * dim)
    throw InputError("cost matrix entry count does not match dimension");
}

CostMatrix CostMatrix::uniform(int dim, const Rat& rate) {
  CostMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (i != j) m.at(i, j) = rate;
  return m;
}

bool CostMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Rat& r) { return r == 0; });
}

std::vector<std::string> validate_cost_matrix(const CostMatrix& costs) {
  std::vector<std::string> report;
  for (int i = 0; i < costs.dim(); ++i) {
    for (int j = 0; j < costs.dim(); ++j) {
      if (i == j && costs.at(i, j) != 0)
        report.push_back("nonzero diagonal cost at (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ")");
      if (i != j && costs.at(i, j) < 0)
        report.push_back("negative cost at (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ")");
    }
  }
  return report;
}

// --- ScenarioTree ----------------------------------------------------------

ScenarioTree ScenarioTree::from_nodes(int dimension, int horizon, std::vector<TreeNode> nodes) {
  if (dimension < 1) throw InputError("dimension must be at least 1");
  if (horizon < 0) throw InputError("horizon must be non-negative");
  ScenarioTree tree;
  tree.dimension_ = dimension;
  tree.horizon_ = horizon;
  tree.nodes_ = std::move(nodes);

  int root = -1;
  for (size_t i = 0; i < tree.nodes_.size(); ++i) {
    TreeNode& n = tree.nodes_[i];
    if (!tree.index_.emplace(n.id, static_cast<int>(i)).second)
      throw InputError("duplicate node id " + std::to_string(n.id));
    if (static_cast<int>(n.prices.size()) != dimension)
      throw InputError("node " + std::to_string(n.id) + ": price vector has wrong dimension");
    if (n.costs.dim() != dimension)
      throw InputError("node " + std::to_string(n.id) + ": cost matrix has wrong dimension");
    n.children.clear();
    if (!n.parent) {
      if (root != -1) throw InputError("more than one root node");
      root = n.id;
    }
  }
  if (root == -1) throw InputError("no root node");
  tree.root_ = root;

  for (TreeNode& n : tree.nodes_) {
    if (!n.parent) continue;
    auto it = tree.index_.find(*n.parent);
    if (it == tree.index_.end())
      throw InputError("node " + std::to_string(n.id) + ": unknown parent " +
                       std::to_string(*n.parent));
    tree.nodes_[it->second].children.push_back(n.id);
  }
  for (TreeNode& n : tree.nodes_) std::sort(n.children.begin(), n.children.end());

  // Depth assignment doubles as reachability (cycle) detection.
  std::vector<int> stack{root};
  size_t seen = 0;
  tree.nodes_[tree.index_.at(root)].time = 0;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    ++seen;
    const TreeNode& n = tree.nodes_[tree.index_.at(id)];
    for (int child : n.children) {
      tree.nodes_[tree.index_.at(child)].time = n.time + 1;
      stack.push_back(child);
    }
  }
  if (seen != tree.nodes_.size())
    throw InputError("tree contains nodes unreachable from the root");

  for (const auto& [id, pos] : tree.index_) {
    tree.ids_.push_back(id);
    if (tree.nodes_[pos].children.empty()) tree.leaves_.push_back(id);
  }
  return tree;
}

const TreeNode& ScenarioTree::node(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown node id " + std::to_string(id));
  return nodes_[it->second];
}

Rat ScenarioTree::path_probability(int id) const {
  Rat p(1);
  const TreeNode* n = &node(id);
  while (n->parent) {
    p *= n->prob;
    n = &node(*n->parent);
  }
  return p;
}

std::vector<int> ScenarioTree::path_from_root(int id) const {
  std::vector<int> path;
  const TreeNode* n = &node(id);
  path.push_back(n->id);
  while (n->parent) {
    n = &node(*n->parent);
    path.push_back(n->id);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// --- TreeBuilder ------------------------------------------------------------

int TreeBuilder::add_root(std::vector<Rat> prices, CostMatrix costs) {
  TreeNode n;
  n.id = static_cast<int>(nodes_.size());
  n.parent = std::nullopt;
  n.prob = 1;
  n.prices = std::move(prices);
  n.costs = std::move(costs);
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

int TreeBuilder::add_child(int parent, Rat prob, std::vector<Rat> prices, CostMatrix costs) {
  TreeNode n;
  n.id = static_cast<int>(nodes_.size());
  n.parent = parent;
  n.prob = std::move(prob);
  n.prices = std::move(prices);
  n.costs = std::move(costs);
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

ScenarioTree TreeBuilder::build() const {
  std::vector<TreeNode> nodes = nodes_;
  // Horizon = max depth; from_nodes recomputes times.
  std::map<int, int> depth;
  int horizon = 0;
  for (const TreeNode& n : nodes) {
    const int d = n.parent ? depth.at(*n.parent) + 1 : 0;
    depth[n.id] = d;
    horizon = std::max(horizon, d);
  }
  ScenarioTree tree = ScenarioTree::from_nodes(dimension_, horizon, std::move(nodes));
  auto report = validate(tree, nullptr);
  if (!report.empty()) {
    std::string what = "invalid tree:";
    for (const std::string& line : report) what += "\n  " + line;
    throw InputError(what);
  }
  return tree;
}

// --- Claims ------------------------------------------------------------------

Claim zero_claim(const ScenarioTree& tree) {
  Claim claim;
  for (int leaf : tree.leaf_ids())
    claim.payoffs[leaf] = std::vector<Rat>(tree.dimension(), Rat(0));
  return claim;
}

Claim scale_claim(const Claim& claim, const std::map<int, Rat>& phi) {
  Claim scaled;
  for (const auto& [leaf, payoff] : claim.payoffs) {
    auto it = phi.find(leaf);
    if (it == phi.end()) throw InputError("phi missing leaf " + std::to_string(leaf));
    std::vector<Rat> scaled_payoff(payoff.size());
    for (size_t i = 0; i < payoff.size(); ++i) scaled_payoff[i] = payoff[i] * it->second;
    scaled.payoffs[leaf] = std::move(scaled_payoff);
  }
  return scaled;
}

// --- File format --------------------------------------------------------------

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::set<std::string>& required, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw InputError(where + ": unknown field \"" + key + "\"");
  }
  for (const std::string& key : required) {
    if (!obj.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  }
}

Rat json_rat(const json& value, const std::string& where) {
  if (!value.is_string()) throw InputError(where + ": numeric entries must be rational strings");
  try {
    return parse_rat(value.get<std::string>());
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

std::vector<Rat> json_rat_vector(const json& value, int dim, const std::string& where) {
  if (!value.is_array() || static_cast<int>(value.size()) != dim)
    throw InputError(where + ": expected an array of " + std::to_string(dim) + " entries");
  std::vector<Rat> out;
  out.reserve(dim);
  for (const auto& cell : value) out.push_back(json_rat(cell, where));
  return out;
}

int json_int(const json& value, const std::string& where) {
  if (!value.is_number_integer()) throw InputError(where + ": expected an integer");
  return value.get<int>();
}

}  // namespace

MarketData parse_market(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("market file: syntax error: ") + e.what());
  }
  require_keys(doc, {"dimension", "horizon", "nodes", "claim"}, {"dimension", "horizon", "nodes"},
               "market file");
  const int dimension = json_int(doc["dimension"], "dimension");
  if (dimension < 1) throw InputError("dimension must be at least 1");
  const int horizon = json_int(doc["horizon"], "horizon");
  if (horizon < 0) throw InputError("horizon must be non-negative");
  if (!doc["nodes"].is_array()) throw InputError("\"nodes\" must be an array");

  std::vector<TreeNode> nodes;
  for (const json& jn : doc["nodes"]) {
    require_keys(jn, {"id", "parent", "prob", "prices", "costs"},
                 {"id", "parent", "prob", "prices", "costs"}, "node");
    TreeNode n;
    n.id = json_int(jn["id"], "node id");
    const std::string where = "node " + std::to_string(n.id);
    if (!jn["parent"].is_null()) n.parent = json_int(jn["parent"], where + ": parent");
    n.prob = json_rat(jn["prob"], where + ": prob");
    n.prices = json_rat_vector(jn["prices"], dimension, where + ": prices");
    if (!jn["costs"].is_array() || static_cast<int>(jn["costs"].size()) != dimension)
      throw InputError(where + ": costs must be a " + std::to_string(dimension) + "x" +
                       std::to_string(dimension) + " array");
    std::vector<Rat> entries;
    for (const json& row : jn["costs"]) {
      auto parsed = json_rat_vector(row, dimension, where + ": costs");
      entries.insert(entries.end(), parsed.begin(), parsed.end());
    }
    n.costs = CostMatrix(dimension, std::move(entries));
    nodes.push_back(std::move(n));
  }

  MarketData data{ScenarioTree::from_nodes(dimension, horizon, std::move(nodes)), std::nullopt};

  if (doc.contains("claim")) {
    if (!doc["claim"].is_array()) throw InputError("\"claim\" must be an array");
    Claim claim;
    for (const json& jc : doc["claim"]) {
      require_keys(jc, {"node", "payoff"}, {"node", "payoff"}, "claim entry");
      const int id = json_int(jc["node"], "claim node");
      if (!data.tree.has_node(id))
        throw InputError("claim references unknown node " + std::to_string(id));
      if (!data.tree.is_leaf(id))
        throw InputError("claim attached to non-leaf node " + std::to_string(id));
      if (claim.payoffs.count(id))
        throw InputError("duplicate claim entry for node " + std::to_string(id));
      claim.payoffs[id] =
          json_rat_vector(jc["payoff"], dimension, "claim at node " + std::to_string(id));
    }
    data.claim = std::move(claim);
  }
  return data;
}

MarketData load_market(std::istream& in) {
  MarketData data = parse_market(in);
  auto report = validate(data.tree, data.claim ? &*data.claim : nullptr);
  if (!report.empty()) {
    std::string what = "invalid market:";
    for (const std::string& line : report) what += "\n  " + line;
    throw InputError(what);
  }
  return data;
}

Claim load_claim(std::istream& in, const ScenarioTree& tree) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("claim file: syntax error: ") + e.what());
  }
  json entries;
  if (doc.is_array()) {
    entries = std::move(doc);
  } else if (doc.is_object() && doc.contains("claim")) {
    entries = doc["claim"];
    if (!entries.is_array()) throw InputError("claim file: \"claim\" must be an array");
  } else {
    throw InputError("claim file: expected an array of {node, payoff} or a market with a claim");
  }

  Claim claim;
  for (const json& jc : entries) {
    require_keys(jc, {"node", "payoff"}, {"node", "payoff"}, "claim entry");
    const int id = json_int(jc["node"], "claim node");
    if (!tree.has_node(id)) throw InputError("claim references unknown node " + std::to_string(id));
    if (!tree.is_leaf(id))
      throw InputError("claim attached to non-leaf node " + std::to_string(id));
    if (claim.payoffs.count(id))
      throw InputError("duplicate claim entry for node " + std::to_string(id));
    claim.payoffs[id] =
        json_rat_vector(jc["payoff"], tree.dimension(), "claim at node " + std::to_string(id));
  }
  auto report = validate(tree, &claim);
  if (!report.empty()) {
    std::string what = "invalid claim:";
    for (const std::string& line : report) what += "\n  " + line;
    throw InputError(what);
  }
  return claim;
}

std::vector<std::string> validate(const ScenarioTree& tree, const Claim* claim) {
  std::vector<std::string> report;
  auto note = [&](int id, const std::string& msg) {
    report.push_back("node " + std::to_string(id) + ": " + msg);
  };

  for (int id : tree.node_ids()) {
    const TreeNode& n = tree.node(id);
    if (!n.parent && n.prob != 1) note(id, "root probability must be 1");
    if (n.parent && n.prob <= 0) note(id, "non-positive conditional probability");
    for (const Rat& price : n.prices)
      if (price <= 0) {
        note(id, "non-positive price");
        break;
      }
    for (const std::string& msg : validate_cost_matrix(n.costs)) note(id, msg);
    if (!n.children.empty()) {
      Rat total(0);
      for (int child : n.children) total += tree.node(child).prob;
      if (total != 1) note(id, "child probabilities sum != 1 (got " + rat_to_string(total) + ")");
    } else if (n.time != tree.horizon()) {
      note(id, "leaf at time " + std::to_string(n.time) + " != horizon " +
                   std::to_string(tree.horizon()));
    }
    if (n.time > tree.horizon()) note(id, "node beyond the horizon");
  }

  if (claim) {
    for (int leaf : tree.leaf_ids()) {
      auto it = claim->payoffs.find(leaf);
      if (it == claim->payoffs.end()) {
        note(leaf, "claim missing payoff");
        continue;
      }
      if (static_cast<int>(it->second.size()) != tree.dimension()) {
        note(leaf, "claim payoff has wrong dimension");
        continue;
      }
      const GeneratorCone cone = solvency_cone(tree.node(leaf).costs);
      if (!cone_contains(cone, it->second)) note(leaf, "claim not >= 0 in the terminal cone");
    }
    for (const auto& [id, payoff] : claim->payoffs) {
      (void)payoff;
      if (!tree.has_node(id) || !tree.is_leaf(id))
        report.push_back("claim attached to non-leaf node " + std::to_string(id));
    }
  }
  return report;
}

std::string serialize(const ScenarioTree& tree, const Claim* claim) {
  json doc;
  doc["dimension"] = tree.dimension();
  doc["horizon"] = tree.horizon();
  doc["nodes"] = json::array();
  for (int id : tree.node_ids()) {
    const TreeNode& n = tree.node(id);
    json jn;
    jn["id"] = n.id;
    if (n.parent) jn["parent"] = *n.parent;
    else jn["parent"] = nullptr;
    jn["prob"] = rat_to_string(n.prob);
    json prices = json::array();
    for (const Rat& price : n.prices) prices.push_back(rat_to_string(price));
    jn["prices"] = std::move(prices);
    json costs = json::array();
    for (int i = 0; i < tree.dimension(); ++i) {
      json row = json::array();
      for (int j = 0; j < tree.dimension(); ++j) row.push_back(rat_to_string(n.costs.at(i, j)));
      costs.push_back(std::move(row));
    }
    jn["costs"] = std::move(costs);
    doc["nodes"].push_back(std::move(jn));
  }
  if (claim) {
    doc["claim"] = json::array();
    for (const auto& [id, payoff] : claim->payoffs) {
      json jc;
      jc["node"] = id;
      json values = json::array();
      for (const Rat& v : payoff) values.push_back(rat_to_string(v));
      jc["payoff"] = std::move(values);
      doc["claim"].push_back(std::move(jc));
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace tchedge
