#include "tchedge/wealth.hpp"

#include "tchedge/cones.hpp"
#include "tchedge/errors.hpp"

#include <json.hpp>

#include <istream>

namespace tchedge {

using nlohmann::json;

Strategy zero_strategy(const ScenarioTree& tree) {
  Strategy strategy;
  for (int id : tree.node_ids()) strategy.actions.emplace(id, TransferMatrix(tree.dimension()));
  return strategy;
}

std::vector<Rat> transfer_effect(const TransferMatrix& transfer, const CostMatrix& costs) {
  const int d = costs.dim();
  if (transfer.dim() != d) throw InputError("transfer effect: dimension mismatch");
  std::vector<Rat> effect(d, Rat(0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      effect[i] += transfer.at(j, i);
      effect[i] -= (Rat(1) + costs.at(i, j)) * transfer.at(i, j);
    }
  }
  return effect;
}

WealthPath run_strategy(const ScenarioTree& tree, const std::vector<Rat>& v,
                        const Strategy& strategy) {
  const int d = tree.dimension();
  if (static_cast<int>(v.size()) != d) throw InputError("run_strategy: endowment has dimension " +
                                                        std::to_string(v.size()) + ", tree has " +
                                                        std::to_string(d));
  WealthPath path;
  // Root-first order: node_ids() is sorted but parents may have larger ids
  // in hand-built files, so walk explicitly.
  std::vector<int> order{tree.root_id()};
  for (size_t k = 0; k < order.size(); ++k) {
    for (int child : tree.node(order[k]).children) order.push_back(child);
  }
  for (int id : order) {
    const TreeNode& n = tree.node(id);
    auto action = strategy.actions.find(id);
    if (action == strategy.actions.end())
      throw InputError("strategy missing action at node " + std::to_string(id));
    if (action->second.dim() != d)
      throw InputError("strategy action at node " + std::to_string(id) + " has wrong dimension");

    std::vector<Rat> wealth(d);
    if (!n.parent) {
      wealth = v;  // S_{-1} = S_0: no drift at the root
    } else {
      const TreeNode& parent = tree.node(*n.parent);
      const std::vector<Rat>& prev = path.values.at(parent.id);
      for (int i = 0; i < d; ++i) wealth[i] = prev[i] * n.prices[i] / parent.prices[i];
    }
    const std::vector<Rat> effect = transfer_effect(action->second, n.costs);
    for (int i = 0; i < d; ++i) wealth[i] += effect[i];
    path.values.emplace(id, std::move(wealth));
  }
  return path;
}

bool is_admissible(const ScenarioTree& tree, const WealthPath& path) {
  const std::vector<Rat> zero(tree.dimension(), Rat(0));
  for (int leaf : tree.leaf_ids()) {
    auto it = path.values.find(leaf);
    if (it == path.values.end()) throw InputError("wealth path missing leaf " + std::to_string(leaf));
    if (!dominates(it->second, zero, tree.node(leaf).costs)) return false;
  }
  return true;
}

Strategy load_strategy(std::istream& in, const ScenarioTree& tree) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("strategy file: syntax error: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("strategy file: expected a top-level array");
  const int d = tree.dimension();
  Strategy strategy = zero_strategy(tree);
  for (const json& entry : doc) {
    if (!entry.is_object() || !entry.contains("node") || !entry.contains("transfers") ||
        entry.size() != 2)
      throw InputError("strategy file: entries must be {node, transfers}");
    if (!entry["node"].is_number_integer()) throw InputError("strategy file: node must be an integer");
    const int id = entry["node"].get<int>();
    if (!tree.has_node(id)) throw InputError("strategy references unknown node " + std::to_string(id));
    const json& rows = entry["transfers"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != d)
      throw InputError("strategy at node " + std::to_string(id) + ": transfers must be " +
                       std::to_string(d) + "x" + std::to_string(d));
    TransferMatrix transfer(d);
    for (int i = 0; i < d; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d)
        throw InputError("strategy at node " + std::to_string(id) + ": bad transfer row");
      for (int j = 0; j < d; ++j) {
        if (!rows[i][j].is_string())
          throw InputError("strategy at node " + std::to_string(id) +
                           ": entries must be rational strings");
        transfer.at(i, j) = parse_rat(rows[i][j].get<std::string>());
        if (i == j && transfer.at(i, j) != 0)
          throw InputError("strategy at node " + std::to_string(id) + ": nonzero diagonal");
        if (transfer.at(i, j) < 0)
          throw InputError("strategy at node " + std::to_string(id) + ": negative transfer");
      }
    }
    strategy.actions.insert_or_assign(id, std::move(transfer));
  }
  return strategy;
}

std::string serialize_strategy(const Strategy& strategy, const ScenarioTree& tree) {
  json doc = json::array();
  for (int id : tree.node_ids()) {
    auto it = strategy.actions.find(id);
    if (it == strategy.actions.end()) continue;
    json entry;
    entry["node"] = id;
    json rows = json::array();
    for (int i = 0; i < tree.dimension(); ++i) {
      json row = json::array();
      for (int j = 0; j < tree.dimension(); ++j) row.push_back(rat_to_string(it->second.at(i, j)));
      rows.push_back(std::move(row));
    }
    entry["transfers"] = std::move(rows);
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

}  // namespace tchedge
