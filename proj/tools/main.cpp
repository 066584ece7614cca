// Command-line surface: quantile hedging and shortfall risk on scenario-tree
// markets with proportional transaction costs, all arithmetic exact.
//
// Exit codes: 0 success (or a "true" domain answer), 1 domain false/none
// answers (documented per subcommand), 2 input or precondition errors.

#include "tchedge/cones.hpp"
#include "tchedge/consistency.hpp"
#include "tchedge/errors.hpp"
#include "tchedge/feasibility.hpp"
#include "tchedge/frictionless.hpp"
#include "tchedge/market.hpp"
#include "tchedge/quantile.hpp"
#include "tchedge/shortfall.hpp"
#include "tchedge/success.hpp"
#include "tchedge/wealth.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace tchedge;

struct CommonArgs {
  std::string market_path;
  std::string claim_path;     // claim may also live in the market file
  std::string strategy_path;  // input strategy (success)
  std::string loss_path;
  std::string v0_text;
  std::string direction_text;
  std::string eps_text = "1/4";
  std::string alpha_text = "0";
  std::string csv_path;
  std::string strategy_out_path;
  bool strict_emm = false;
  int jobs = 1;
  int asset = 1;
  std::optional<int> node;
};

MarketData load_market_file(const CommonArgs& args) {
  std::ifstream in(args.market_path);
  if (!in) throw InputError("cannot open market file: " + args.market_path);
  MarketData data = load_market(in);
  if (!args.claim_path.empty()) {
    std::ifstream claim_in(args.claim_path);
    if (!claim_in) throw InputError("cannot open claim file: " + args.claim_path);
    data.claim = load_claim(claim_in, data.tree);
  }
  return data;
}

const Claim& require_claim(const MarketData& data) {
  if (!data.claim) throw InputError("no claim given (embed one in the market file or pass --claim)");
  return *data.claim;
}

std::vector<Rat> parse_vector(const std::string& text, int dim, const char* what) {
  std::vector<Rat> v = parse_rat_vector(text);
  if (static_cast<int>(v.size()) != dim)
    throw InputError(std::string(what) + " must have " + std::to_string(dim) + " components");
  return v;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

void export_csv(const std::string& path, const std::string& content) {
  if (!path.empty()) write_file(path, content);
}

void export_strategy(const CommonArgs& args, const ScenarioTree& tree, const Strategy& strategy) {
  if (!args.strategy_out_path.empty())
    write_file(args.strategy_out_path, serialize_strategy(strategy, tree));
}

std::string phi_csv(const ScenarioTree& tree, const std::map<int, Rat>& phi) {
  std::string out = "leaf_id,probability,phi\n";
  for (const auto& [leaf, value] : phi) {
    out += std::to_string(leaf) + ',' + rat_to_string(tree.path_probability(leaf)) + ',' +
           rat_to_string(value) + '\n';
  }
  return out;
}

void print_phi_table(const ScenarioTree& tree, const std::map<int, Rat>& phi) {
  std::cout << "leaf  probability  phi\n";
  for (const auto& [leaf, value] : phi) {
    std::cout << leaf << "  " << rat_to_string(tree.path_probability(leaf)) << "  "
              << rat_to_string(value) << "\n";
  }
}

int cmd_validate(const CommonArgs& args) {
  std::ifstream in(args.market_path);
  if (!in) throw InputError("cannot open market file: " + args.market_path);
  const MarketData data = parse_market(in);
  const auto report = validate(data.tree, data.claim ? &*data.claim : nullptr);
  if (report.empty()) {
    std::cout << "valid: " << data.tree.node_count() << " nodes, horizon "
              << data.tree.horizon() << ", dimension " << data.tree.dimension() << "\n";
    return 0;
  }
  for (const auto& line : report) std::cout << line << "\n";
  return 1;
}

int cmd_check_ef(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  for (int id : data.tree.node_ids()) {
    if (!check_ef(data.tree.node(id).costs)) {
      std::cout << "EF fails at node " << id << "\n";
      return 1;
    }
  }
  std::cout << "EF holds at every node\n";
  return 0;
}

int cmd_check_nas(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  const auto system = find_strict_cps(data.tree);  // throws if EF fails
  if (!system) {
    std::cout << "no strictly consistent price system: NA^s cannot be certified\n";
    return 1;
  }
  std::cout << "strictly consistent price system found (certifies NA^s under EF)\n";
  if (!args.csv_path.empty()) {
    std::ostringstream csv;
    write_price_system_csv(csv, data.tree, *system);
    write_file(args.csv_path, csv.str());
  }
  return 0;
}

int cmd_hedge_check(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  const std::vector<Rat> v0 = parse_vector(args.v0_text, data.tree.dimension(), "--v0");
  const HedgeCheck hedge = hedging_feasible(data.tree, require_claim(data), v0);
  if (!hedge.feasible) {
    std::cout << "infeasible: no self-financing strategy hedges the claim from "
              << vector_to_string(v0) << "\n";
    return 1;
  }
  std::cout << "feasible: witness strategy hedges the claim from " << vector_to_string(v0) << "\n";
  export_strategy(args, data.tree, *hedge.strategy);
  return 0;
}

int cmd_hedge_price(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  const std::vector<Rat> w = parse_vector(args.direction_text, data.tree.dimension(), "--direction");
  const Rat price = min_hedging_capital(data.tree, require_claim(data), w);
  std::cout << "minimal hedging capital along " << vector_to_string(w) << ": "
            << rat_to_string(price) << "\n";
  return 0;
}

int cmd_quantile(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  const std::vector<Rat> v0 = parse_vector(args.v0_text, data.tree.dimension(), "--v0");
  const QuantileResult r = maximize_effectiveness(data.tree, require_claim(data), v0);
  std::cout << "maximal effectiveness: " << rat_to_string(r.value) << "\n";
  print_phi_table(data.tree, r.phi);
  export_csv(args.csv_path, phi_csv(data.tree, r.phi));
  export_strategy(args, data.tree, r.strategy);
  return 0;
}

int cmd_gamma_eps(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  const std::vector<Rat> v0 = parse_vector(args.v0_text, data.tree.dimension(), "--v0");
  const Rat eps = parse_rat(args.eps_text);
  const bool member = gamma_eps_member(data.tree, require_claim(data), v0, eps);
  std::cout << vector_to_string(v0) << (member ? " reaches" : " cannot reach")
            << " effectiveness 1 - " << rat_to_string(eps) << "\n";
  return member ? 0 : 1;
}

int cmd_shortfall_min(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  const std::vector<Rat> v0 = parse_vector(args.v0_text, data.tree.dimension(), "--v0");
  if (args.loss_path.empty()) throw InputError("--loss is required");
  std::ifstream loss_in(args.loss_path);
  if (!loss_in) throw InputError("cannot open loss file: " + args.loss_path);
  const LossFunction loss = load_loss(loss_in);
  const ShortfallResult r = minimize_shortfall_risk(data.tree, require_claim(data), v0, loss);
  std::cout << "minimal shortfall risk: " << rat_to_string(r.risk) << "\n";
  print_phi_table(data.tree, r.phi);
  export_csv(args.csv_path, phi_csv(data.tree, r.phi));
  export_strategy(args, data.tree, r.strategy);
  return 0;
}

int cmd_gamma_alpha(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  const std::vector<Rat> v0 = parse_vector(args.v0_text, data.tree.dimension(), "--v0");
  if (args.loss_path.empty()) throw InputError("--loss is required");
  std::ifstream loss_in(args.loss_path);
  if (!loss_in) throw InputError("cannot open loss file: " + args.loss_path);
  const LossFunction loss = load_loss(loss_in);
  const Rat alpha = parse_rat(args.alpha_text);
  const bool member = gamma_alpha_member(data.tree, require_claim(data), v0, loss, alpha);
  std::cout << vector_to_string(v0) << (member ? " keeps" : " cannot keep")
            << " shortfall risk within " << rat_to_string(alpha) << "\n";
  return member ? 0 : 1;
}

int cmd_success(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  const std::vector<Rat> v0 = parse_vector(args.v0_text, data.tree.dimension(), "--v0");
  if (args.strategy_path.empty()) throw InputError("--strategy is required");
  std::ifstream strategy_in(args.strategy_path);
  if (!strategy_in) throw InputError("cannot open strategy file: " + args.strategy_path);
  const Strategy strategy = load_strategy(strategy_in, data.tree);
  const WealthPath path = run_strategy(data.tree, v0, strategy);
  const SuccessProfile profile = success_function(data.tree, path, require_claim(data), args.jobs);
  std::cout << "effectiveness: " << rat_to_string(effectiveness(data.tree, profile)) << "\n";
  std::cout << "leaf  probability  hedged  phi  shortfall\n";
  for (const auto& [leaf, s] : profile.leaves) {
    std::cout << leaf << "  " << rat_to_string(data.tree.path_probability(leaf)) << "  "
              << (s.hedged ? "yes" : "no") << "  " << rat_to_string(s.phi) << "  "
              << rat_to_string(Rat(1) - s.phi) << "\n";
  }
  if (!args.csv_path.empty()) {
    std::ostringstream csv;
    write_success_csv(csv, data.tree, profile);
    write_file(args.csv_path, csv.str());
  }
  return 0;
}

int cmd_liquidate(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  const std::vector<Rat> position = parse_vector(args.v0_text, data.tree.dimension(), "--v0");
  if (args.asset < 1 || args.asset > data.tree.dimension())
    throw InputError("--asset must lie in 1.." + std::to_string(data.tree.dimension()));
  const int node = args.node.value_or(data.tree.root_id());
  const Liquidation liq =
      liquidation_value(position, data.tree.node(node).costs, args.asset - 1);
  std::cout << "liquidation value of " << vector_to_string(position) << " into asset "
            << args.asset << " at node " << node << ": " << rat_to_string(liq.value) << "\n";
  return 0;
}

int cmd_frictionless_verify(const CommonArgs& args) {
  const MarketData data = load_market_file(args);
  const std::vector<Rat> v0 = parse_vector(args.v0_text, data.tree.dimension(), "--v0");
  const Rat eps = parse_rat(args.eps_text);
  if (args.strict_emm) {
    const auto scalar_claim = scalarize(data.tree, require_claim(data));
    (void)emm_price(data.tree, scalar_claim, true);
  }
  const FlReport report = verify_fl_correspondence(data.tree, require_claim(data), v0, eps);
  std::cout << "success functions match:  " << (report.success_functions_match ? "yes" : "no")
            << " (" << report.strategies_checked << " strategies)\n";
  std::cout << "effectiveness optimum:    cone " << rat_to_string(report.cone_value) << ", scalar "
            << rat_to_string(report.scalar_value)
            << (report.effectiveness_matches ? " (match)" : " (MISMATCH)") << "\n";
  std::cout << "capital at 1-eps:         cone " << rat_to_string(report.cone_capital)
            << ", scalar " << rat_to_string(report.scalar_capital)
            << (report.capital_matches ? " (match)" : " (MISMATCH)") << "\n";
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantile hedging and shortfall risk under proportional transaction costs"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* cmd, bool needs_market = true) {
    auto* opt = cmd->add_option("--market", args.market_path, "market file (JSON)");
    if (needs_market) opt->required();
    cmd->add_option("--claim", args.claim_path,
                    "claim file: array of {node, payoff}, or a market file's claim section");
    cmd->add_option("--csv", args.csv_path, "write results as CSV");
    cmd->add_option("--strategy-out", args.strategy_out_path, "write the witness strategy");
    cmd->add_option("--jobs", args.jobs, "parallel leaf workers")->check(CLI::PositiveNumber);
    return cmd;
  };

  std::map<std::string, std::function<int()>> runners;

  runners["validate"] = [&] { return cmd_validate(args); };
  add_common(app.add_subcommand("validate", "check a market file against every invariant"));

  runners["check-ef"] = [&] { return cmd_check_ef(args); };
  add_common(app.add_subcommand("check-ef", "efficient friction at every node"));

  runners["check-nas"] = [&] { return cmd_check_nas(args); };
  add_common(app.add_subcommand("check-nas", "strict no-arbitrage certificate (needs EF)"));

  runners["hedge-check"] = [&] { return cmd_hedge_check(args); };
  auto* hedge_check = add_common(app.add_subcommand("hedge-check", "can --v0 super-hedge the claim"));
  hedge_check->add_option("--v0", args.v0_text, "initial endowment vector")->required();

  runners["hedge-price"] = [&] { return cmd_hedge_price(args); };
  auto* hedge_price =
      add_common(app.add_subcommand("hedge-price", "minimal hedging capital along a direction"));
  hedge_price->add_option("--direction", args.direction_text, "capital direction")->required();

  runners["quantile"] = [&] { return cmd_quantile(args); };
  auto* quantile = add_common(app.add_subcommand("quantile", "maximize expected success from --v0"));
  quantile->add_option("--v0", args.v0_text, "initial endowment vector")->required();

  runners["gamma-eps"] = [&] { return cmd_gamma_eps(args); };
  auto* gamma_eps =
      add_common(app.add_subcommand("gamma-eps", "is --v0 in the effectiveness level set"));
  gamma_eps->add_option("--v0", args.v0_text, "initial endowment vector")->required();
  gamma_eps->add_option("--eps", args.eps_text, "effectiveness slack in [0,1]")->required();

  runners["shortfall-min"] = [&] { return cmd_shortfall_min(args); };
  auto* shortfall_min =
      add_common(app.add_subcommand("shortfall-min", "minimize expected loss of the shortfall"));
  shortfall_min->add_option("--v0", args.v0_text, "initial endowment vector")->required();
  shortfall_min->add_option("--loss", args.loss_path, "loss function file")->required();

  runners["gamma-alpha"] = [&] { return cmd_gamma_alpha(args); };
  auto* gamma_alpha =
      add_common(app.add_subcommand("gamma-alpha", "is --v0 in the shortfall-risk level set"));
  gamma_alpha->add_option("--v0", args.v0_text, "initial endowment vector")->required();
  gamma_alpha->add_option("--loss", args.loss_path, "loss function file")->required();
  gamma_alpha->add_option("--alpha", args.alpha_text, "risk budget >= 0")->required();

  runners["success"] = [&] { return cmd_success(args); };
  auto* success =
      add_common(app.add_subcommand("success", "success profile of a strategy against the claim"));
  success->add_option("--v0", args.v0_text, "initial endowment vector")->required();
  success->add_option("--strategy", args.strategy_path, "strategy file to evaluate")->required();

  runners["liquidate"] = [&] { return cmd_liquidate(args); };
  auto* liquidate =
      add_common(app.add_subcommand("liquidate", "cone-consistent liquidation value of --v0"));
  liquidate->add_option("--v0", args.v0_text, "position vector")->required();
  liquidate->add_option("--asset", args.asset, "target asset (1-based)")->required();
  liquidate->add_option("--node", args.node, "node whose cost matrix applies (default root)");

  runners["frictionless-verify"] = [&] { return cmd_frictionless_verify(args); };
  auto* fl = add_common(
      app.add_subcommand("frictionless-verify", "scalar-theory correspondence on a zero-cost market"));
  fl->add_option("--v0", args.v0_text, "initial endowment vector")->required();
  fl->add_option("--eps", args.eps_text, "effectiveness slack for the capital check");
  fl->add_flag("--strict-emm", args.strict_emm, "additionally certify a strictly positive measure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits 0, parse failures are input errors
  }

  try {
    return runners.at(app.get_subcommands().front()->get_name())();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
