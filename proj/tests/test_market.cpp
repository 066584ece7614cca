#include "tchedge/market.hpp"

#include "tchedge/errors.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace tchedge;

namespace {

const char* kBinomialMarket = R"({
  "dimension": 2,
  "horizon": 1,
  "nodes": [
    {"id": 0, "parent": null, "prob": "1", "prices": ["1", "1"],
     "costs": [["0", "0"], ["0", "0"]]},
    {"id": 1, "parent": 0, "prob": "1/2", "prices": ["1", "2"],
     "costs": [["0", "0"], ["0", "0"]]},
    {"id": 2, "parent": 0, "prob": "1/2", "prices": ["1", "0.5"],
     "costs": [["0", "0"], ["0", "0"]]}
  ],
  "claim": [
    {"node": 1, "payoff": ["1", "0"]},
    {"node": 2, "payoff": ["0", "0"]}
  ]
})";

MarketData load_text(const std::string& text) {
  std::istringstream in(text);
  return load_market(in);
}

}  // namespace

TEST_CASE("single-node market loads") {
  const std::string text = R"({
    "dimension": 2, "horizon": 0,
    "nodes": [{"id": 0, "parent": null, "prob": "1", "prices": ["1", "1"],
               "costs": [["0", "0"], ["0", "0"]]}]
  })";
  const MarketData data = load_text(text);
  CHECK(data.tree.horizon() == 0);
  CHECK(data.tree.node_count() == 1);
  CHECK(!data.claim);
}

TEST_CASE("binomial market loads and validates") {
  const MarketData data = load_text(kBinomialMarket);
  CHECK(data.tree.node_count() == 3);
  CHECK(data.tree.leaf_ids() == std::vector<int>{1, 2});
  CHECK(data.tree.path_probability(1) == Rat(1, 2));
  REQUIRE(data.claim);
  CHECK(data.claim->payoffs.at(1) == std::vector<Rat>{Rat(1), Rat(0)});
}

TEST_CASE("probabilities not summing to one are rejected") {
  std::string text = kBinomialMarket;
  const size_t pos = text.find("\"prob\": \"1/2\", \"prices\": [\"1\", \"0.5\"]");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 14, "\"prob\": \"1/3\",");
  try {
    load_text(text);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("sum != 1") != std::string::npos);
  }
}

TEST_CASE("unknown fields are rejected") {
  std::string text = kBinomialMarket;
  text.insert(text.find("\"dimension\""), "\"note\": \"x\", ");
  CHECK_THROWS_AS(load_text(text), InputError);
}

TEST_CASE("numeric entries must be rational strings") {
  std::string text = kBinomialMarket;
  const size_t pos = text.find("\"prob\": \"1/2\"");
  text.replace(pos, 13, "\"prob\": 0.5");
  CHECK_THROWS_AS(load_text(text), InputError);
}

TEST_CASE("validation reports non-positive prices") {
  ScenarioTree tree = testsupport::binomial_tree(Rat(0));
  std::string serialized = serialize(tree, nullptr);
  const size_t pos = serialized.find("\"2\"");
  REQUIRE(pos != std::string::npos);
  std::string broken = serialized;
  broken.replace(pos, 3, "\"0\"");
  std::istringstream in(broken);
  const MarketData parsed = parse_market(in);
  const auto report = validate(parsed.tree, nullptr);
  REQUIRE(report.size() == 1);
  CHECK(report[0].find("non-positive price") != std::string::npos);
}

TEST_CASE("claim below the terminal cone is reported") {
  const ScenarioTree tree = testsupport::binomial_tree(Rat(0));
  Claim claim;
  claim.payoffs[1] = {Rat(-1), Rat(0)};  // component sum < 0: outside K
  claim.payoffs[2] = {Rat(0), Rat(0)};
  const auto report = validate(tree, &claim);
  REQUIRE(report.size() == 1);
  CHECK(report[0].find("claim not >= 0") != std::string::npos);
}

TEST_CASE("claim with positive sum passes the frictionless cone check") {
  const ScenarioTree tree = testsupport::binomial_tree(Rat(0));
  Claim claim;
  claim.payoffs[1] = {Rat(-1), Rat(2)};
  claim.payoffs[2] = {Rat(0), Rat(0)};
  CHECK(validate(tree, &claim).empty());
}

TEST_CASE("claims must sit on leaves") {
  std::string text = kBinomialMarket;
  const size_t pos = text.find("\"node\": 1");
  text.replace(pos, 9, "\"node\": 0");
  CHECK_THROWS_AS(load_text(text), InputError);
}

TEST_CASE("round-trip through serialize is identity") {
  std::mt19937 rng(11);
  for (int instance = 0; instance < 20; ++instance) {
    TreeBuilder builder(2);
    const int root = builder.add_root({Rat(1), Rat(3, 2)}, CostMatrix::uniform(2, Rat(1, 10)));
    const int branches = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<Rat> probs;
    Rat total(0);
    for (int b = 0; b < branches; ++b) probs.push_back(Rat(1 + std::uniform_int_distribution<int>(0, 3)(rng)));
    for (const Rat& p : probs) total += p;
    for (int b = 0; b < branches; ++b) {
      const Rat ratio(std::uniform_int_distribution<int>(1, 5)(rng),
                      std::uniform_int_distribution<int>(1, 5)(rng));
      builder.add_child(root, probs[b] / total, {Rat(1), ratio * Rat(3, 2)},
                        CostMatrix::uniform(2, Rat(1, 20)));
    }
    const ScenarioTree tree = builder.build();
    std::istringstream in(serialize(tree, nullptr));
    const MarketData reloaded = load_market(in);
    CHECK(serialize(reloaded.tree, nullptr) == serialize(tree, nullptr));

    Rat mass(0);
    for (int leaf : tree.leaf_ids()) mass += tree.path_probability(leaf);
    CHECK(mass == 1);
  }
}

TEST_CASE("builder rejects invariant violations") {
  TreeBuilder builder(2);
  const int root = builder.add_root({Rat(1), Rat(1)}, CostMatrix(2));
  builder.add_child(root, Rat(1, 2), {Rat(1), Rat(2)}, CostMatrix(2));
  builder.add_child(root, Rat(1, 3), {Rat(1), Rat(1)}, CostMatrix(2));
  CHECK_THROWS_AS(builder.build(), InputError);
}

TEST_CASE("cost matrix invariants") {
  CostMatrix costs(2);
  costs.at(0, 1) = Rat(-1, 10);
  CHECK(validate_cost_matrix(costs).size() == 1);
  costs.at(0, 1) = Rat(1, 10);
  costs.at(1, 1) = Rat(1);
  CHECK(validate_cost_matrix(costs).size() == 1);
}

TEST_CASE("standalone claim files") {
  const ScenarioTree tree = testsupport::binomial_tree(Rat(0));
  SUBCASE("bare array") {
    std::istringstream in(R"([{"node": 1, "payoff": ["1", "0"]},
                              {"node": 2, "payoff": ["0", "0"]}])");
    const Claim claim = load_claim(in, tree);
    CHECK(claim.payoffs.at(1) == std::vector<Rat>{Rat(1), Rat(0)});
  }
  SUBCASE("market file with a claim section") {
    std::istringstream in(kBinomialMarket);
    CHECK(load_claim(in, tree).payoffs.size() == 2);
  }
  SUBCASE("missing leaves rejected") {
    std::istringstream in(R"([{"node": 1, "payoff": ["1", "0"]}])");
    CHECK_THROWS_AS(load_claim(in, tree), InputError);
  }
  SUBCASE("cone violation rejected") {
    std::istringstream in(R"([{"node": 1, "payoff": ["-1", "0"]},
                              {"node": 2, "payoff": ["0", "0"]}])");
    CHECK_THROWS_AS(load_claim(in, tree), InputError);
  }
}

TEST_CASE("scale_claim multiplies payoffs leafwise") {
  const ScenarioTree tree = testsupport::binomial_tree(Rat(0));
  const Claim claim = testsupport::up_claim(tree);
  const Claim scaled = scale_claim(claim, {{1, Rat(1, 2)}, {2, Rat(1)}});
  CHECK(scaled.payoffs.at(1) == std::vector<Rat>{Rat(1, 2), Rat(0)});
  CHECK(scaled.payoffs.at(2) == std::vector<Rat>{Rat(0), Rat(0)});
}
