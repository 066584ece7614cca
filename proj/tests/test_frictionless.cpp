#include "tchedge/frictionless.hpp"

#include "tchedge/errors.hpp"
#include "tchedge/feasibility.hpp"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"

#include <doctest.h>

using namespace tchedge;
using testsupport::binomial_tree;
using testsupport::Rng;
using testsupport::up_claim;

TEST_CASE("frictionless detection") {
  CHECK(is_frictionless(binomial_tree(Rat(0))));
  CHECK(!is_frictionless(binomial_tree(Rat(1, 10))));
  CHECK(is_frictionless(testsupport::single_node_tree(2, CostMatrix(2))));
}

TEST_CASE("scalarization") {
  const ScenarioTree tree = binomial_tree(Rat(0));
  CHECK(scalarize(tree, {Rat(1, 6), Rat(0)}) == Rat(1, 6));
  CHECK(scalarize(tree, {Rat(0), Rat(0)}) == 0);
  const std::map<int, Rat> c = scalarize(tree, up_claim(tree));
  CHECK(c.at(1) == 1);
  CHECK(c.at(2) == 0);

  const ScenarioTree frictional = binomial_tree(Rat(1, 10));
  CHECK_THROWS_AS(scalarize(frictional, {Rat(1), Rat(0)}), PreconditionError);
}

TEST_CASE("martingale-measure price of the up claim") {
  const ScenarioTree tree = binomial_tree(Rat(0));
  const std::map<int, Rat> c = scalarize(tree, up_claim(tree));
  CHECK(emm_price(tree, c) == Rat(1, 3));
  CHECK(emm_price(tree, c, true) == Rat(1, 3));
  CHECK(emm_price(tree, {{1, Rat(0)}, {2, Rat(0)}}) == 0);
}

TEST_CASE("deterministic rise violates EMM") {
  const ScenarioTree tree = testsupport::deterministic_rise_tree(Rat(0));
  try {
    (void)emm_price(tree, {{1, Rat(1)}});
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("EMM violated") != std::string::npos);
  }
}

TEST_CASE("the binomial has exactly one martingale measure") {
  const auto measures = extreme_martingale_measures(binomial_tree(Rat(0)));
  REQUIRE(measures.size() == 1);
  CHECK(measures[0].at(1) == Rat(1, 3));
  CHECK(measures[0].at(2) == Rat(2, 3));
}

TEST_CASE("a trinomial market has several extreme measures") {
  const auto measures = extreme_martingale_measures(testsupport::trinomial_tree(Rat(0)));
  CHECK(measures.size() == 2);
  for (const auto& q : measures) {
    Rat expectation(0), mass(0);
    for (const auto& [leaf, weight] : q) {
      mass += weight;
      expectation += weight;  // asset 1 is flat
    }
    CHECK(mass == 1);
  }
}

TEST_CASE("correspondence on the canonical binomial") {
  const ScenarioTree tree = binomial_tree(Rat(0));
  const Claim claim = up_claim(tree);
  const FlReport report = verify_fl_correspondence(tree, claim, {Rat(1, 6), Rat(0)}, Rat(1, 4));
  CHECK(report.passed());
  CHECK(report.cone_value == Rat(3, 4));
  CHECK(report.scalar_value == Rat(3, 4));
  CHECK(report.cone_capital == Rat(1, 6));
  CHECK(report.scalar_capital == Rat(1, 6));
  CHECK(report.strategies_checked == 3);
}

TEST_CASE("correspondence when the claim is hedgeable") {
  const ScenarioTree tree = binomial_tree(Rat(0));
  const FlReport report =
      verify_fl_correspondence(tree, up_claim(tree), {Rat(1, 2), Rat(0)}, Rat(1, 4));
  CHECK(report.passed());
  CHECK(report.cone_value == 1);
}

TEST_CASE("correspondence with a zero claim") {
  const ScenarioTree tree = binomial_tree(Rat(0));
  const FlReport report =
      verify_fl_correspondence(tree, zero_claim(tree), {Rat(1, 6), Rat(0)}, Rat(1, 4));
  CHECK(report.passed());
  CHECK(report.cone_value == 1);
  CHECK(report.cone_capital == 0);
}

TEST_CASE("frictional trees are rejected") {
  const ScenarioTree tree = binomial_tree(Rat(1, 10));
  CHECK_THROWS_AS(verify_fl_correspondence(tree, up_claim(tree), {Rat(1, 6), Rat(0)}, Rat(1, 4)),
                  PreconditionError);
}

TEST_CASE("correspondence holds on random constructed-EMM markets") {
  Rng rng(601);
  for (int trial = 0; trial < 8; ++trial) {
    testsupport::TreeOptions opt = testsupport::random_options(rng);
    opt.frictionless = true;
    const ScenarioTree tree = testsupport::random_emm_tree(rng, opt);
    const Claim claim = testsupport::random_positive_claim(rng, tree);
    std::vector<Rat> w(tree.dimension(), Rat(1));
    const Rat price = min_hedging_capital(tree, claim, w);
    const Rat t = Rat(rng.pick(1, 8), 8);
    std::vector<Rat> v0(tree.dimension());
    for (int i = 0; i < tree.dimension(); ++i) v0[i] = t * price * w[i];
    const FlReport report = verify_fl_correspondence(tree, claim, v0, Rat(rng.pick(0, 4), 4));
    CHECK(report.success_functions_match);
    CHECK(report.effectiveness_matches);
    CHECK(report.capital_matches);
  }
}
