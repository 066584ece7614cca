#include "tchedge/feasibility.hpp"

#include "tchedge/cones.hpp"
#include "tchedge/errors.hpp"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"

#include <doctest.h>

using namespace tchedge;
using testsupport::binomial_tree;
using testsupport::Rng;
using testsupport::up_claim;

TEST_CASE("frictionless binomial super-hedging") {
  const ScenarioTree tree = binomial_tree(Rat(0));
  const Claim claim = up_claim(tree);
  SUBCASE("capital at the price replicates") {
    const HedgeCheck hedge = hedging_feasible(tree, claim, {Rat(1, 3), Rat(0)});
    REQUIRE(hedge.feasible);
    REQUIRE(hedge.strategy.has_value());
    const WealthPath path = run_strategy(tree, {Rat(1, 3), Rat(0)}, *hedge.strategy);
    for (int leaf : tree.leaf_ids())
      CHECK(dominates(path.values.at(leaf), claim.payoffs.at(leaf), tree.node(leaf).costs));
  }
  SUBCASE("capital below the price fails") {
    CHECK(!hedging_feasible(tree, claim, {Rat(1, 4), Rat(0)}).feasible);
  }
  SUBCASE("zero claim from zero capital") {
    const HedgeCheck hedge = hedging_feasible(tree, zero_claim(tree), {Rat(0), Rat(0)});
    CHECK(hedge.feasible);
  }
}

TEST_CASE("minimal hedging capital") {
  const ScenarioTree tree = binomial_tree(Rat(0));
  const Claim claim = up_claim(tree);
  CHECK(min_hedging_capital(tree, claim, {Rat(1), Rat(0)}) == Rat(1, 3));
  CHECK(min_hedging_capital(tree, claim, {Rat(0), Rat(1)}) == Rat(1, 3));
  CHECK(min_hedging_capital(tree, zero_claim(tree), {Rat(1), Rat(0)}) == 0);
}

TEST_CASE("direction validation") {
  const ScenarioTree tree = binomial_tree(Rat(0));
  const Claim claim = up_claim(tree);
  CHECK_THROWS_AS(min_hedging_capital(tree, claim, {Rat(0), Rat(0)}), PreconditionError);
  CHECK_THROWS_AS(min_hedging_capital(tree, claim, {Rat(-1), Rat(1)}), PreconditionError);
  CHECK_THROWS_AS(min_hedging_capital(tree, claim, {Rat(1)}), InputError);
}

TEST_CASE("monotonicity in the endowment order") {
  Rng rng(301);
  for (int trial = 0; trial < 15; ++trial) {
    const ScenarioTree tree = testsupport::random_nas_tree(rng, testsupport::random_options(rng));
    const Claim claim = testsupport::random_positive_claim(rng, tree);
    std::vector<Rat> w(tree.dimension(), Rat(1));
    const Rat price = min_hedging_capital(tree, claim, w);
    std::vector<Rat> v(tree.dimension());
    for (int i = 0; i < tree.dimension(); ++i) v[i] = price * w[i];
    REQUIRE(hedging_feasible(tree, claim, v).feasible);
    // Anything dominating v in the initial cone stays feasible.
    std::vector<Rat> v_plus = v;
    for (int i = 0; i < tree.dimension(); ++i) v_plus[i] += rng.unit();
    CHECK(hedging_feasible(tree, claim, v_plus).feasible);
  }
}

TEST_CASE("the ray minimum is itself feasible") {
  Rng rng(307);
  for (int trial = 0; trial < 15; ++trial) {
    const ScenarioTree tree = testsupport::random_nas_tree(rng, testsupport::random_options(rng));
    const Claim claim = testsupport::random_positive_claim(rng, tree);
    std::vector<Rat> w(tree.dimension(), Rat(0));
    w[rng.pick(0, tree.dimension() - 1)] = 1;
    const Rat x = min_hedging_capital(tree, claim, w);
    std::vector<Rat> v(tree.dimension());
    for (int i = 0; i < tree.dimension(); ++i) v[i] = x * w[i];
    CHECK(hedging_feasible(tree, claim, v).feasible);
    // And one grid step below the minimum is not.
    for (int i = 0; i < tree.dimension(); ++i) v[i] = (x - Rat(1, 64)) * w[i];
    CHECK(!hedging_feasible(tree, claim, v).feasible);
  }
}

TEST_CASE("claims with a negative component hedge at the boundary") {
  const ScenarioTree tree = binomial_tree(Rat(1, 10));
  Claim claim;
  claim.payoffs[1] = {Rat(-1), Rat(23, 20)};  // inside K at the leaf
  claim.payoffs[2] = {Rat(0), Rat(0)};
  REQUIRE(validate(tree, &claim).empty());
  const std::vector<Rat> w{Rat(1), Rat(0)};
  const Rat x = min_hedging_capital(tree, claim, w);
  CHECK(hedging_feasible(tree, claim, {x, Rat(0)}).feasible);
  CHECK(!hedging_feasible(tree, claim, {x - Rat(1, 64), Rat(0)}).feasible);
}
