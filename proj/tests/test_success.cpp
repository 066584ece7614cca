#include "tchedge/success.hpp"

#include "tchedge/cones.hpp"
#include "tchedge/errors.hpp"
#include "tchedge/feasibility.hpp"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"

#include <doctest.h>

#include <sstream>

using namespace tchedge;
using testsupport::binomial_tree;
using testsupport::Rng;

TEST_CASE("optimal proportional transfer") {
  const CostMatrix friction = CostMatrix::uniform(2, Rat(1, 10));
  SUBCASE("asymmetric wealth against the unit claim") {
    const ProportionalTransfer best =
        optimal_proportional_transfer({Rat(1), Rat(0)}, {Rat(1), Rat(1)}, friction);
    CHECK(best.ratio == Rat(10, 21));
    // Replaying the witness lands exactly on ratio * claim.
    const std::vector<Rat> effect = transfer_effect(best.transfer, friction);
    CHECK(Rat(1) + effect[0] == best.ratio);
    CHECK(Rat(0) + effect[1] == best.ratio);
  }
  SUBCASE("already proportional wealth keeps its scale") {
    CHECK(optimal_proportional_transfer({Rat(1, 2), Rat(1, 2)}, {Rat(1), Rat(1)}, friction).ratio ==
          Rat(1, 2));
  }
  SUBCASE("frictionless ratio is the ratio of sums") {
    CHECK(optimal_proportional_transfer({Rat(1), Rat(0)}, {Rat(1), Rat(1)}, CostMatrix(2)).ratio ==
          Rat(1, 2));
  }
  SUBCASE("zero claim component rejected under friction") {
    CHECK_THROWS_AS(optimal_proportional_transfer({Rat(1), Rat(0)}, {Rat(1), Rat(0)}, friction),
                    PreconditionError);
  }
  SUBCASE("frictionless needs only a positive claim sum") {
    CHECK(optimal_proportional_transfer({Rat(1, 2), Rat(0)}, {Rat(1), Rat(0)}, CostMatrix(2))
              .ratio == Rat(1, 2));
    CHECK_THROWS_AS(
        optimal_proportional_transfer({Rat(1), Rat(0)}, {Rat(0), Rat(0)}, CostMatrix(2)),
        PreconditionError);
  }
  SUBCASE("inadmissible wealth rejected") {
    CHECK_THROWS_AS(optimal_proportional_transfer({Rat(-6, 5), Rat(1)}, {Rat(1), Rat(1)}, friction),
                    PreconditionError);
  }
}

TEST_CASE("success function per leaf") {
  const ScenarioTree tree = binomial_tree(Rat(1, 10));
  Claim claim;
  claim.payoffs[1] = {Rat(1), Rat(1)};
  claim.payoffs[2] = {Rat(0), Rat(0)};

  WealthPath path;
  path.values[0] = {Rat(1), Rat(1)};
  path.values[1] = {Rat(1), Rat(0)};  // unhedged against (1,1)
  path.values[2] = {Rat(2), Rat(2)};  // hedged against zero
  const SuccessProfile profile = success_function(tree, path, claim);

  CHECK(!profile.leaves.at(1).hedged);
  CHECK(profile.leaves.at(1).phi == Rat(10, 21));
  CHECK(profile.leaves.at(1).witness.has_value());
  CHECK(profile.leaves.at(2).hedged);
  CHECK(profile.leaves.at(2).phi == 1);
  CHECK(!profile.leaves.at(2).witness.has_value());

  SUBCASE("fully hedged leaf") {
    path.values[1] = {Rat(2), Rat(2)};
    const SuccessProfile hedged = success_function(tree, path, claim);
    CHECK(hedged.leaves.at(1).hedged);
    CHECK(hedged.leaves.at(1).phi == 1);
  }
  SUBCASE("shortfall is the complement") {
    const std::map<int, Rat> s = shortfall(profile);
    CHECK(s.at(1) == Rat(11, 21));
    CHECK(s.at(2) == 0);
  }
  SUBCASE("effectiveness weights by path probability") {
    CHECK(effectiveness(tree, profile) == Rat(1, 2) * Rat(10, 21) + Rat(1, 2));
  }
  SUBCASE("parallel evaluation matches sequential") {
    const SuccessProfile parallel = success_function(tree, path, claim, 4);
    CHECK(parallel.leaves.at(1).phi == profile.leaves.at(1).phi);
    CHECK(parallel.leaves.at(2).phi == profile.leaves.at(2).phi);
  }
  SUBCASE("csv export") {
    std::ostringstream out;
    write_success_csv(out, tree, profile);
    CHECK(out.str() ==
          "leaf_id,probability,hedged,phi,shortfall\n"
          "1,1/2,0,10/21,11/21\n"
          "2,1/2,1,1,0\n");
  }
}

TEST_CASE("inadmissible path rejected") {
  const ScenarioTree tree = binomial_tree(Rat(1, 10));
  WealthPath path;
  path.values[0] = {Rat(1), Rat(1)};
  path.values[1] = {Rat(-6, 5), Rat(1)};
  path.values[2] = {Rat(1), Rat(1)};
  CHECK_THROWS_AS(success_function(tree, path, testsupport::up_claim(tree)), PreconditionError);
}

TEST_CASE("effectiveness endpoints") {
  const ScenarioTree tree = binomial_tree(Rat(0));
  SuccessProfile profile;
  profile.leaves[1] = {true, Rat(1), std::nullopt};
  profile.leaves[2] = {true, Rat(1), std::nullopt};
  CHECK(effectiveness(tree, profile) == 1);
  profile.leaves[1].phi = 0;
  profile.leaves[2].phi = 0;
  CHECK(effectiveness(tree, profile) == 0);
}

TEST_CASE("scaling anchor: c*H reaches exactly c") {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = rng.pick(2, 3);
    const CostMatrix costs = testsupport::random_costs(rng, d);
    std::vector<Rat> h(d);
    for (Rat& x : h) x = rng.positive();
    Rat c = rng.unit();
    if (c == 1) c = Rat(1, 2);
    std::vector<Rat> v(d);
    for (int i = 0; i < d; ++i) v[i] = c * h[i];
    CHECK(optimal_proportional_transfer(v, h, costs).ratio == c);
  }
}

TEST_CASE("monotonicity of the proportional ratio in the cone order") {
  Rng rng(103);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int d = rng.pick(2, 3);
    const CostMatrix costs = testsupport::random_costs(rng, d);
    std::vector<Rat> h(d), v(d), bump(d);
    for (Rat& x : h) x = rng.positive();
    for (int i = 0; i < d; ++i) v[i] = rng.unit() * h[i];
    std::vector<Rat> v_up = v;
    for (int i = 0; i < d; ++i) v_up[i] += rng.unit() / 4;  // v' >= v componentwise
    if (dominates(v, h, costs) || dominates(v_up, h, costs)) continue;
    ++compared;
    CHECK(optimal_proportional_transfer(v_up, h, costs).ratio >=
          optimal_proportional_transfer(v, h, costs).ratio);
  }
  CHECK(compared > 10);
}

TEST_CASE("frictionless ratio reduces to the scalar quotient") {
  Rng rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = rng.pick(2, 3);
    std::vector<Rat> h(d), v(d);
    Rat sum_h(0), sum_v(0);
    for (Rat& x : h) {
      x = rng.positive();
      sum_h += x;
    }
    for (Rat& x : v) {
      x = rng.rat(0, 6);
      sum_v += x;
    }
    if (sum_v >= sum_h) continue;
    CHECK(optimal_proportional_transfer(v, h, CostMatrix(d)).ratio == sum_v / sum_h);
  }
}

TEST_CASE("unhedged values stay inside [0,1) and hedged means exactly 1") {
  Rng rng(109);
  for (int trial = 0; trial < 25; ++trial) {
    const ScenarioTree tree = testsupport::random_tree(rng, testsupport::random_options(rng));
    const Claim claim = testsupport::random_positive_claim(rng, tree);
    const std::vector<Rat> v = testsupport::random_nonneg_endowment(rng, tree.dimension());
    const Strategy strategy = testsupport::random_admissible_strategy(rng, tree, v);
    const WealthPath path = run_strategy(tree, v, strategy);
    const SuccessProfile profile = success_function(tree, path, claim);
    for (const auto& [leaf, leaf_success] : profile.leaves) {
      if (leaf_success.hedged) {
        CHECK(leaf_success.phi == 1);
      } else {
        CHECK(leaf_success.phi >= 0);
        CHECK(leaf_success.phi < 1);
      }
      CHECK(leaf_success.witness.has_value() == !leaf_success.hedged);
    }
  }
}

TEST_CASE("an admissible strategy hedges its own scaled claim") {
  Rng rng(113);
  for (int trial = 0; trial < 20; ++trial) {
    const ScenarioTree tree = testsupport::random_tree(rng, testsupport::random_options(rng));
    const Claim claim = testsupport::random_positive_claim(rng, tree);
    const std::vector<Rat> v = testsupport::random_nonneg_endowment(rng, tree.dimension());
    const Strategy strategy = testsupport::random_admissible_strategy(rng, tree, v);
    const WealthPath path = run_strategy(tree, v, strategy);
    const SuccessProfile profile = success_function(tree, path, claim);
    std::map<int, Rat> phi;
    for (const auto& [leaf, leaf_success] : profile.leaves) phi[leaf] = leaf_success.phi;
    CHECK(hedging_feasible(tree, scale_claim(claim, phi), v).feasible);
  }
}

TEST_CASE("hedging a scaled claim dominates the scale leafwise") {
  Rng rng(127);
  for (int trial = 0; trial < 20; ++trial) {
    const ScenarioTree tree = testsupport::random_nas_tree(rng, testsupport::random_options(rng));
    const Claim claim = testsupport::random_positive_claim(rng, tree);
    const std::map<int, Rat> phi = testsupport::random_phi(rng, tree);
    const Claim scaled = scale_claim(claim, phi);
    std::vector<Rat> w(tree.dimension(), Rat(1));
    const Rat x = min_hedging_capital(tree, scaled, w);
    std::vector<Rat> v(tree.dimension());
    for (int i = 0; i < tree.dimension(); ++i) v[i] = x * w[i];
    const HedgeCheck hedge = hedging_feasible(tree, scaled, v);
    REQUIRE(hedge.feasible);
    const SuccessProfile profile =
        success_function(tree, run_strategy(tree, v, *hedge.strategy), claim);
    for (const auto& [leaf, leaf_success] : profile.leaves) CHECK(leaf_success.phi >= phi.at(leaf));
  }
}
