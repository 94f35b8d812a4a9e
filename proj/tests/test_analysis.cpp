/*
 * Copyright 2026 The mschelling Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "mschelling/analysis.hpp"
#include "mschelling/constructions.hpp"
#include "mschelling/error.hpp"
#include "mschelling/random.hpp"
#include "mschelling/verify.hpp"
#include "oracle.hpp"

using namespace mschelling;

namespace {

Topology line(std::int32_t n)
{
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v) {
        edges.push_back({v - 1, v});
    }
    return Topology(n, edges);
}

Topology clique(std::int32_t n)
{
    std::vector<Edge> edges;
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            edges.push_back({a, b});
        }
    }
    return Topology(n, edges);
}

Game random_small_game(std::uint64_t seed, std::int32_t max_k)
{
    std::mt19937_64 rng(seed);
    const auto nodes = std::uniform_int_distribution<std::int32_t>(3, 7)(rng);
    const auto agents = std::uniform_int_distribution<std::int32_t>(2, nodes - 1)(rng);
    const auto k = std::uniform_int_distribution<std::int32_t>(1, std::min(max_k, agents))(rng);
    return Game {random_connected_topology(nodes, 0.4, rng), even_type_counts(agents, k)};
}

} // namespace

TEST(IsEquilibrium, LineExamples)
{
    const Game g {line(6), TypeCounts({4})};
    EXPECT_TRUE(is_equilibrium(g, Assignment({0, 0, kEmpty, kEmpty, 0, 0})).equilibrium);
    const auto check = is_equilibrium(g, Assignment({0, 0, 0, kEmpty, kEmpty, 0}));
    EXPECT_FALSE(check);
    ASSERT_TRUE(check.witness.has_value());
    EXPECT_EQ(check.witness->from, 5);
    EXPECT_EQ(check.witness->to, 3);
    EXPECT_EQ(check.witness->utility_before, Fraction(0));
    EXPECT_EQ(check.witness->utility_after, Fraction(1, 2));
}

TEST(IsEquilibrium, StarCliquesCenterOccupied)
{
    const auto c = gen_star_cliques(TypeCounts({2, 2}), ComponentShape::Clique);
    const auto& eq = c.named.at("paper-equilibrium");
    EXPECT_EQ(eq.type_at(c.regions.at("center").front()), 0);
    EXPECT_TRUE(is_equilibrium(c.game, eq).equilibrium);
}

TEST(EnumerateEquilibria, UniqueEquilibriumOfPosGadget)
{
    const auto c = gen_pos_one_type(1);
    const auto r = enumerate_equilibria(c.game);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.visited, 560u);
    ASSERT_EQ(r.equilibria.size(), 1u);
    EXPECT_EQ(r.equilibria.front(), c.named.at("paper-equilibrium"));
    EXPECT_EQ(*r.min_welfare, Fraction(57, 5));
}

TEST(EnumerateEquilibria, TwoAgentsOnThreeNodeLine)
{
    const auto r = enumerate_equilibria(Game {line(3), TypeCounts({2})});
    ASSERT_EQ(r.equilibria.size(), 2u);
    EXPECT_EQ(r.equilibria[0], Assignment({0, 0, kEmpty}));
    EXPECT_EQ(r.equilibria[1], Assignment({kEmpty, 0, 0}));
}

TEST(EnumerateEquilibria, EveryColoringOfAlmostFullClique)
{
    const Game g {clique(6), TypeCounts({5})};
    const auto r = enumerate_equilibria(g);
    EXPECT_EQ(r.equilibrium_count, 6u);
}

TEST(EnumerateEquilibria, CapHandling)
{
    const Game g = gen_two_type_pos(6, 3).game;
    EXPECT_THROW(enumerate_equilibria(g, 0), InputError);
    const auto partial = enumerate_equilibria(g, 50);
    EXPECT_FALSE(partial.exhaustive);
    for (const auto& eq : partial.equilibria) {
        EXPECT_TRUE(is_equilibrium(g, eq).equilibrium);
    }
}

TEST(EnumerateEquilibria, CanonicalOrder)
{
    const auto r = enumerate_equilibria(gen_two_type_pos(6, 3).game);
    EXPECT_TRUE(std::is_sorted(r.equilibria.begin(), r.equilibria.end(), canonical_less));
}

TEST(OptimalWelfare, FrozenValues)
{
    for (std::int32_t n : {4, 6}) {
        EXPECT_EQ(optimal_welfare(gen_clique_path(n).game).opt, Fraction(n - 1));
    }
    EXPECT_EQ(optimal_welfare(Game {line(6), TypeCounts({4})}).opt, Fraction(7, 3));
    EXPECT_EQ(optimal_welfare(gen_star_cliques(TypeCounts({2, 2}), ComponentShape::Clique).game).opt, Fraction(2));
    EXPECT_THROW(optimal_welfare(gen_two_type_pos(6, 3).game, 1000), CapExceededError);
}

TEST(InstanceMetrics, FrozenValues)
{
    EXPECT_EQ(instance_metrics(gen_clique_path(4).game).poa.value, Fraction(3, 2));
    EXPECT_EQ(instance_metrics(gen_star_cliques(TypeCounts({2, 2}), ComponentShape::Clique).game).poa.value,
              Fraction(8, 3));
    const auto m = instance_metrics(gen_balanced_star_tree(2, ComponentShape::Clique).game);
    EXPECT_EQ(m.poa.value, Fraction(4));
    EXPECT_EQ(m.opt, Fraction(6));
    EXPECT_THROW(instance_metrics(gen_two_type_pos(6, 3).game, 10), CapExceededError);
}

TEST(Ratio, Kinds)
{
    EXPECT_EQ(Ratio::of(Fraction(3), Fraction(2)).to_string(), "3/2");
    EXPECT_EQ(Ratio::of(Fraction(1), Fraction(0)).to_string(), "unbounded");
    EXPECT_EQ(Ratio::of(Fraction(0), Fraction(0)).to_string(), "1/1");
    EXPECT_EQ(Ratio {}.to_string(), "undefined");
}

class MetricProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(MetricProperties, Hold)
{
    const Game g = random_small_game(GetParam(), 3);
    const auto m = instance_metrics(g);
    const auto report = enumerate_equilibria(g);
    if (m.equilibrium_count > 0) {
        // zero equilibrium welfare (possible with single-agent types) makes the ratio unbounded
        EXPECT_NE(m.poa.kind, Ratio::Kind::Undefined);
        if (m.poa.finite()) {
            ASSERT_TRUE(m.pos.finite());
            EXPECT_GE(m.poa.value, m.pos.value);
        }
        if (m.pos.finite()) {
            EXPECT_GE(m.pos.value, Fraction(1));
        } else {
            EXPECT_FALSE(m.poa.finite());
        }
    } else {
        EXPECT_EQ(m.poa.kind, Ratio::Kind::Undefined);
    }

    // rejected colorings come with a witness that really improves
    const oracle::Graph og(g.topology);
    std::mt19937_64 rng(GetParam());
    for (int i = 0; i < 20; ++i) {
        const Assignment a = random_assignment(g, rng);
        const auto check = is_equilibrium(g, a);
        EXPECT_EQ(check.equilibrium, oracle::stable(og, oracle::Cells(a.cells().begin(), a.cells().end())));
        if (!check) {
            EXPECT_GT(utility(g, a.moved(check.witness->from, check.witness->to), check.witness->to),
                      utility(g, a, check.witness->from));
        }
    }

    // balanced, >= 2 per type: SW >= x/(x+1) * (n-k)/k for every empty node with x occupied neighbors
    if (g.k() >= 2 && g.types.is_balanced() && g.types.min_count() >= 2) {
        const std::int64_t n = g.agent_count();
        const std::int64_t k = g.k();
        for (const auto& eq : report.equilibria) {
            const Fraction sw = social_welfare(g, eq);
            for (NodeId v : eq.empty_nodes()) {
                const std::int64_t x = neighborhood_counts(g, eq, v).total;
                if (x > 0) {
                    EXPECT_GE(sw, Fraction(x, x + 1) * Fraction(n - k, k));
                }
            }
        }
    }

    // relabel nodes and swap equal-count types
    std::vector<NodeId> perm(static_cast<std::size_t>(g.node_count()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> edges;
    for (const auto& e : g.topology.edges()) {
        edges.push_back({perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)]});
    }
    const Game relabeled {Topology(g.node_count(), edges), g.types};
    const auto m2 = instance_metrics(relabeled);
    EXPECT_EQ(m2.opt, m.opt);
    EXPECT_EQ(m2.poa.to_string(), m.poa.to_string());
    EXPECT_EQ(m2.pos.to_string(), m.pos.to_string());
    EXPECT_EQ(m2.equilibrium_count, m.equilibrium_count);
}

INSTANTIATE_TEST_SUITE_P(Seeds, MetricProperties, ::testing::Range<std::uint64_t>(0, 60));

TEST(MetricProperties, TypeSwapOnBalancedGame)
{
    const Game g {gen_line_multitype(2).game};
    const auto m = instance_metrics(g);
    const auto r = enumerate_equilibria(g);
    std::set<std::vector<TypeId>> swapped;
    for (const auto& eq : r.equilibria) {
        std::vector<TypeId> cells(eq.cells().begin(), eq.cells().end());
        for (auto& t : cells) {
            t = t == kEmpty ? kEmpty : 1 - t;
        }
        EXPECT_TRUE(is_equilibrium(g, Assignment(cells)).equilibrium);
        swapped.insert(cells);
    }
    EXPECT_EQ(swapped.size(), m.equilibrium_count);
}

TEST(CliqueReduction, Examples)
{
    const auto k4 = clique_reduction(clique(4), 4);
    EXPECT_EQ(k4.instance.xi, Fraction(3));
    EXPECT_EQ(optimal_welfare(k4.game).opt, Fraction(3));
    EXPECT_TRUE(decide_welfare_at_least(k4.game, k4.instance.xi));

    const Topology c4(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const auto cyc = clique_reduction(c4, 3);
    EXPECT_LT(optimal_welfare(cyc.game).opt, Fraction(2));
    EXPECT_FALSE(decide_welfare_at_least(cyc.game, cyc.instance.xi));
    EXPECT_TRUE(decide_welfare_at_least(cyc.game, Fraction(0)));

    const auto pair = clique_reduction(line(5), 2);
    EXPECT_EQ(optimal_welfare(pair.game).opt, Fraction(1));
}

TEST(CliqueReduction, Errors)
{
    EXPECT_THROW(clique_reduction(clique(4), 5), InputError);
    EXPECT_THROW(clique_reduction(clique(4), 0), InputError);
    EXPECT_THROW(clique_reduction(clique(4), 1), InputError);
    EXPECT_THROW(clique_reduction(Topology(4, {{0, 1}, {2, 3}}), 2), InputError);
}

TEST(CliqueReduction, AgreesWithSubsetScan)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        std::mt19937_64 rng(seed);
        const auto nodes = std::uniform_int_distribution<std::int32_t>(3, 6)(rng);
        const Topology t = random_connected_topology(nodes, 0.6, rng);
        for (std::int32_t lam = 2; lam <= nodes; ++lam) {
            const auto red = clique_reduction(t, lam);
            EXPECT_EQ(decide_welfare_at_least(red.game, red.instance.xi), verify::has_clique(t, lam))
                << "seed " << seed << " lambda " << lam;
        }
    }
}

TEST(PosUpper, OptIsEquilibriumOnClique)
{
    const auto r = pos_upper_experiment(Game {clique(5), TypeCounts({4})});
    EXPECT_TRUE(r.opt_is_eq);
    EXPECT_TRUE(r.instance_pos_bound_ok);
    EXPECT_EQ(r.jumps, 0u);
    EXPECT_THROW(pos_upper_experiment(Game {line(4), TypeCounts({1, 1})}), UnsupportedError);
}

TEST(PosUpper, RandomGamesSatisfyBound)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Game g = random_small_game(500 + seed, 1);
        const auto r = pos_upper_experiment(g);
        EXPECT_TRUE(r.instance_pos_bound_ok) << seed;
        EXPECT_LE(r.low_utility_agents, 2) << seed;
        EXPECT_TRUE(is_equilibrium(g, r.terminal).equilibrium);
        EXPECT_EQ(r.terminal_welfare, social_welfare(g, r.terminal));
        // some OPT agent at 1/2 forces the optimum to be stable
        bool has_half = false;
        for (NodeId v : r.optimal.occupied_nodes()) {
            has_half = has_half || utility(g, r.optimal, v) == Fraction(1, 2);
        }
        if (has_half) {
            EXPECT_TRUE(r.opt_is_eq) << seed;
        }
    }
}

TEST(ClassBounds, Applicability)
{
    const auto k1_tree = applicable_poa_bounds(Game {line(6), TypeCounts({4})});
    ASSERT_EQ(k1_tree.size(), 2u);
    EXPECT_EQ(k1_tree[1].value, Fraction(7, 6));
    const auto fig2 = applicable_poa_bounds(gen_star_cliques(TypeCounts({2, 2}), ComponentShape::Clique).game);
    EXPECT_EQ(fig2.front().value, Fraction(8, 3));
    const auto line3 = applicable_poa_bounds(gen_line_multitype(3).game);
    EXPECT_EQ(line3.size(), 4u);
    EXPECT_EQ(line3[2].value, Fraction(7, 2));
    const auto star4 = applicable_poa_bounds(gen_star_cliques(TypeCounts({2, 2, 2, 2}), ComponentShape::Path).game);
    EXPECT_EQ(star4.back().value, Fraction(32, 5));
    EXPECT_TRUE(applicable_poa_bounds(Game {line(4), TypeCounts({2, 1})}).empty());
}

TEST(ClassBounds, BalancedTwoTypeLineExceedsTwo)
{
    // R _ B R R B B is stable with welfare 3/2 while OPT is 10/3
    const Game g = gen_line_multitype(2).game;
    const Assignment low({0, kEmpty, 1, 0, 0, 1, 1});
    EXPECT_TRUE(is_equilibrium(g, low).equilibrium);
    EXPECT_EQ(social_welfare(g, low), Fraction(3, 2));
    EXPECT_EQ(instance_metrics(g).poa.value, Fraction(20, 9));
}
