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

#include <algorithm>
#include <random>

#include "mschelling/analysis.hpp"
#include "mschelling/constructions.hpp"
#include "mschelling/dynamics.hpp"
#include "mschelling/error.hpp"
#include "mschelling/random.hpp"
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

SchedulerPolicy policy_for(int which, std::uint64_t seed)
{
    switch (which) {
    case 0: return SchedulerPolicy::first_improvement();
    case 1: return SchedulerPolicy::best_improvement();
    case 2: return SchedulerPolicy::min_utility_first();
    default: return SchedulerPolicy::seeded_random(seed);
    }
}

} // namespace

TEST(ImprovingJumps, EmptyWhenAtMaximum)
{
    const Game g {clique(4), TypeCounts({3})};
    const Assignment a({0, 0, 0, kEmpty});
    EXPECT_TRUE(improving_jumps(g, a, 0).empty());
}

TEST(ImprovingJumps, LoneTypeNeverImproves)
{
    const Game g {line(5), TypeCounts({2, 1})};
    const Assignment a({0, 1, kEmpty, 0, kEmpty});
    EXPECT_TRUE(improving_jumps(g, a, 1).empty());
    EXPECT_THROW(improving_jumps(g, a, 2), InputError);
}

TEST(ImprovingJumps, GadgetAlphaPrefersBeta)
{
    const auto c = gen_no_potential_gadget();
    const NodeId alpha = c.regions.at("alpha").front();
    const NodeId beta = c.regions.at("beta").front();
    const auto jumps = improving_jumps(c.game, c.named.at("start"), alpha);
    EXPECT_NE(std::find(jumps.begin(), jumps.end(), ImprovingJump {beta, Fraction(34, 100)}), jumps.end());
}

TEST(Step, NoneAtEquilibrium)
{
    const Game g {line(6), TypeCounts({4})};
    const Assignment a({0, 0, kEmpty, kEmpty, 0, 0});
    EXPECT_FALSE(step(g, a, SchedulerPolicy::best_improvement()).has_value());
}

TEST(Step, GadgetFirstJump)
{
    const auto c = gen_no_potential_gadget();
    const auto j = step(c.game, c.named.at("start"), SchedulerPolicy::best_improvement().with_movers(c.movers.at("start")));
    ASSERT_TRUE(j.has_value());
    EXPECT_EQ(j->from, c.regions.at("alpha").front());
    EXPECT_EQ(j->to, c.regions.at("beta").front());
    EXPECT_EQ(j->utility_before, Fraction(1, 3));
    EXPECT_EQ(j->utility_after, Fraction(34, 100));
}

TEST(Step, MinUtilityMovesLoneAgentFirst)
{
    const Game g {line(5), TypeCounts({3})};
    const Assignment a({0, 0, kEmpty, kEmpty, 0});
    const auto j = step(g, a, SchedulerPolicy::min_utility_first());
    ASSERT_TRUE(j.has_value());
    EXPECT_EQ(j->from, 4);
    EXPECT_EQ(j->to, 2);
    EXPECT_EQ(j->utility_after, Fraction(1, 2));
}

TEST(Step, BestImprovementTakesLargestGainLowestIds)
{
    // every agent is alone; node 4 sits between two of them
    const Game g {line(7), TypeCounts({3})};
    const Assignment a({0, kEmpty, kEmpty, 0, kEmpty, 0, kEmpty});
    const auto j = step(g, a, SchedulerPolicy::best_improvement());
    ASSERT_TRUE(j.has_value());
    EXPECT_EQ(j->from, 0);
    EXPECT_EQ(j->to, 4);
    EXPECT_EQ(j->utility_after, Fraction(2, 3));
}

TEST(Scheduler, RejectsBadPolicies)
{
    const Game g {line(5), TypeCounts({3})};
    const Assignment a({0, 0, kEmpty, kEmpty, 0});
    EXPECT_THROW(Scheduler(g, a, {SchedulerVariant::SeededRandom, std::nullopt, std::nullopt}), InputError);
    EXPECT_THROW(Scheduler(g, a, SchedulerPolicy::first_improvement().with_movers({2})), InputError);
    EXPECT_THROW(Scheduler(g, a, SchedulerPolicy::first_improvement().with_movers({0, 0})), InputError);
}

TEST(RunDynamics, InputErrors)
{
    const Game g {line(5), TypeCounts({3})};
    const Assignment a({0, 0, kEmpty, kEmpty, 0});
    EXPECT_THROW(run_dynamics(g, a, SchedulerPolicy::best_improvement(), 0), InputError);
    EXPECT_THROW(run_dynamics(g, Assignment({0, 0, kEmpty, kEmpty, kEmpty}), SchedulerPolicy::best_improvement()),
                 InputError);
}

TEST(RunDynamics, EquilibriumStartConvergesImmediately)
{
    const Game g {line(6), TypeCounts({4})};
    const Assignment a({0, 0, kEmpty, kEmpty, 0, 0});
    const auto t = run_dynamics(g, a, SchedulerPolicy::best_improvement());
    EXPECT_EQ(t.outcome.status, OutcomeStatus::Converged);
    EXPECT_TRUE(t.jumps.empty());
    EXPECT_EQ(t.final_assignment(), a);
}

TEST(RunDynamics, GadgetCycles)
{
    const auto c = gen_no_potential_gadget();
    const auto& start = c.named.at("start");
    const NodeId a = c.regions.at("alpha").front();
    const NodeId b = c.regions.at("beta").front();
    const NodeId g = c.regions.at("gamma").front();
    const auto t = run_dynamics(c.game, start, SchedulerPolicy::best_improvement().with_movers(c.movers.at("start")));
    ASSERT_EQ(t.jumps.size(), 3u);
    EXPECT_EQ(t.jumps[0], (Jump {a, b, 0, Fraction(1, 3), Fraction(34, 100)}));
    EXPECT_EQ(t.jumps[1], (Jump {g, a, 0, Fraction(49, 100), Fraction(1, 2)}));
    EXPECT_EQ(t.jumps[2], (Jump {b, g, 0, Fraction(35, 101), Fraction(49, 100)}));
    EXPECT_EQ(t.outcome, (Outcome {OutcomeStatus::CycleDetected, 3, 3}));
    EXPECT_EQ(t.final_assignment(), start);
}

TEST(RunDynamics, GadgetOtherStartsEnterTheSameCycle)
{
    const auto c = gen_no_potential_gadget();
    for (const char* name : {"start-i-beta-j-gamma", "start-i-beta-j-alpha"}) {
        const auto t = run_dynamics(c.game, c.named.at(name),
                                    SchedulerPolicy::first_improvement().with_movers(c.movers.at(name)));
        EXPECT_EQ(t.outcome.status, OutcomeStatus::CycleDetected) << name;
        EXPECT_EQ(t.outcome.period, 3u) << name;
    }
}

TEST(RunDynamics, StepCap)
{
    const auto c = gen_no_potential_gadget();
    const auto t = run_dynamics(c.game, c.named.at("start"),
                                SchedulerPolicy::best_improvement().with_movers(c.movers.at("start")), 2);
    EXPECT_EQ(t.outcome.status, OutcomeStatus::StepCapped);
    EXPECT_EQ(t.jumps.size(), 2u);
}

TEST(RunDynamics, WithoutWhitelistStubsMoveToo)
{
    const auto c = gen_no_potential_gadget();
    const auto t = run_dynamics(c.game, c.named.at("start"), SchedulerPolicy::best_improvement(), 50);
    ASSERT_FALSE(t.jumps.empty());
    EXPECT_NE(t.jumps, run_dynamics(c.game, c.named.at("start"),
                                    SchedulerPolicy::best_improvement().with_movers(c.movers.at("start")))
                           .jumps);
}

TEST(Potential, FrozenValues)
{
    EXPECT_EQ(potential(Game {line(4), TypeCounts({2})}, Assignment({0, 0, kEmpty, kEmpty})).value, 2u);
    EXPECT_EQ(potential(Game {line(4), TypeCounts({3})}, Assignment({0, 0, 0, kEmpty})).value, 4u);
    for (std::int32_t n = 2; n <= 6; ++n) {
        std::vector<TypeId> cells(static_cast<std::size_t>(n + 1), 0);
        cells.back() = kEmpty;
        EXPECT_EQ(potential(Game {clique(n + 1), TypeCounts({n})}, Assignment(cells)).value,
                  static_cast<std::uint64_t>(n * (n - 1)));
    }
    EXPECT_THROW(potential(Game {line(3), TypeCounts({1, 1})}, Assignment({0, 1, kEmpty})), UnsupportedError);
}

TEST(OrdinalPotential, DecreasingMoveAgreesInSign)
{
    const Game g {line(4), TypeCounts({3})};
    const Assignment a({0, 0, 0, kEmpty});
    EXPECT_EQ(jump_utility(g, a, 1, 3), Fraction(1, 2));
    EXPECT_TRUE(potential_agrees(g, a, 1, 3));
    EXPECT_LT(potential(g, a.moved(1, 3)), potential(g, a));
    const DynamicsTrace forged {a, {Jump {1, 3, 0, Fraction(2, 3), Fraction(1, 2)}}, {}};
    EXPECT_FALSE(check_ordinal_potential(g, forged).has_value());
}

TEST(OrdinalPotential, EmptyTraceAndUnsupported)
{
    const Game g {line(4), TypeCounts({3})};
    EXPECT_FALSE(check_ordinal_potential(g, DynamicsTrace {Assignment({0, 0, 0, kEmpty}), {}, {}}).has_value());
    const Game two {line(3), TypeCounts({1, 1})};
    EXPECT_THROW(check_ordinal_potential(two, DynamicsTrace {Assignment({0, 1, kEmpty}), {}, {}}), UnsupportedError);
}

TEST(OutcomeNames, Strings)
{
    EXPECT_EQ(to_string(SchedulerVariant::MinUtilityFirst), "min-utility");
    EXPECT_EQ(to_string(OutcomeStatus::CycleDetected), "cycle-detected");
}

class TraceProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(TraceProperties, Hold)
{
    const std::uint64_t seed = GetParam();
    std::mt19937_64 rng(seed);
    const auto nodes = std::uniform_int_distribution<std::int32_t>(4, 10)(rng);
    const auto agents = std::uniform_int_distribution<std::int32_t>(2, nodes - 1)(rng);
    const auto k = std::uniform_int_distribution<std::int32_t>(1, std::min(3, agents))(rng);
    const Game g {random_connected_topology(nodes, 0.3, rng), even_type_counts(agents, k)};
    const Assignment start = random_assignment(g, rng);
    const oracle::Graph og(g.topology);

    for (int which = 0; which < 4; ++which) {
        const auto policy = policy_for(which, seed);
        const auto t = run_dynamics(g, start, policy);
        EXPECT_EQ(t, run_dynamics(g, start, policy)) << "replay must be deterministic";
        const auto states = t.states();
        for (std::size_t i = 0; i < t.jumps.size(); ++i) {
            const Jump& j = t.jumps[i];
            EXPECT_GT(j.utility_after, j.utility_before);
            EXPECT_EQ(j.type, states[i].type_at(j.from));
            EXPECT_EQ(j.utility_before, utility(g, states[i], j.from));
            EXPECT_EQ(j.utility_after, utility(g, states[i + 1], j.to));
        }
        switch (t.outcome.status) {
        case OutcomeStatus::Converged: {
            const auto& last = states.back();
            EXPECT_TRUE(oracle::stable(og, oracle::Cells(last.cells().begin(), last.cells().end())));
            break;
        }
        case OutcomeStatus::CycleDetected: {
            const auto idx = t.outcome.first_revisit_index;
            ASSERT_GE(idx, t.outcome.period);
            EXPECT_EQ(states[idx], states[idx - t.outcome.period]);
            EXPECT_EQ(idx, t.jumps.size());
            break;
        }
        case OutcomeStatus::StepCapped: EXPECT_EQ(t.jumps.size(), default_max_steps(g)); break;
        }
        if (k == 1) {
            const std::int64_t n = agents;
            EXPECT_EQ(t.outcome.status, OutcomeStatus::Converged);
            EXPECT_LE(static_cast<std::int64_t>(t.jumps.size()), n * (n - 1));
            EXPECT_FALSE(check_ordinal_potential(g, t).has_value());
            for (std::size_t i = 1; i < states.size(); ++i) {
                EXPECT_GE(potential(g, states[i]).value, potential(g, states[i - 1]).value + 1);
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, TraceProperties, ::testing::Range<std::uint64_t>(0, 80));

TEST(RandomScheduler, SeedChangesChoiceButNotValidity)
{
    const Game g {line(12), TypeCounts({5})};
    const Assignment start({0, kEmpty, 0, kEmpty, 0, kEmpty, 0, kEmpty, 0, kEmpty, kEmpty, kEmpty});
    std::vector<std::vector<Jump>> distinct;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto t = run_dynamics(g, start, SchedulerPolicy::seeded_random(s));
        EXPECT_EQ(t.outcome.status, OutcomeStatus::Converged);
        if (std::find(distinct.begin(), distinct.end(), t.jumps) == distinct.end()) {
            distinct.push_back(t.jumps);
        }
    }
    EXPECT_GT(distinct.size(), 1u);
}
