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

#include <unordered_set>

#include "mschelling/error.hpp"
#include "mschelling/model.hpp"

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

} // namespace

TEST(Topology, NeighborsSortedAndSymmetric)
{
    const Topology t(4, {{2, 0}, {0, 1}, {3, 0}});
    ASSERT_EQ(t.neighbors(0).size(), 3u);
    EXPECT_EQ(t.neighbors(0)[0], 1);
    EXPECT_EQ(t.neighbors(0)[2], 3);
    EXPECT_TRUE(t.adjacent(2, 0));
    EXPECT_TRUE(t.adjacent(0, 2));
    EXPECT_FALSE(t.adjacent(1, 2));
    EXPECT_EQ(t.degree(0), 3);
    EXPECT_EQ(t.max_degree(), 3);
    EXPECT_EQ(t.edge_count(), 3u);
}

TEST(Topology, RejectsMalformedGraphs)
{
    EXPECT_THROW(Topology(0, {}), InputError);
    EXPECT_THROW(Topology(2, {{0, 2}}), InputError);
    EXPECT_THROW(Topology(2, {{-1, 0}}), InputError);
    EXPECT_THROW(Topology(2, {{1, 1}}), InputError);
    EXPECT_THROW(Topology(3, {{0, 1}, {1, 0}}), InputError);
}

TEST(Topology, ShapePredicates)
{
    EXPECT_TRUE(line(5).is_line());
    EXPECT_TRUE(line(5).is_tree());
    const Topology star(4, {{0, 1}, {0, 2}, {0, 3}});
    EXPECT_TRUE(star.is_tree());
    EXPECT_FALSE(star.is_line());
    const Topology cycle(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    EXPECT_TRUE(cycle.is_connected());
    EXPECT_FALSE(cycle.is_tree());
    const Topology split(4, {{0, 1}, {2, 3}});
    EXPECT_FALSE(split.is_connected());
    EXPECT_TRUE(Topology(1, {}).is_connected());
}

TEST(TypeCounts, Validation)
{
    EXPECT_THROW(TypeCounts(std::vector<std::int32_t> {}), InputError);
    EXPECT_THROW(TypeCounts({0, 2}), InputError);
    EXPECT_THROW(TypeCounts({1}), InputError);
    const TypeCounts c({3, 3, 2});
    EXPECT_EQ(c.k(), 3);
    EXPECT_EQ(c.total(), 8);
    EXPECT_FALSE(c.is_balanced());
    EXPECT_EQ(c.min_count(), 2);
    EXPECT_TRUE(TypeCounts({2, 2}).is_balanced());
}

TEST(Assignment, OccupancyViews)
{
    const Assignment a({0, kEmpty, 1, 0});
    EXPECT_EQ(a.occupied_nodes(), (std::vector<NodeId> {0, 2, 3}));
    EXPECT_EQ(a.empty_nodes(), (std::vector<NodeId> {1}));
    EXPECT_EQ(a.count_of(0), 2);
    EXPECT_EQ(a.occupancy(), (std::map<NodeId, TypeId> {{0, 0}, {2, 1}, {3, 0}}));
    EXPECT_EQ(Assignment::from_occupancy(4, a.occupancy()), a);
    EXPECT_THROW(a.type_at(4), InputError);
    EXPECT_THROW(Assignment({-2, 0}), InputError);
    EXPECT_THROW(Assignment::from_occupancy(2, {{5, 0}}), InputError);
}

TEST(Assignment, MovedRelocatesOneAgent)
{
    const Assignment a({0, kEmpty, 1});
    const Assignment b = a.moved(0, 1);
    EXPECT_EQ(b, Assignment({kEmpty, 0, 1}));
    EXPECT_THROW(a.moved(1, 0), InputError);
    EXPECT_THROW(a.moved(0, 2), InputError);
}

TEST(Assignment, CanonicalOrderAndHash)
{
    const Assignment a({0, kEmpty, 1});
    const Assignment b({kEmpty, 0, 1});
    EXPECT_TRUE(canonical_less(a, b) != canonical_less(b, a));
    std::unordered_set<Assignment, AssignmentHash> seen {a, b, a};
    EXPECT_EQ(seen.size(), 2u);
}

TEST(Validate, GameChecks)
{
    const Game ok {line(4), TypeCounts({2, 1})};
    EXPECT_TRUE(validate(ok).ok());
    const Game split {Topology(4, {{0, 1}, {2, 3}}), TypeCounts({2})};
    EXPECT_TRUE(validate(split).has("topology not connected"));
    const Game full {line(3), TypeCounts({2, 1})};
    EXPECT_TRUE(validate(full).has("no empty node"));
}

TEST(Validate, AssignmentChecks)
{
    const Game g {line(4), TypeCounts({2, 1})};
    EXPECT_TRUE(validate(g, Assignment({0, 0, 1, kEmpty})).ok());
    EXPECT_TRUE(validate(g, Assignment({0, 0, 0, kEmpty})).has("type count mismatch"));
    EXPECT_TRUE(validate(g, Assignment({0, 0, 1})).has("assignment size mismatch"));
    EXPECT_TRUE(validate(g, Assignment({0, 0, 2, kEmpty})).has("type out of range"));
}
