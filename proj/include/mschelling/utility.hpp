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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mschelling/error.hpp"
#include "mschelling/fraction.hpp"
#include "mschelling/model.hpp"

namespace mschelling {

struct NeighborhoodCount {
    std::vector<std::int32_t> per_type;
    std::int32_t total = 0;
};

namespace detail {

inline void require_matching(const Game& game, const Assignment& asg)
{
    if (asg.node_count() != game.node_count()) {
        throw InputError("assignment does not match the topology size");
    }
}

} // namespace detail

/// Occupied neighbors of `v`, split by type. `v` itself may be empty.
inline NeighborhoodCount neighborhood_counts(const Game& game, const Assignment& asg, NodeId v)
{
    detail::require_matching(game, asg);
    NeighborhoodCount out;
    out.per_type.assign(static_cast<std::size_t>(game.k()), 0);
    for (NodeId w : game.topology.neighbors(v)) {
        const TypeId t = asg.type_at(w);
        if (t == kEmpty) {
            continue;
        }
        if (t >= game.k()) {
            throw InputError("node " + std::to_string(w) + " carries unknown type " + std::to_string(t));
        }
        ++out.per_type[static_cast<std::size_t>(t)];
        ++out.total;
    }
    return out;
}

/// Friends over (occupied neighbors + 1) for the agent at `v`.
inline Fraction utility(const Game& game, const Assignment& asg, NodeId v)
{
    const TypeId t = asg.type_at(v);
    if (t == kEmpty) {
        throw InputError("node " + std::to_string(v) + " is empty");
    }
    const auto counts = neighborhood_counts(game, asg, v);
    if (t >= game.k()) {
        throw InputError("node " + std::to_string(v) + " carries unknown type " + std::to_string(t));
    }
    return Fraction(counts.per_type[static_cast<std::size_t>(t)], 1 + counts.total);
}

/// Utility the agent at `from` would get at the empty node `to` once `from` is vacated.
inline Fraction jump_utility(const Game& game, const Assignment& asg, NodeId from, NodeId to)
{
    if (from == to) {
        throw InputError("jump source and target coincide");
    }
    const TypeId t = asg.type_at(from);
    if (t == kEmpty) {
        throw InputError("node " + std::to_string(from) + " is empty");
    }
    if (asg.occupied(to)) {
        throw InputError("node " + std::to_string(to) + " is occupied");
    }
    auto counts = neighborhood_counts(game, asg, to);
    if (game.topology.adjacent(from, to)) {
        --counts.per_type[static_cast<std::size_t>(t)];
        --counts.total;
    }
    return Fraction(counts.per_type[static_cast<std::size_t>(t)], 1 + counts.total);
}

inline Fraction social_welfare(const Game& game, const Assignment& asg)
{
    detail::require_matching(game, asg);
    Fraction sum;
    for (NodeId v = 0; v < asg.node_count(); ++v) {
        if (asg.occupied(v)) {
            sum += utility(game, asg, v);
        }
    }
    return sum;
}

} // namespace mschelling
