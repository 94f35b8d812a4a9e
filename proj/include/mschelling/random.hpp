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

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "mschelling/error.hpp"
#include "mschelling/model.hpp"

namespace mschelling {

/// Uniform random spanning tree by random attachment, then every remaining pair
/// becomes an edge with probability `extra_edge_probability`.
template <typename Rng>
Topology random_connected_topology(std::int32_t nodes, double extra_edge_probability, Rng& rng)
{
    if (nodes < 1) {
        throw InputError("random topology needs at least one node");
    }
    std::vector<NodeId> order(static_cast<std::size_t>(nodes));
    for (NodeId v = 0; v < nodes; ++v) {
        order[static_cast<std::size_t>(v)] = v;
    }
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::uint8_t> taken(static_cast<std::size_t>(nodes) * static_cast<std::size_t>(nodes), 0);
    std::vector<Edge> edges;
    auto add = [&](NodeId a, NodeId b) {
        if (a > b) {
            std::swap(a, b);
        }
        taken[static_cast<std::size_t>(a) * static_cast<std::size_t>(nodes) + static_cast<std::size_t>(b)] = 1;
        edges.push_back({a, b});
    };
    for (std::size_t i = 1; i < order.size(); ++i) {
        std::uniform_int_distribution<std::size_t> parent(0, i - 1);
        add(order[i], order[parent(rng)]);
    }
    std::bernoulli_distribution coin(extra_edge_probability);
    for (NodeId a = 0; a < nodes; ++a) {
        for (NodeId b = a + 1; b < nodes; ++b) {
            if (taken[static_cast<std::size_t>(a) * static_cast<std::size_t>(nodes) + static_cast<std::size_t>(b)] == 0 &&
                coin(rng)) {
                add(a, b);
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    return Topology(nodes, std::move(edges));
}

/// Uniformly random valid coloring of `game`.
template <typename Rng>
Assignment random_assignment(const Game& game, Rng& rng)
{
    std::vector<TypeId> cells(static_cast<std::size_t>(game.node_count()), kEmpty);
    std::size_t pos = 0;
    for (TypeId t = 0; t < game.k(); ++t) {
        for (std::int32_t i = 0; i < game.types.count(t); ++i) {
            cells[pos++] = t;
        }
    }
    std::shuffle(cells.begin(), cells.end(), rng);
    return Assignment(std::move(cells));
}

/// n agents split over k types as evenly as possible, larger counts first.
inline TypeCounts even_type_counts(std::int32_t n, std::int32_t k)
{
    if (k < 1 || n < k) {
        throw InputError("need 1 <= k <= n");
    }
    std::vector<std::int32_t> counts(static_cast<std::size_t>(k), n / k);
    for (std::int32_t i = 0; i < n % k; ++i) {
        ++counts[static_cast<std::size_t>(i)];
    }
    return TypeCounts(std::move(counts));
}

struct RandomGameSpec {
    std::int32_t nodes = 8;
    std::int32_t agents = 5;
    std::int32_t types = 1;
    double extra_edge_probability = 0.3;
    std::uint64_t seed = 0;
};

inline Game random_game(const RandomGameSpec& spec)
{
    if (spec.agents >= spec.nodes) {
        throw InputError("a random game needs more nodes than agents");
    }
    std::mt19937_64 rng(spec.seed);
    Topology topology = random_connected_topology(spec.nodes, spec.extra_edge_probability, rng);
    return Game {std::move(topology), even_type_counts(spec.agents, spec.types)};
}

} // namespace mschelling
