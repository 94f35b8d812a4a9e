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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mschelling/error.hpp"

namespace mschelling {

using NodeId = std::int32_t;
using TypeId = std::int32_t;

/// Cell value of an unoccupied node.
inline constexpr TypeId kEmpty = -1;

struct Edge {
    NodeId u;
    NodeId v;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected location graph. Edge order and orientation are kept as
/// given so that serialization reproduces the input.
class Topology {
public:
    Topology() = default;

    Topology(std::int32_t node_count, std::vector<Edge> edges)
        : node_count_(node_count), edges_(std::move(edges))
    {
        if (node_count_ < 1) {
            throw InputError("topology needs at least one node");
        }
        const auto n = static_cast<std::size_t>(node_count_);
        neighbors_.assign(n, {});
        matrix_.assign(n * n, 0);
        for (const Edge& e : edges_) {
            if (e.u < 0 || e.v < 0 || e.u >= node_count_ || e.v >= node_count_) {
                throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
            }
            if (e.u == e.v) {
                throw InputError("self-loop at node " + std::to_string(e.u));
            }
            auto& cell = matrix_[index(e.u, e.v)];
            if (cell != 0) {
                throw InputError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
            }
            cell = 1;
            matrix_[index(e.v, e.u)] = 1;
            neighbors_[static_cast<std::size_t>(e.u)].push_back(e.v);
            neighbors_[static_cast<std::size_t>(e.v)].push_back(e.u);
        }
        for (auto& list : neighbors_) {
            std::sort(list.begin(), list.end());
        }
    }

    std::int32_t node_count() const { return node_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    bool contains(NodeId v) const { return v >= 0 && v < node_count_; }

    std::span<const NodeId> neighbors(NodeId v) const
    {
        check_node(v);
        return neighbors_[static_cast<std::size_t>(v)];
    }

    bool adjacent(NodeId a, NodeId b) const
    {
        check_node(a);
        check_node(b);
        return matrix_[index(a, b)] != 0;
    }

    std::int32_t degree(NodeId v) const { return static_cast<std::int32_t>(neighbors(v).size()); }

    std::int32_t max_degree() const
    {
        std::size_t best = 0;
        for (const auto& list : neighbors_) {
            best = std::max(best, list.size());
        }
        return static_cast<std::int32_t>(best);
    }

    bool is_connected() const
    {
        if (node_count_ == 0) {
            return false;
        }
        std::vector<char> seen(static_cast<std::size_t>(node_count_), 0);
        std::vector<NodeId> stack {0};
        seen[0] = 1;
        std::int32_t reached = 1;
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            for (NodeId w : neighbors_[static_cast<std::size_t>(v)]) {
                if (seen[static_cast<std::size_t>(w)] == 0) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
        return reached == node_count_;
    }

    bool is_tree() const
    {
        return is_connected() && edges_.size() + 1 == static_cast<std::size_t>(node_count_);
    }

    bool is_line() const { return is_tree() && max_degree() <= 2; }

    friend bool operator==(const Topology& a, const Topology& b)
    {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
    }

private:
    std::size_t index(NodeId a, NodeId b) const
    {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(node_count_) + static_cast<std::size_t>(b);
    }

    void check_node(NodeId v) const
    {
        if (!contains(v)) {
            throw InputError("node id " + std::to_string(v) + " out of range");
        }
    }

    std::int32_t node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> neighbors_;
    std::vector<std::uint8_t> matrix_;
};

/// Agents per type; type ids are 0..k-1.
class TypeCounts {
public:
    TypeCounts() = default;

    explicit TypeCounts(std::vector<std::int32_t> counts) : counts_(std::move(counts))
    {
        if (counts_.empty()) {
            throw InputError("at least one type is required");
        }
        for (auto c : counts_) {
            if (c < 1) {
                throw InputError("every type needs at least one agent");
            }
        }
        if (total() < 2) {
            throw InputError("a game needs at least two agents");
        }
    }

    std::int32_t k() const { return static_cast<std::int32_t>(counts_.size()); }
    std::int32_t total() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }
    std::int32_t count(TypeId t) const { return counts_.at(static_cast<std::size_t>(t)); }
    const std::vector<std::int32_t>& counts() const { return counts_; }

    bool is_balanced() const
    {
        return std::all_of(counts_.begin(), counts_.end(), [&](auto c) { return c == counts_.front(); });
    }

    std::int32_t min_count() const { return *std::min_element(counts_.begin(), counts_.end()); }

    friend bool operator==(const TypeCounts&, const TypeCounts&) = default;

private:
    std::vector<std::int32_t> counts_;
};

struct Game {
    Topology topology;
    TypeCounts types;

    std::int32_t node_count() const { return topology.node_count(); }
    std::int32_t agent_count() const { return types.total(); }
    std::int32_t k() const { return types.k(); }

    friend bool operator==(const Game&, const Game&) = default;
};

/// Node coloring: one cell per node holding a type id or kEmpty.
class Assignment {
public:
    Assignment() = default;

    explicit Assignment(std::vector<TypeId> cells) : cells_(std::move(cells))
    {
        for (TypeId t : cells_) {
            if (t < kEmpty) {
                throw InputError("negative type id " + std::to_string(t));
            }
        }
    }

    static Assignment from_occupancy(std::int32_t node_count, const std::map<NodeId, TypeId>& occupancy)
    {
        std::vector<TypeId> cells(static_cast<std::size_t>(node_count), kEmpty);
        for (const auto& [v, t] : occupancy) {
            if (v < 0 || v >= node_count) {
                throw InputError("occupied node " + std::to_string(v) + " out of range");
            }
            if (t < 0) {
                throw InputError("negative type id " + std::to_string(t));
            }
            cells[static_cast<std::size_t>(v)] = t;
        }
        return Assignment(std::move(cells));
    }

    std::int32_t node_count() const { return static_cast<std::int32_t>(cells_.size()); }
    std::span<const TypeId> cells() const { return cells_; }

    TypeId type_at(NodeId v) const
    {
        if (v < 0 || v >= node_count()) {
            throw InputError("node id " + std::to_string(v) + " out of range");
        }
        return cells_[static_cast<std::size_t>(v)];
    }

    bool occupied(NodeId v) const { return type_at(v) != kEmpty; }

    std::map<NodeId, TypeId> occupancy() const
    {
        std::map<NodeId, TypeId> out;
        for (NodeId v = 0; v < node_count(); ++v) {
            if (cells_[static_cast<std::size_t>(v)] != kEmpty) {
                out.emplace(v, cells_[static_cast<std::size_t>(v)]);
            }
        }
        return out;
    }

    std::vector<NodeId> occupied_nodes() const { return nodes_where([](TypeId t) { return t != kEmpty; }); }
    std::vector<NodeId> empty_nodes() const { return nodes_where([](TypeId t) { return t == kEmpty; }); }

    std::int32_t count_of(TypeId t) const
    {
        return static_cast<std::int32_t>(std::count(cells_.begin(), cells_.end(), t));
    }

    /// Copy with the occupant of `from` relocated to the empty node `to`.
    Assignment moved(NodeId from, NodeId to) const
    {
        if (!occupied(from)) {
            throw InputError("node " + std::to_string(from) + " is empty");
        }
        if (occupied(to)) {
            throw InputError("node " + std::to_string(to) + " is occupied");
        }
        Assignment out = *this;
        out.cells_[static_cast<std::size_t>(to)] = cells_[static_cast<std::size_t>(from)];
        out.cells_[static_cast<std::size_t>(from)] = kEmpty;
        return out;
    }

    /// Occupied (node, type) pairs in ascending node order.
    std::vector<std::pair<NodeId, TypeId>> canonical_pairs() const
    {
        std::vector<std::pair<NodeId, TypeId>> out;
        for (NodeId v = 0; v < node_count(); ++v) {
            if (cells_[static_cast<std::size_t>(v)] != kEmpty) {
                out.emplace_back(v, cells_[static_cast<std::size_t>(v)]);
            }
        }
        return out;
    }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    template <typename Pred>
    std::vector<NodeId> nodes_where(Pred pred) const
    {
        std::vector<NodeId> out;
        for (NodeId v = 0; v < node_count(); ++v) {
            if (pred(cells_[static_cast<std::size_t>(v)])) {
                out.push_back(v);
            }
        }
        return out;
    }

    std::vector<TypeId> cells_;
};

/// Report ordering: lexicographic over the sorted occupied (node, type) pairs.
inline bool canonical_less(const Assignment& a, const Assignment& b)
{
    return a.canonical_pairs() < b.canonical_pairs();
}

struct AssignmentHash {
    std::size_t operator()(const Assignment& a) const noexcept
    {
        std::size_t h = 1469598103934665603ULL;
        for (TypeId t : a.cells()) {
            h ^= static_cast<std::size_t>(t + 2);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

struct Violation {
    std::string code;
    std::string detail;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    bool has(const std::string& code) const
    {
        return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
    }
};

inline ValidationResult validate(const Game& game)
{
    ValidationResult out;
    if (!game.topology.is_connected()) {
        out.violations.push_back({"topology not connected", "the location graph has more than one component"});
    }
    if (game.node_count() <= game.agent_count()) {
        out.violations.push_back({"no empty node", std::to_string(game.node_count()) + " nodes for " +
                                                       std::to_string(game.agent_count()) + " agents"});
    }
    return out;
}

/// Every Game and Assignment invariant violation, in a fixed order.
inline ValidationResult validate(const Game& game, const Assignment& asg)
{
    ValidationResult out = validate(game);
    if (asg.node_count() != game.node_count()) {
        out.violations.push_back({"assignment size mismatch", "assignment covers " + std::to_string(asg.node_count()) +
                                                                  " nodes, topology has " +
                                                                  std::to_string(game.node_count())});
        return out;
    }
    for (NodeId v = 0; v < asg.node_count(); ++v) {
        const TypeId t = asg.type_at(v);
        if (t != kEmpty && t >= game.k()) {
            out.violations.push_back({"type out of range", "node " + std::to_string(v) + " has type " +
                                                               std::to_string(t)});
        }
    }
    for (TypeId t = 0; t < game.k(); ++t) {
        const auto have = asg.count_of(t);
        if (have != game.types.count(t)) {
            out.violations.push_back({"type count mismatch", "type " + std::to_string(t) + " has " +
                                                                 std::to_string(have) + " agents, expected " +
                                                                 std::to_string(game.types.count(t))});
        }
    }
    return out;
}

} // namespace mschelling
