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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mschelling/analysis.hpp"
#include "mschelling/error.hpp"
#include "mschelling/fraction.hpp"
#include "mschelling/model.hpp"
#include "mschelling/utility.hpp"

namespace mschelling {

/// A generated game together with its named assignments and closed-form values.
struct ConstructionOutput {
    std::string family;
    Game game;
    std::map<std::string, Assignment> named;
    /// Closed-form values; "ratio" is OPT over the welfare of the named equilibrium.
    std::map<std::string, Fraction> expected;
    std::map<std::string, std::vector<NodeId>> regions;
    /// Mover whitelist per named start assignment (only for restricted-dynamics gadgets).
    std::map<std::string, std::vector<NodeId>> movers;
};

enum class ComponentShape { Clique, Path };

namespace detail {

class GraphBuilder {
public:
    std::vector<NodeId> add_nodes(std::int32_t count)
    {
        std::vector<NodeId> out;
        for (std::int32_t i = 0; i < count; ++i) {
            out.push_back(next_++);
        }
        return out;
    }

    NodeId add_node() { return next_++; }

    void edge(NodeId a, NodeId b) { edges_.push_back({std::min(a, b), std::max(a, b)}); }

    void clique(const std::vector<NodeId>& nodes)
    {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                edge(nodes[i], nodes[j]);
            }
        }
    }

    void path(const std::vector<NodeId>& nodes)
    {
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            edge(nodes[i - 1], nodes[i]);
        }
    }

    void join(const std::vector<NodeId>& a, const std::vector<NodeId>& b)
    {
        for (NodeId x : a) {
            for (NodeId y : b) {
                edge(x, y);
            }
        }
    }

    void component(const std::vector<NodeId>& nodes, ComponentShape shape)
    {
        if (shape == ComponentShape::Clique) {
            clique(nodes);
        } else {
            path(nodes);
        }
    }

    std::int32_t size() const { return next_; }

    Topology build() const
    {
        auto edges = edges_;
        std::sort(edges.begin(), edges.end());
        return Topology(next_, std::move(edges));
    }

private:
    NodeId next_ = 0;
    std::vector<Edge> edges_;
};

class Painter {
public:
    explicit Painter(std::int32_t node_count) : cells_(static_cast<std::size_t>(node_count), kEmpty) {}

    Painter& set(NodeId v, TypeId t)
    {
        cells_[static_cast<std::size_t>(v)] = t;
        return *this;
    }

    Painter& fill(const std::vector<NodeId>& nodes, TypeId t)
    {
        for (NodeId v : nodes) {
            set(v, t);
        }
        return *this;
    }

    Assignment done() const { return Assignment(cells_); }

private:
    std::vector<TypeId> cells_;
};

inline std::vector<NodeId> slice(const std::vector<NodeId>& v, std::size_t from, std::size_t count)
{
    return {v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(from + count)};
}

/// Optimal welfare of m same-type agents filling a path on their own.
inline Fraction path_block_welfare(std::int64_t m)
{
    if (m < 2) {
        return Fraction(0);
    }
    return Fraction(1) + Fraction(2 * (m - 2), 3);
}

// Pairs of adjacent agents with two empty nodes between consecutive pairs.
inline Assignment pairs_on_line(const std::vector<NodeId>& line, std::int32_t n, std::int32_t node_count)
{
    Painter paint(node_count);
    for (std::int32_t pair = 0; pair < n / 2; ++pair) {
        paint.set(line[static_cast<std::size_t>(4 * pair)], 0);
        paint.set(line[static_cast<std::size_t>(4 * pair + 1)], 0);
    }
    return paint.done();
}

} // namespace detail

/// Clique K_n plus a path of 2n-3 nodes hanging off clique node 0.
inline ConstructionOutput gen_clique_path(std::int32_t n)
{
    if (n < 4 || n % 2 != 0) {
        throw InputError("clique-path needs an even n >= 4");
    }
    detail::GraphBuilder g;
    const auto clique = g.add_nodes(n);
    const auto path = g.add_nodes(2 * n - 3);
    g.clique(clique);
    g.edge(clique[0], path[0]);
    g.path(path);

    std::vector<NodeId> line {clique[0]};
    line.insert(line.end(), path.begin(), path.end());

    ConstructionOutput out;
    out.family = "clique-path";
    out.game = Game {g.build(), TypeCounts({n})};
    out.named["paper-equilibrium"] = detail::pairs_on_line(line, n, g.size());
    out.named["paper-optimal"] = detail::Painter(g.size()).fill(clique, 0).done();
    out.expected["eq-welfare"] = Fraction(n, 2);
    out.expected["opt"] = Fraction(n - 1);
    out.expected["ratio"] = Fraction(2) - Fraction(2, n);
    out.regions["clique"] = clique;
    out.regions["path"] = path;
    return out;
}

/// Line of 2n-2 nodes.
inline ConstructionOutput gen_line_pairs(std::int32_t n)
{
    if (n < 4 || n % 2 != 0) {
        throw InputError("line-pairs needs an even n >= 4");
    }
    detail::GraphBuilder g;
    const auto line = g.add_nodes(2 * n - 2);
    g.path(line);

    ConstructionOutput out;
    out.family = "line-pairs";
    out.game = Game {g.build(), TypeCounts({n})};
    out.named["paper-equilibrium"] = detail::pairs_on_line(line, n, g.size());
    out.named["paper-optimal"] = detail::Painter(g.size()).fill(detail::slice(line, 0, static_cast<std::size_t>(n)), 0).done();
    out.expected["eq-welfare"] = Fraction(n, 2);
    out.expected["opt"] = Fraction(2 * n, 3) - Fraction(1, 3);
    out.expected["ratio"] = Fraction(4, 3) - Fraction(2, 3 * static_cast<std::int64_t>(n));
    return out;
}

/// One-type stability gadget: C = K6, independent sets J (4), Z (3 lambda), I_1..I_lambda (3 each).
/// C-J and J-Z are complete bipartite, consecutive I sets likewise, and the first Z node
/// touches the first node of I_1. With lambda = 1 nothing else reaches I_1, so that Z node
/// is joined to all of I_1 to keep the graph connected.
inline ConstructionOutput gen_pos_one_type(std::int32_t lambda)
{
    if (lambda < 1) {
        throw InputError("pos-one-type needs lambda >= 1");
    }
    detail::GraphBuilder g;
    const auto c = g.add_nodes(6);
    const auto j = g.add_nodes(4);
    const auto z = g.add_nodes(3 * lambda);
    std::vector<std::vector<NodeId>> islands;
    for (std::int32_t l = 0; l < lambda; ++l) {
        islands.push_back(g.add_nodes(3));
    }
    g.clique(c);
    g.join(c, j);
    g.join(j, z);
    if (lambda == 1) {
        g.join({z.front()}, islands.front());
    } else {
        g.edge(z.front(), islands.front().front());
    }
    for (std::size_t l = 1; l < islands.size(); ++l) {
        g.join(islands[l - 1], islands[l]);
    }

    const std::int64_t lam = lambda;
    ConstructionOutput out;
    out.family = "pos-one-type";
    out.game = Game {g.build(), TypeCounts({3 * lambda + 10})};
    out.named["paper-equilibrium"] = detail::Painter(g.size()).fill(c, 0).fill(j, 0).fill(z, 0).done();
    out.expected["eq-welfare"] = Fraction(12 * lam, 5) + Fraction(3 * (47 * lam + 103), 5 * (3 * lam + 7));
    if (lambda >= 2) {
        detail::Painter paint(g.size());
        paint.fill(c, 0).fill(j, 0);
        for (const auto& island : islands) {
            paint.fill(island, 0);
        }
        out.named["paper-opt-candidate"] = paint.done();
        out.expected["opt-candidate-welfare"] = Fraction(18 * lam, 7) + Fraction(573, 70);
    }
    out.regions["C"] = c;
    out.regions["J"] = j;
    out.regions["Z"] = z;
    for (std::size_t l = 0; l < islands.size(); ++l) {
        out.regions["I" + std::to_string(l + 1)] = islands[l];
    }
    return out;
}

/// Star with center c and n-1 leaves, plus one component per type (sizes n_l) whose
/// first node is joined to c. Paths attach at an endpoint. Type 0 has exactly two agents.
inline ConstructionOutput gen_star_cliques(const TypeCounts& counts, ComponentShape shape)
{
    if (counts.k() < 2) {
        throw InputError("star-cliques needs k >= 2");
    }
    if (counts.min_count() < 2) {
        throw InputError("star-cliques needs at least two agents per type");
    }
    if (counts.count(0) != 2) {
        throw InputError("star-cliques needs exactly two agents of type 0");
    }
    const std::int32_t n = counts.total();
    detail::GraphBuilder g;
    const NodeId center = g.add_node();
    const auto leaves = g.add_nodes(n - 1);
    g.join({center}, leaves);
    std::vector<std::vector<NodeId>> parts;
    for (TypeId t = 0; t < counts.k(); ++t) {
        parts.push_back(g.add_nodes(counts.count(t)));
        g.component(parts.back(), shape);
        g.edge(center, parts.back().front());
    }

    detail::Painter eq(g.size());
    eq.set(center, 0).set(leaves[0], 0);
    std::size_t leaf = 1;
    for (TypeId t = 1; t < counts.k(); ++t) {
        for (std::int32_t i = 0; i < counts.count(t); ++i) {
            eq.set(leaves[leaf++], t);
        }
    }
    detail::Painter opt(g.size());
    Fraction opt_value;
    for (TypeId t = 0; t < counts.k(); ++t) {
        opt.fill(parts[static_cast<std::size_t>(t)], t);
        opt_value += shape == ComponentShape::Clique ? Fraction(counts.count(t) - 1)
                                                     : detail::path_block_welfare(counts.count(t));
    }

    ConstructionOutput out;
    out.family = "star-cliques";
    out.game = Game {g.build(), counts};
    out.named["paper-equilibrium"] = eq.done();
    out.named["paper-optimal"] = opt.done();
    out.expected["eq-welfare"] = Fraction(1, 2) + Fraction(1, n);
    out.expected["opt"] = opt_value;
    out.expected["ratio"] = opt_value / out.expected["eq-welfare"];
    out.regions["center"] = {center};
    out.regions["leaves"] = leaves;
    for (std::size_t t = 0; t < parts.size(); ++t) {
        out.regions["component" + std::to_string(t)] = parts[t];
    }
    return out;
}

/// Balanced game with four agents per type on a star-like tree: root c with n-4
/// children, the last of which carries beta_1, which has leaf children beta_2, beta_3;
/// plus one size-4 component per type joined to c.
inline ConstructionOutput gen_balanced_star_tree(std::int32_t k, ComponentShape shape)
{
    if (k < 2) {
        throw InputError("balanced-star-tree needs k >= 2");
    }
    const std::int32_t n = 4 * k;
    detail::GraphBuilder g;
    const NodeId root = g.add_node();
    const auto children = g.add_nodes(n - 4);
    const auto beta = g.add_nodes(3);
    g.join({root}, children);
    g.edge(children.back(), beta[0]);
    g.edge(beta[0], beta[1]);
    g.edge(beta[0], beta[2]);
    std::vector<std::vector<NodeId>> parts;
    for (TypeId t = 0; t < k; ++t) {
        parts.push_back(g.add_nodes(4));
        g.component(parts.back(), shape);
        g.edge(root, parts.back().front());
    }

    detail::Painter eq(g.size());
    eq.set(root, 0).fill(beta, 0);
    for (std::size_t i = 0; i < children.size(); ++i) {
        eq.set(children[i], static_cast<TypeId>(1 + i / 4));
    }
    detail::Painter opt(g.size());
    for (TypeId t = 0; t < k; ++t) {
        opt.fill(parts[static_cast<std::size_t>(t)], t);
    }
    const Fraction opt_value = shape == ComponentShape::Clique ? Fraction(3 * k) : Fraction(7 * k, 3);

    ConstructionOutput out;
    out.family = "balanced-star-tree";
    out.game = Game {g.build(), TypeCounts(std::vector<std::int32_t>(static_cast<std::size_t>(k), 4))};
    out.named["paper-equilibrium"] = eq.done();
    out.named["paper-optimal"] = opt.done();
    out.expected["eq-welfare"] = Fraction(3, 2);
    out.expected["opt"] = opt_value;
    out.expected["ratio"] = opt_value / Fraction(3, 2);
    out.regions["root"] = {root};
    out.regions["children"] = children;
    out.regions["beta"] = beta;
    for (std::size_t t = 0; t < parts.size(); ++t) {
        out.regions["component" + std::to_string(t)] = parts[t];
    }
    return out;
}

/// Balanced two-type gadget: clique C of y-alpha+1 nodes, independent sets I (alpha) and
/// J (y); every I node is joined to every node of C and J. Type 0 is red, type 1 blue.
inline ConstructionOutput gen_two_type_pos(std::int32_t y, std::int32_t alpha)
{
    if (alpha < 1 || alpha % 2 == 0 || alpha >= y) {
        throw InputError("two-type-pos needs an odd alpha with 1 <= alpha < y");
    }
    detail::GraphBuilder g;
    const auto c = g.add_nodes(y - alpha + 1);
    const auto i = g.add_nodes(alpha);
    const auto j = g.add_nodes(y);
    g.clique(c);
    g.join(i, c);
    g.join(i, j);

    const auto half_low = static_cast<std::size_t>((alpha - 1) / 2);
    const auto half_high = static_cast<std::size_t>((alpha + 1) / 2);
    detail::Painter eq(g.size());
    eq.fill(c, 0)
        .fill(detail::slice(i, 0, half_low), 0)
        .fill(detail::slice(i, half_low, half_high), 1)
        .fill(detail::slice(j, 0, half_low), 0)
        .fill(detail::slice(j, half_low, static_cast<std::size_t>(y) - half_high), 1);

    detail::Painter cand(g.size());
    cand.fill(c, 0)
        .fill(i, 1)
        .fill(detail::slice(j, 0, static_cast<std::size_t>(alpha - 1)), 0)
        .fill(detail::slice(j, static_cast<std::size_t>(alpha - 1), static_cast<std::size_t>(y - alpha)), 1);

    const std::int64_t yy = y;
    const std::int64_t a = alpha;
    ConstructionOutput out;
    out.family = "two-type-pos";
    out.game = Game {g.build(), TypeCounts({y, y})};
    out.named["paper-equilibrium"] = eq.done();
    out.named["candidate-optimal"] = cand.done();
    out.expected["opt-lower-bound"] = Fraction(yy - a) * (Fraction(yy - a, yy + 1) + Fraction(a, a + 1));
    out.expected["candidate-optimal-welfare"] = Fraction((yy + 1 - a) * (yy - a), yy + 1) +
                                                Fraction(a * (yy - a), 2 * yy - a + 1) +
                                                Fraction((yy - a) * a, a + 1);
    out.expected["eq-upper-bound"] = Fraction((3 * a + 1) * yy, 2 * a);
    out.regions["C"] = c;
    out.regions["I"] = i;
    out.regions["J"] = j;
    return out;
}

/// Line coloring with one empty node whose two neighbors have different types, each of
/// those two types keeping its other two agents as an adjacent pair with utility 1/3,
/// every other agent at utility 0, and which passes the equilibrium check. Depth-first
/// in lexicographic order; returns the first hit.
inline std::optional<Assignment> search_line_equilibrium(std::int32_t k)
{
    const std::int32_t len = 3 * k + 1;
    std::vector<TypeId> cells(static_cast<std::size_t>(len), kEmpty);
    std::vector<std::int32_t> left(static_cast<std::size_t>(k), 3);
    bool empty_used = false;
    detail::GraphBuilder g;
    g.path(g.add_nodes(len));
    const Game game {g.build(), TypeCounts(std::vector<std::int32_t>(static_cast<std::size_t>(k), 3))};

    auto at = [&](std::int32_t p) { return p < 0 || p >= len ? kEmpty : cells[static_cast<std::size_t>(p)]; };

    // Once position p and both its neighbors are fixed, p must match the profile locally.
    auto settled_ok = [&](std::int32_t p) {
        const TypeId t = at(p);
        if (t == kEmpty) {
            return p > 0 && p < len - 1 && at(p - 1) != kEmpty && at(p + 1) != kEmpty && at(p - 1) != at(p + 1);
        }
        const bool same_left = at(p - 1) == t;
        const bool same_right = at(p + 1) == t;
        if (same_left && same_right) {
            return false;
        }
        if (same_left || same_right) {
            // pair member: both neighbors occupied so the utility is exactly 1/3
            return at(p - 1) != kEmpty && at(p + 1) != kEmpty && p > 0 && p < len - 1;
        }
        return true;
    };

    auto profile_ok = [&]() {
        const auto gap = static_cast<std::int32_t>(std::find(cells.begin(), cells.end(), kEmpty) - cells.begin());
        const TypeId a = at(gap - 1);
        const TypeId b = at(gap + 1);
        std::vector<std::int32_t> pairs(static_cast<std::size_t>(k), 0);
        for (std::int32_t p = 0; p + 1 < len; ++p) {
            if (at(p) != kEmpty && at(p) == at(p + 1)) {
                ++pairs[static_cast<std::size_t>(at(p))];
            }
        }
        for (TypeId t = 0; t < k; ++t) {
            const bool flank = t == a || t == b;
            if (pairs[static_cast<std::size_t>(t)] != (flank ? 1 : 0)) {
                return false;
            }
        }
        return true;
    };

    std::optional<Assignment> found;
    std::function<void(std::int32_t)> walk = [&](std::int32_t p) {
        if (found) {
            return;
        }
        if (p >= 2 && !settled_ok(p - 2)) {
            return;
        }
        if (p == len) {
            if (!settled_ok(len - 2) || !settled_ok(len - 1) || !profile_ok()) {
                return;
            }
            Assignment asg(cells);
            if (is_equilibrium(game, asg).equilibrium) {
                found = std::move(asg);
            }
            return;
        }
        if (!empty_used) {
            empty_used = true;
            cells[static_cast<std::size_t>(p)] = kEmpty;
            walk(p + 1);
            empty_used = false;
        }
        for (TypeId t = 0; t < k; ++t) {
            if (left[static_cast<std::size_t>(t)] > 0) {
                --left[static_cast<std::size_t>(t)];
                cells[static_cast<std::size_t>(p)] = t;
                walk(p + 1);
                cells[static_cast<std::size_t>(p)] = kEmpty;
                ++left[static_cast<std::size_t>(t)];
            }
        }
    };
    walk(0);
    return found;
}

/// Balanced game with three agents per type on a line of 3k+1 nodes.
inline ConstructionOutput gen_line_multitype(std::int32_t k)
{
    if (k < 2) {
        throw InputError("line-multitype needs k >= 2");
    }
    const std::int32_t len = 3 * k + 1;
    detail::GraphBuilder g;
    const auto line = g.add_nodes(len);
    g.path(line);

    Assignment eq;
    if (k == 2) {
        // R R B _ R B B
        eq = Assignment({0, 0, 1, kEmpty, 0, 1, 1});
    } else if (k == 3) {
        // C R R C B B C R _ B
        eq = Assignment({2, 0, 0, 2, 1, 1, 2, 0, kEmpty, 1});
    } else {
        auto hit = search_line_equilibrium(k);
        if (!hit) {
            throw ConstructionError("no line equilibrium with the required profile for k = " + std::to_string(k));
        }
        eq = *hit;
    }

    // type 0 block, the empty node, then every other type in order
    std::vector<TypeId> opt_cells {0, 0, 0, kEmpty};
    for (TypeId t = 1; t < k; ++t) {
        opt_cells.insert(opt_cells.end(), 3, t);
    }

    const std::int64_t kk = k;
    ConstructionOutput out;
    out.family = "line-multitype";
    out.game = Game {g.build(), TypeCounts(std::vector<std::int32_t>(static_cast<std::size_t>(k), 3))};
    out.named["paper-equilibrium"] = eq;
    out.named["paper-optimal"] = Assignment(opt_cells);
    out.expected["eq-welfare"] = k == 2 ? Fraction(5, 3) : Fraction(4, 3);
    out.expected["opt"] = k == 2 ? Fraction(10, 3) : Fraction(4 * kk + 2, 3);
    out.expected["ratio"] = k == 2 ? Fraction(2) : Fraction(2 * kk + 1, 2);
    return out;
}

/// Two red movers cycling over nodes alpha, beta, gamma (alpha-beta adjacent) among
/// fixed stub agents: 1 red + 1 blue at alpha, 34 red + 65 blue at beta, 49 red + 50
/// blue at gamma. One alpha stub is linked to one gamma stub so the graph is a tree.
/// With `balanced`, 30 extra red stubs hang off a path so both types have 116 agents.
inline ConstructionOutput gen_no_potential_gadget(bool balanced = false)
{
    detail::GraphBuilder g;
    const NodeId alpha = g.add_node();
    const NodeId beta = g.add_node();
    const NodeId gamma = g.add_node();
    g.edge(alpha, beta);

    std::vector<NodeId> red_stubs;
    std::vector<NodeId> blue_stubs;
    std::vector<NodeId> alpha_stubs;
    std::vector<NodeId> gamma_stubs;
    auto stubs = [&](NodeId hub, std::int32_t red, std::int32_t blue, std::vector<NodeId>* keep) {
        for (NodeId v : g.add_nodes(red)) {
            g.edge(hub, v);
            red_stubs.push_back(v);
            if (keep) {
                keep->push_back(v);
            }
        }
        for (NodeId v : g.add_nodes(blue)) {
            g.edge(hub, v);
            blue_stubs.push_back(v);
            if (keep) {
                keep->push_back(v);
            }
        }
    };
    stubs(alpha, 1, 1, &alpha_stubs);
    stubs(beta, 34, 65, nullptr);
    stubs(gamma, 49, 50, &gamma_stubs);
    g.edge(alpha_stubs.front(), gamma_stubs.front());

    std::vector<NodeId> padding;
    if (balanced) {
        padding = g.add_nodes(30);
        g.edge(gamma_stubs.back(), padding.front());
        g.path(padding);
    }

    const auto reds = static_cast<std::int32_t>(red_stubs.size() + padding.size()) + 2;
    const auto blues = static_cast<std::int32_t>(blue_stubs.size());

    auto with_movers = [&](NodeId a, NodeId b) {
        detail::Painter paint(g.size());
        paint.fill(red_stubs, 0).fill(blue_stubs, 1).fill(padding, 0).set(a, 0).set(b, 0);
        return paint.done();
    };

    ConstructionOutput out;
    out.family = "no-potential";
    out.game = Game {g.build(), TypeCounts({reds, blues})};
    out.named["start"] = with_movers(alpha, gamma);
    out.named["start-i-alpha-j-gamma"] = out.named["start"];
    out.named["start-i-beta-j-gamma"] = with_movers(beta, gamma);
    out.named["start-i-beta-j-alpha"] = with_movers(beta, alpha);
    out.movers["start"] = {alpha, gamma};
    out.movers["start-i-alpha-j-gamma"] = {alpha, gamma};
    out.movers["start-i-beta-j-gamma"] = {beta, gamma};
    out.movers["start-i-beta-j-alpha"] = {alpha, beta};
    out.expected["u-i-at-alpha"] = Fraction(1, 3);
    out.expected["u-i-jump-to-beta"] = Fraction(34, 100);
    out.expected["u-j-at-gamma"] = Fraction(49, 100);
    out.expected["u-j-jump-to-alpha"] = Fraction(1, 2);
    out.expected["u-i-at-beta-with-j-at-alpha"] = Fraction(35, 101);
    out.expected["u-i-jump-to-gamma"] = Fraction(49, 100);
    out.regions["alpha"] = {alpha};
    out.regions["beta"] = {beta};
    out.regions["gamma"] = {gamma};
    out.regions["red-stubs"] = red_stubs;
    out.regions["blue-stubs"] = blue_stubs;
    out.regions["padding"] = padding;
    return out;
}

} // namespace mschelling
