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
#include <optional>
#include <string>
#include <vector>

#include "mschelling/dynamics.hpp"
#include "mschelling/enumerate.hpp"
#include "mschelling/error.hpp"
#include "mschelling/fraction.hpp"
#include "mschelling/model.hpp"
#include "mschelling/utility.hpp"

namespace mschelling {

// ---------------------------------------------------------------------------
// Equilibria

struct EquilibriumWitness {
    NodeId from;
    NodeId to;
    Fraction utility_before;
    Fraction utility_after;
};

struct EquilibriumCheck {
    bool equilibrium = true;
    std::optional<EquilibriumWitness> witness;

    explicit operator bool() const { return equilibrium; }
};

/// Scans (from, to) pairs in ascending order and stops at the first improving jump.
inline EquilibriumCheck is_equilibrium(const Game& game, const Assignment& asg)
{
    detail::require_matching(game, asg);
    const auto empties = asg.empty_nodes();
    for (NodeId from : asg.occupied_nodes()) {
        const Fraction current = utility(game, asg, from);
        for (NodeId to : empties) {
            Fraction after = jump_utility(game, asg, from, to);
            if (after > current) {
                return {false, EquilibriumWitness {from, to, current, std::move(after)}};
            }
        }
    }
    return {true, std::nullopt};
}

struct EquilibriumReport {
    std::vector<Assignment> equilibria;
    std::uint64_t equilibrium_count = 0;
    std::optional<Fraction> min_welfare;
    std::optional<Fraction> max_welfare;
    bool exhaustive = false;
    std::uint64_t visited = 0;
};

/// Brute force over all colorings. Past `cap` colorings the walk stops and the
/// partial report is flagged non-exhaustive. Equilibria come back in canonical order.
inline EquilibriumReport enumerate_equilibria(const Game& game, std::uint64_t cap = kDefaultCap)
{
    if (cap == 0) {
        throw InputError("cap must be positive");
    }
    auto summary = exhaustive_search(game, {cap, true});
    EquilibriumReport report;
    report.equilibria = std::move(summary.equilibria);
    std::sort(report.equilibria.begin(), report.equilibria.end(), canonical_less);
    report.equilibrium_count = summary.equilibrium_count;
    report.min_welfare = summary.min_equilibrium_welfare;
    report.max_welfare = summary.max_equilibrium_welfare;
    report.exhaustive = summary.exhaustive;
    report.visited = summary.visited;
    return report;
}

struct OptimalResult {
    Fraction opt;
    Assignment argmax;
};

/// Exact maximum welfare. The maximizer is the first one met in lexicographic order.
inline OptimalResult optimal_welfare(const Game& game, std::uint64_t cap = kDefaultCap)
{
    const BigInt total = coloring_count(game);
    if (total > cap) {
        throw CapExceededError("optimal welfare needs " + total.str() + " colorings, cap is " + std::to_string(cap));
    }
    auto summary = exhaustive_search(game, {cap, false});
    if (!summary.opt) {
        throw InputError("game has no feasible coloring");
    }
    return {*summary.opt, *summary.argmax};
}

// ---------------------------------------------------------------------------
// Price of anarchy / stability of a single instance

/// OPT over an equilibrium welfare. Undefined without equilibria; unbounded when the
/// equilibrium welfare is zero but OPT is not.
struct Ratio {
    enum class Kind { Finite, Unbounded, Undefined };

    Kind kind = Kind::Undefined;
    Fraction value;

    static Ratio of(const Fraction& opt, const Fraction& eq)
    {
        if (eq.is_zero()) {
            return opt.is_zero() ? Ratio {Kind::Finite, Fraction(1)} : Ratio {Kind::Unbounded, Fraction()};
        }
        return {Kind::Finite, opt / eq};
    }

    bool finite() const { return kind == Kind::Finite; }

    std::string to_string() const
    {
        switch (kind) {
        case Kind::Finite: return value.to_string();
        case Kind::Unbounded: return "unbounded";
        case Kind::Undefined: return "undefined";
        }
        return "undefined";
    }
};

struct MetricsReport {
    Fraction opt;
    Ratio poa;
    Ratio pos;
    std::optional<Fraction> min_equilibrium_welfare;
    std::optional<Fraction> max_equilibrium_welfare;
    std::uint64_t equilibrium_count = 0;
    bool exhaustive = true;
    Assignment argmax;
};

/// Metrics over whatever part of the coloring space `search` covered.
inline MetricsReport metrics_from_search(const SearchSummary& search)
{
    if (!search.opt) {
        throw InputError("game has no feasible coloring");
    }
    MetricsReport out;
    out.opt = *search.opt;
    out.argmax = *search.argmax;
    out.exhaustive = search.exhaustive;
    out.equilibrium_count = search.equilibrium_count;
    out.min_equilibrium_welfare = search.min_equilibrium_welfare;
    out.max_equilibrium_welfare = search.max_equilibrium_welfare;
    if (search.equilibrium_count > 0) {
        out.poa = Ratio::of(out.opt, *search.min_equilibrium_welfare);
        out.pos = Ratio::of(out.opt, *search.max_equilibrium_welfare);
    }
    return out;
}

inline MetricsReport instance_metrics(const Game& game, std::uint64_t cap = kDefaultCap)
{
    auto summary = exhaustive_search(game, {cap, false});
    if (!summary.exhaustive) {
        throw CapExceededError("instance metrics need an exhaustive search; cap " + std::to_string(cap) +
                               " reached after " + std::to_string(summary.visited) + " colorings");
    }
    return metrics_from_search(summary);
}

// ---------------------------------------------------------------------------
// Welfare maximization hardness: reduction from Clique

struct CliqueInstance {
    Topology graph;
    std::int32_t lambda = 0;
    Fraction xi;
};

struct CliqueReduction {
    CliqueInstance instance;
    Game game;
};

/// One-type game with lambda agents on `graph`, threshold lambda - 1. A game needs an
/// empty node, so when lambda equals the node count a pendant node is attached to node 0;
/// a degree-one node lies on no clique of size >= 3 and cannot change the answer.
inline CliqueReduction clique_reduction(const Topology& graph, std::int32_t lambda)
{
    if (lambda < 1 || lambda > graph.node_count()) {
        throw InputError("lambda must lie in [1, node count]");
    }
    if (lambda < 2) {
        throw InputError("a game needs at least two agents; lambda must be >= 2");
    }
    if (!graph.is_connected()) {
        throw InputError("the clique reduction expects a connected graph");
    }
    Topology topology = graph;
    if (lambda == graph.node_count()) {
        auto edges = graph.edges();
        edges.push_back({0, graph.node_count()});
        topology = Topology(graph.node_count() + 1, std::move(edges));
    }
    CliqueInstance inst {graph, lambda, Fraction(lambda - 1)};
    return {std::move(inst), Game {std::move(topology), TypeCounts({lambda})}};
}

inline bool decide_welfare_at_least(const Game& game, const Fraction& xi, std::uint64_t cap = kDefaultCap)
{
    if (xi <= Fraction(0)) {
        return true;
    }
    return optimal_welfare(game, cap).opt >= xi;
}

// ---------------------------------------------------------------------------
// Price-of-stability experiment for one-type games

struct PosUpperReport {
    bool opt_is_eq = false;
    Fraction opt;
    Assignment optimal;
    Assignment terminal;
    Fraction terminal_welfare;
    std::int32_t low_utility_agents = 0; // agents with utility exactly 1/2 at the terminal
    bool instance_pos_bound_ok = false;  // OPT / SW(terminal) <= 3/2
    Outcome outcome;
    std::size_t jumps = 0;
};

/// Starts min-utility-first dynamics from an optimal assignment and reports where it ends.
inline PosUpperReport pos_upper_experiment(const Game& game, std::uint64_t cap = kDefaultCap)
{
    if (game.k() != 1) {
        throw UnsupportedError("the price-of-stability experiment is defined for one-type games");
    }
    const auto best = optimal_welfare(game, cap);
    PosUpperReport out;
    out.opt = best.opt;
    out.optimal = best.argmax;
    out.opt_is_eq = is_equilibrium(game, best.argmax).equilibrium;
    if (out.opt_is_eq) {
        out.terminal = best.argmax;
        out.outcome = {OutcomeStatus::Converged, 0, 0};
    } else {
        const auto trace = run_dynamics(game, best.argmax, SchedulerPolicy::min_utility_first());
        out.terminal = trace.final_assignment();
        out.outcome = trace.outcome;
        out.jumps = trace.jumps.size();
    }
    out.terminal_welfare = social_welfare(game, out.terminal);
    const Fraction half(1, 2);
    for (NodeId v : out.terminal.occupied_nodes()) {
        if (utility(game, out.terminal, v) == half) {
            ++out.low_utility_agents;
        }
    }
    out.instance_pos_bound_ok = out.outcome.status == OutcomeStatus::Converged &&
                                out.opt * Fraction(2) <= out.terminal_welfare * Fraction(3);
    return out;
}

// ---------------------------------------------------------------------------
// Class-level price-of-anarchy bounds a game falls under

struct ClassBound {
    std::string family;
    std::string formula;
    Fraction value;
};

/// Every tight class bound whose hypotheses the game satisfies.
inline std::vector<ClassBound> applicable_poa_bounds(const Game& game)
{
    std::vector<ClassBound> out;
    const std::int64_t n = game.agent_count();
    const std::int64_t k = game.k();
    const bool connected = game.topology.is_connected();
    const bool tree = game.topology.is_tree();
    const bool line = game.topology.is_line();
    if (!connected) {
        return out;
    }
    if (k == 1) {
        out.push_back({"k=1 arbitrary", "2 - 2/n", Fraction(2) - Fraction(2, n)});
        if (tree) {
            out.push_back({line ? "k=1 line" : "k=1 tree", "4/3 - 2/(3n)", Fraction(4, 3) - Fraction(2, 3 * n)});
        }
        return out;
    }
    if (game.types.min_count() < 2) {
        return out;
    }
    out.push_back({"k>=2 arbitrary", "2n(n-k)/(n+2)", Fraction(2 * n * (n - k), n + 2)});
    if (!game.types.is_balanced()) {
        return out;
    }
    out.push_back({"k>=2 balanced", "2k", Fraction(2 * k)});
    if (line) {
        if (k == 2) {
            out.push_back({"k=2 balanced line", "2", Fraction(2)});
        } else {
            out.push_back({"k>=3 balanced line", "k + 1/2", Fraction(2 * k + 1, 2)});
        }
    }
    if (tree) {
        if (k <= 3) {
            out.push_back({"k in {2,3} balanced tree", "14k/9", Fraction(14 * k, 9)});
        } else {
            out.push_back({"k>=4 balanced tree", "2k^2/(k+1)", Fraction(2 * k * k, k + 1)});
        }
    }
    return out;
}

} // namespace mschelling
