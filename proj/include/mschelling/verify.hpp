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

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mschelling/analysis.hpp"
#include "mschelling/constructions.hpp"
#include "mschelling/dynamics.hpp"
#include "mschelling/enumerate.hpp"
#include "mschelling/fraction.hpp"
#include "mschelling/model.hpp"
#include "mschelling/random.hpp"
#include "mschelling/utility.hpp"

namespace mschelling::verify {

struct Row {
    std::string label;
    std::string expected;
    std::string computed;
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Row> rows;
    double seconds = 0.0;

    bool passed() const
    {
        if (rows.empty()) {
            return false;
        }
        for (const auto& r : rows) {
            if (!r.pass) {
                return false;
            }
        }
        return true;
    }
};

inline Row equal_row(std::string label, const Fraction& expected, const Fraction& computed)
{
    return {std::move(label), expected.to_string(), computed.to_string(), expected == computed};
}

inline Row ratio_row(std::string label, const Fraction& expected, const Ratio& computed)
{
    return {std::move(label), expected.to_string(), computed.to_string(), computed.finite() && computed.value == expected};
}

inline Row true_row(std::string label, bool ok, std::string computed = {})
{
    if (computed.empty()) {
        computed = ok ? "true" : "false";
    }
    return {std::move(label), "true", std::move(computed), ok};
}

inline Row count_row(std::string label, std::uint64_t expected, std::uint64_t computed)
{
    return {std::move(label), std::to_string(expected), std::to_string(computed), expected == computed};
}

/// Random one-type game with 3..max_nodes nodes and 2..min(max_agents, nodes-1) agents.
inline Game random_one_type_game(std::uint64_t seed, std::int32_t max_agents, std::int32_t max_nodes)
{
    std::mt19937_64 rng(seed);
    const auto nodes = std::uniform_int_distribution<std::int32_t>(3, max_nodes)(rng);
    const auto agents = std::uniform_int_distribution<std::int32_t>(2, std::min(max_agents, nodes - 1))(rng);
    const double p = std::uniform_real_distribution<double>(0.1, 0.6)(rng);
    Topology topology = random_connected_topology(nodes, p, rng);
    return Game {std::move(topology), TypeCounts({agents})};
}

/// Does `graph` contain `size` pairwise adjacent nodes? Plain subset scan.
inline bool has_clique(const Topology& graph, std::int32_t size)
{
    const std::int32_t n = graph.node_count();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != size) {
            continue;
        }
        bool ok = true;
        for (NodeId a = 0; a < n && ok; ++a) {
            for (NodeId b = a + 1; b < n && ok; ++b) {
                if ((mask >> a & 1u) && (mask >> b & 1u) && !graph.adjacent(a, b)) {
                    ok = false;
                }
            }
        }
        if (ok) {
            return true;
        }
    }
    return false;
}

inline constexpr std::uint64_t kLargeCap = 40'000'000;
inline constexpr int kCriteria = 14;

/// Runs the acceptance criteria. Exhaustive metrics are cached by instance name so the
/// class-bound sweep reuses the earlier enumerations.
class Suite {
public:
    CriterionResult run(int id)
    {
        CriterionResult out;
        out.id = id;
        const auto start = std::chrono::steady_clock::now();
        switch (id) {
        case 1: clique_path(out); break;
        case 2: line_pairs(out); break;
        case 3: star_cliques(out); break;
        case 4: balanced_star_tree(out); break;
        case 5: line_multitype(out); break;
        case 6: tree_variants(out); break;
        case 7: pos_one_type(out); break;
        case 8: two_type_pos(out); break;
        case 9: no_potential(out); break;
        case 10: ordinal_potential(out); break;
        case 11: equilibrium_structure(out); break;
        case 12: pos_upper(out); break;
        case 13: clique_hardness(out); break;
        case 14: class_bounds(out); break;
        default: throw InputError("no acceptance criterion " + std::to_string(id));
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    }

    std::vector<CriterionResult> run_all()
    {
        std::vector<CriterionResult> out;
        for (int id = 1; id <= kCriteria; ++id) {
            out.push_back(run(id));
        }
        return out;
    }

private:
    struct Instance {
        Game game;
        MetricsReport metrics;
    };

    const MetricsReport& metrics(const std::string& name, const Game& game, std::uint64_t cap = kDefaultCap)
    {
        auto it = cache_.find(name);
        if (it == cache_.end()) {
            it = cache_.emplace(name, Instance {game, instance_metrics(game, cap)}).first;
        }
        return it->second.metrics;
    }

    static std::string suffix(std::int64_t v) { return " (" + std::to_string(v) + ")"; }

    // --- named constructions -------------------------------------------------

    void clique_path(CriterionResult& out)
    {
        out.title = "one-type clique with attached path";
        for (std::int32_t n : {4, 6}) {
            const auto c = gen_clique_path(n);
            const auto& eq = c.named.at("paper-equilibrium");
            const auto& m = metrics("clique-path n=" + std::to_string(n), c.game);
            const auto tag = suffix(n);
            out.rows.push_back(true_row("equilibrium is stable" + tag, is_equilibrium(c.game, eq).equilibrium));
            out.rows.push_back(equal_row("equilibrium welfare n/2" + tag, Fraction(n, 2), social_welfare(c.game, eq)));
            out.rows.push_back(equal_row("OPT = n-1" + tag, Fraction(n - 1), m.opt));
            out.rows.push_back(ratio_row("PoA = 2-2/n" + tag, Fraction(2) - Fraction(2, n), m.poa));
        }
    }

    void line_pairs(CriterionResult& out)
    {
        out.title = "one-type line with agent pairs";
        for (std::int32_t n : {4, 6}) {
            const auto c = gen_line_pairs(n);
            const auto& eq = c.named.at("paper-equilibrium");
            const auto& m = metrics("line-pairs n=" + std::to_string(n), c.game);
            const auto tag = suffix(n);
            out.rows.push_back(true_row("equilibrium is stable" + tag, is_equilibrium(c.game, eq).equilibrium));
            out.rows.push_back(
                ratio_row("PoA = 4/3-2/(3n)" + tag, Fraction(4, 3) - Fraction(2, 3 * static_cast<std::int64_t>(n)), m.poa));
        }
    }

    void star_cliques(CriterionResult& out)
    {
        out.title = "star with per-type cliques, counts (2,2)";
        const auto c = gen_star_cliques(TypeCounts({2, 2}), ComponentShape::Clique);
        const auto& eq = c.named.at("paper-equilibrium");
        const auto& m = metrics("star-cliques 2,2 clique", c.game);
        out.rows.push_back(true_row("equilibrium is stable", is_equilibrium(c.game, eq).equilibrium));
        out.rows.push_back(equal_row("equilibrium welfare 3/4", Fraction(3, 4), social_welfare(c.game, eq)));
        out.rows.push_back(equal_row("equilibrium welfare 1/2+1/n", Fraction(1, 2) + Fraction(1, 4), social_welfare(c.game, eq)));
        out.rows.push_back(equal_row("OPT = n-k", Fraction(2), m.opt));
        out.rows.push_back(ratio_row("PoA 8/3", Fraction(8, 3), m.poa));
    }

    void balanced_star_tree(CriterionResult& out)
    {
        out.title = "balanced star tree k=2, clique components";
        const auto c = gen_balanced_star_tree(2, ComponentShape::Clique);
        const auto& eq = c.named.at("paper-equilibrium");
        const auto& m = metrics("balanced-star-tree k=2 clique", c.game);
        out.rows.push_back(true_row("equilibrium is stable", is_equilibrium(c.game, eq).equilibrium));
        out.rows.push_back(equal_row("equilibrium welfare 3/2", Fraction(3, 2), social_welfare(c.game, eq)));
        out.rows.push_back(equal_row("OPT 6", Fraction(6), m.opt));
        out.rows.push_back(ratio_row("PoA 4 = 2k", Fraction(4), m.poa));
    }

    void line_multitype(CriterionResult& out)
    {
        out.title = "balanced multi-type lines";
        const std::map<int, std::array<Fraction, 3>> expected {
            {2, {Fraction(5, 3), Fraction(10, 3), Fraction(2)}},
            {3, {Fraction(4, 3), Fraction(14, 3), Fraction(7, 2)}},
        };
        for (const auto& [k, want] : expected) {
            const auto c = gen_line_multitype(k);
            const auto& eq = c.named.at("paper-equilibrium");
            const auto& m = metrics("line-multitype k=" + std::to_string(k), c.game);
            const auto tag = " (k=" + std::to_string(k) + ")";
            const Fraction sw = social_welfare(c.game, eq);
            out.rows.push_back(true_row("equilibrium is stable" + tag, is_equilibrium(c.game, eq).equilibrium));
            out.rows.push_back(equal_row("equilibrium welfare" + tag, want[0], sw));
            out.rows.push_back(equal_row("OPT" + tag, want[1], m.opt));
            out.rows.push_back(equal_row("OPT / SW(eq)" + tag, want[2], m.opt / sw));
        }
    }

    void tree_variants(CriterionResult& out)
    {
        out.title = "tree variants with path components";
        {
            const auto c = gen_balanced_star_tree(2, ComponentShape::Path);
            const auto& eq = c.named.at("paper-equilibrium");
            const auto& m = metrics("balanced-star-tree k=2 path", c.game);
            const Fraction sw = social_welfare(c.game, eq);
            out.rows.push_back(true_row("equilibrium is stable (k=2)", is_equilibrium(c.game, eq).equilibrium));
            out.rows.push_back(equal_row("OPT (k=2)", Fraction(14, 3), m.opt));
            out.rows.push_back(equal_row("OPT / SW(eq) = 14k/9 (k=2)", Fraction(28, 9), m.opt / sw));
        }
        {
            const auto c = gen_star_cliques(TypeCounts({2, 2, 2, 2}), ComponentShape::Path);
            const auto& eq = c.named.at("paper-equilibrium");
            const auto& m = metrics("star-cliques 2,2,2,2 path", c.game, kLargeCap);
            const Fraction sw = social_welfare(c.game, eq);
            out.rows.push_back(true_row("equilibrium is stable (k=4)", is_equilibrium(c.game, eq).equilibrium));
            out.rows.push_back(equal_row("OPT (k=4)", Fraction(4), m.opt));
            out.rows.push_back(equal_row("equilibrium welfare (k=4)", Fraction(5, 8), sw));
            out.rows.push_back(equal_row("OPT / SW(eq) = 2k^2/(k+1) (k=4)", Fraction(32, 5), m.opt / sw));
        }
    }

    void pos_one_type(CriterionResult& out)
    {
        out.title = "one-type price-of-stability gadget";
        for (std::int32_t lam : {1, 2}) {
            const auto c = gen_pos_one_type(lam);
            const auto& v = c.named.at("paper-equilibrium");
            const auto tag = " (lambda=" + std::to_string(lam) + ")";
            const std::int64_t l = lam;
            const Fraction closed = Fraction(12 * l, 5) + Fraction(3 * (47 * l + 103), 5 * (3 * l + 7));
            const Fraction sw = social_welfare(c.game, v);
            const auto search = exhaustive_search(c.game, {kLargeCap, true});
            cache_.emplace("pos-one-type lambda=" + std::to_string(lam), Instance {c.game, metrics_from_search(search)});
            out.rows.push_back(true_row("search exhaustive" + tag, search.exhaustive));
            out.rows.push_back(equal_row("SW(v) closed form" + tag, closed, sw));
            out.rows.push_back(count_row("equilibrium count" + tag, 1, search.equilibrium_count));
            out.rows.push_back(true_row("unique equilibrium is v" + tag,
                                        search.equilibria.size() == 1 && search.equilibria.front() == v));
            const Fraction pos = *search.opt / sw;
            out.rows.push_back({"PoS = OPT/SW(v) > 1" + tag, "> 1/1", pos.to_string(), pos > Fraction(1)});
        }
    }

    void two_type_pos(CriterionResult& out)
    {
        out.title = "two-type price-of-stability gadget y=6, alpha=3";
        const std::int32_t y = 6;
        const std::int32_t alpha = 3;
        const auto c = gen_two_type_pos(y, alpha);
        const auto& vhat = c.named.at("paper-equilibrium");
        const auto search = exhaustive_search(c.game, {kDefaultCap, true});
        cache_.emplace("two-type-pos y=6 alpha=3", Instance {c.game, metrics_from_search(search)});
        out.rows.push_back(true_row("search exhaustive", search.exhaustive));
        out.rows.push_back(true_row("v-hat is stable", is_equilibrium(c.game, vhat).equilibrium));

        const auto& in_i = c.regions.at("I");
        std::uint64_t bad = 0;
        for (const auto& eq : search.equilibria) {
            std::int64_t r = 0;
            std::int64_t b = 0;
            for (NodeId v : in_i) {
                r += eq.type_at(v) == 0;
                b += eq.type_at(v) == 1;
            }
            // max{r,b} <= (alpha+1)/2, compared as 2*max <= alpha+1
            if (std::abs(r - b) > 2 || 2 * std::max(r, b) > alpha + 1) {
                ++bad;
            }
        }
        out.rows.push_back(count_row("equilibria violating the I-balance", 0, bad));
        out.rows.push_back(true_row("at least one equilibrium", search.equilibrium_count > 0,
                                    std::to_string(search.equilibrium_count)));
        const Fraction opt = *search.opt;
        out.rows.push_back({"OPT >= closed-form lower bound", ">= " + c.expected.at("opt-lower-bound").to_string(),
                            opt.to_string(), opt >= c.expected.at("opt-lower-bound")});
        const Ratio pos = search.equilibrium_count > 0 ? Ratio::of(opt, *search.max_equilibrium_welfare) : Ratio {};
        out.rows.push_back({"instance PoS", ">= 1/1", pos.to_string(), pos.finite() && pos.value >= Fraction(1)});
    }

    // --- dynamics --------------------------------------------------------------

    void no_potential(CriterionResult& out)
    {
        out.title = "restricted dynamics cycle gadget";
        const std::vector<std::pair<std::string, SchedulerPolicy>> policies {
            {"best", SchedulerPolicy::best_improvement()},
            {"first", SchedulerPolicy::first_improvement()},
            {"min-utility", SchedulerPolicy::min_utility_first()},
        };
        for (bool balanced : {false, true}) {
            const auto c = gen_no_potential_gadget(balanced);
            const auto& start = c.named.at("start-i-alpha-j-gamma");
            const auto& movers = c.movers.at("start-i-alpha-j-gamma");
            const NodeId a = c.regions.at("alpha").front();
            const NodeId b = c.regions.at("beta").front();
            const NodeId g = c.regions.at("gamma").front();
            struct Want {
                NodeId from;
                NodeId to;
                Fraction before;
                Fraction after;
            };
            const std::vector<Want> want {
                {a, b, Fraction(1, 3), Fraction(34, 100)},
                {g, a, Fraction(49, 100), Fraction(1, 2)},
                {b, g, Fraction(35, 101), Fraction(49, 100)},
            };
            for (const auto& [name, base] : policies) {
                const auto trace = run_dynamics(c.game, start, base.with_movers(movers));
                const auto tag = " (" + name + (balanced ? ", padded)" : ")");
                bool same = trace.jumps.size() == want.size();
                std::ostringstream got;
                for (std::size_t i = 0; i < trace.jumps.size(); ++i) {
                    const auto& j = trace.jumps[i];
                    got << (i ? ", " : "") << j.utility_before.to_string() << "->" << j.utility_after.to_string();
                    if (same) {
                        const auto& w = want[i];
                        same = j.from == w.from && j.to == w.to && j.utility_before == w.before && j.utility_after == w.after;
                    }
                }
                out.rows.push_back({"jump sequence" + tag, "1/3->17/50, 49/100->1/2, 35/101->49/100", got.str(), same});
                const auto states = trace.states();
                const bool cycled = trace.outcome.status == OutcomeStatus::CycleDetected && trace.outcome.period == 3 &&
                                    states.size() == 4 && states.back() == states.front();
                out.rows.push_back({"cycle back to the start" + tag, "cycle-detected period 3",
                                    to_string(trace.outcome.status) + " period " + std::to_string(trace.outcome.period),
                                    cycled});
            }
        }
    }

    void ordinal_potential(CriterionResult& out)
    {
        out.title = "ordinal potential on random one-type games";
        std::uint64_t not_converged = 0;
        std::uint64_t too_long = 0;
        std::uint64_t flat_jumps = 0;
        std::uint64_t sign_mismatch = 0;
        std::uint64_t checked_pairs = 0;
        std::uint64_t total_jumps = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const Game game = random_one_type_game(1000 + seed, 6, 8);
            std::mt19937_64 rng(seed);
            const Assignment start = random_assignment(game, rng);
            const auto trace = run_dynamics(game, start, SchedulerPolicy::seeded_random(seed));
            const std::int64_t n = game.agent_count();
            not_converged += trace.outcome.status != OutcomeStatus::Converged;
            too_long += static_cast<std::int64_t>(trace.jumps.size()) > n * (n - 1);
            total_jumps += trace.jumps.size();
            const auto states = trace.states();
            for (std::size_t i = 0; i < states.size(); ++i) {
                if (i > 0 && potential(game, states[i]).value <= potential(game, states[i - 1]).value) {
                    ++flat_jumps;
                }
                for (NodeId from : states[i].occupied_nodes()) {
                    for (NodeId to : states[i].empty_nodes()) {
                        ++checked_pairs;
                        sign_mismatch += !potential_agrees(game, states[i], from, to);
                    }
                }
            }
        }
        out.rows.push_back(count_row("runs not converged", 0, not_converged));
        out.rows.push_back(count_row("runs over n(n-1) jumps", 0, too_long));
        out.rows.push_back(count_row("jumps without potential increase (of " + std::to_string(total_jumps) + ")", 0,
                                     flat_jumps));
        out.rows.push_back(
            count_row("sign(dPhi) != sign(du) over " + std::to_string(checked_pairs) + " moves", 0, sign_mismatch));
    }

    void equilibrium_structure(CriterionResult& out)
    {
        out.title = "every equilibrium agent has a neighbor";
        std::uint64_t games_without_eq = 0;
        std::uint64_t low = 0;
        std::uint64_t equilibria = 0;
        const Fraction half(1, 2);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const Game game = random_one_type_game(2000 + seed, 5, 7);
            const auto report = enumerate_equilibria(game);
            games_without_eq += report.equilibrium_count == 0;
            for (const auto& eq : report.equilibria) {
                ++equilibria;
                for (NodeId v : eq.occupied_nodes()) {
                    low += utility(game, eq, v) < half;
                }
            }
        }
        out.rows.push_back(count_row("games without an equilibrium", 0, games_without_eq));
        out.rows.push_back(count_row("agents below 1/2 over " + std::to_string(equilibria) + " equilibria", 0, low));
    }

    void pos_upper(CriterionResult& out)
    {
        out.title = "price of stability at most 3/2 for one type";
        std::uint64_t bound_fail = 0;
        std::uint64_t too_many_low = 0;
        std::uint64_t pos_fail = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const Game game = random_one_type_game(3000 + seed, 6, 8);
            const auto report = pos_upper_experiment(game);
            bound_fail += !report.instance_pos_bound_ok;
            too_many_low += report.low_utility_agents > 2;
            const auto& m = metrics("random-one-type seed=" + std::to_string(3000 + seed), game);
            pos_fail += !(m.pos.finite() && m.pos.value >= Fraction(1) && m.pos.value <= Fraction(3, 2));
        }
        out.rows.push_back(count_row("terminal bound OPT/SW <= 3/2 violated", 0, bound_fail));
        out.rows.push_back(count_row("terminals with > 2 agents at 1/2", 0, too_many_low));
        out.rows.push_back(count_row("exhaustive PoS outside [1, 3/2]", 0, pos_fail));
    }

    void clique_hardness(CriterionResult& out)
    {
        out.title = "welfare threshold decides Clique";
        std::uint64_t disagree = 0;
        std::uint64_t yes = 0;
        std::uint64_t cases = 0;
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            std::mt19937_64 rng(4000 + seed);
            const auto nodes = std::uniform_int_distribution<std::int32_t>(4, 6)(rng);
            const double p = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
            const Topology graph = random_connected_topology(nodes, p, rng);
            for (std::int32_t lam : {3, 4}) {
                const auto red = clique_reduction(graph, lam);
                const bool decided = decide_welfare_at_least(red.game, red.instance.xi);
                const bool truth = has_clique(graph, lam);
                disagree += decided != truth || red.instance.xi != Fraction(lam - 1);
                yes += truth;
                ++cases;
            }
        }
        out.rows.push_back(count_row("disagreements over " + std::to_string(cases) + " cases (" + std::to_string(yes) +
                                         " with a clique)",
                                     0, disagree));
    }

    // --- class bounds -----------------------------------------------------------

    void class_bounds(CriterionResult& out)
    {
        out.title = "instance PoA within class bounds";
        ensure_named_instances();
        std::uint64_t checked = 0;
        for (const auto& [name, inst] : cache_) {
            for (const auto& bound : applicable_poa_bounds(inst.game)) {
                const auto& poa = inst.metrics.poa;
                const bool ok = poa.finite() && poa.value <= bound.value;
                ++checked;
                if (!ok) {
                    out.rows.push_back({name + " [" + bound.family + "]", "<= " + bound.value.to_string(), poa.to_string(),
                                        false});
                }
            }
        }
        out.rows.push_back(true_row("bounds checked over " + std::to_string(cache_.size()) + " instances", checked > 0,
                                    std::to_string(checked) + " checks"));
    }

    void ensure_named_instances()
    {
        if (cache_.count("star-cliques 2,2,2,2 path") == 0) {
            CriterionResult scratch;
            for (int id : {1, 2, 3, 4, 5, 6, 7, 8, 12}) {
                run_into(id, scratch);
            }
        }
    }

    void run_into(int id, CriterionResult& scratch)
    {
        switch (id) {
        case 1: clique_path(scratch); break;
        case 2: line_pairs(scratch); break;
        case 3: star_cliques(scratch); break;
        case 4: balanced_star_tree(scratch); break;
        case 5: line_multitype(scratch); break;
        case 6: tree_variants(scratch); break;
        case 7: pos_one_type(scratch); break;
        case 8: two_type_pos(scratch); break;
        case 12: pos_upper(scratch); break;
        default: break;
        }
    }

    std::map<std::string, Instance> cache_;
};

/// One line per row plus a summary line per criterion.
inline void print(std::ostream& os, const CriterionResult& r)
{
    for (const auto& row : r.rows) {
        os << "  " << (row.pass ? "ok  " : "FAIL") << "  " << row.label << ": expected " << row.expected << ", got "
           << row.computed << '\n';
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", r.seconds);
    os << "criterion " << (r.id < 10 ? " " : "") << r.id << ' ' << (r.passed() ? "PASS" : "FAIL") << "  " << r.title
       << " [" << buf << "]\n";
}

} // namespace mschelling::verify
