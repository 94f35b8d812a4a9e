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
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mschelling/mschelling.hpp"

namespace mschelling::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kInvalid = 2;
inline constexpr int kLimit = 3;
inline constexpr int kCycle = 4;
} // namespace exit_code

using io::Json;

namespace detail {

inline Json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out << text;
}

/// Writes to `path`, or to `fallback` when no path was given.
inline void emit(const std::string& path, const std::string& text, std::ostream& fallback)
{
    if (path.empty()) {
        fallback << text;
    } else {
        write_text(path, text);
    }
}

class Params {
public:
    explicit Params(const std::vector<std::string>& raw)
    {
        for (const auto& item : raw) {
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw InputError("expected key=value, got '" + item + "'");
            }
            values_[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }

    std::int32_t integer(const std::string& key, std::optional<std::int32_t> fallback = std::nullopt)
    {
        const auto raw = take(key);
        if (!raw) {
            if (!fallback) {
                throw InputError("missing parameter " + key);
            }
            return *fallback;
        }
        try {
            std::size_t used = 0;
            const long v = std::stol(*raw, &used);
            if (used != raw->size()) {
                throw std::invalid_argument(*raw);
            }
            return static_cast<std::int32_t>(v);
        } catch (const std::logic_error&) {
            throw InputError("parameter " + key + " is not an integer: " + *raw);
        }
    }

    double real(const std::string& key, double fallback)
    {
        const auto raw = take(key);
        if (!raw) {
            return fallback;
        }
        try {
            return std::stod(*raw);
        } catch (const std::logic_error&) {
            throw InputError("parameter " + key + " is not a number: " + *raw);
        }
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        const auto raw = take(key);
        return raw ? *raw : fallback;
    }

    std::vector<std::int32_t> integers(const std::string& key)
    {
        const auto raw = take(key);
        if (!raw) {
            throw InputError("missing parameter " + key);
        }
        std::vector<std::int32_t> out;
        std::stringstream ss(*raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
            Params one({"v=" + item});
            out.push_back(one.integer("v"));
        }
        return out;
    }

    /// Fails on keys nobody asked for.
    void finish() const
    {
        if (!values_.empty()) {
            throw InputError("unknown parameter " + values_.begin()->first);
        }
    }

private:
    std::optional<std::string> take(const std::string& key)
    {
        auto it = values_.find(key);
        if (it == values_.end()) {
            return std::nullopt;
        }
        std::string v = it->second;
        values_.erase(it);
        return v;
    }

    std::map<std::string, std::string> values_;
};

inline ComponentShape parse_shape(const std::string& s)
{
    if (s == "clique") {
        return ComponentShape::Clique;
    }
    if (s == "path") {
        return ComponentShape::Path;
    }
    throw InputError("shape must be clique or path");
}

inline ConstructionOutput build_family(const std::string& family, Params& p)
{
    ConstructionOutput out;
    if (family == "clique-path") {
        out = gen_clique_path(p.integer("n"));
    } else if (family == "line-pairs") {
        out = gen_line_pairs(p.integer("n"));
    } else if (family == "pos-one-type") {
        out = gen_pos_one_type(p.integer("lambda"));
    } else if (family == "star-cliques") {
        const auto counts = p.integers("counts");
        out = gen_star_cliques(TypeCounts(counts), parse_shape(p.text("shape", "clique")));
    } else if (family == "balanced-star-tree") {
        const auto k = p.integer("k");
        out = gen_balanced_star_tree(k, parse_shape(p.text("shape", "clique")));
    } else if (family == "two-type-pos") {
        const auto y = p.integer("y");
        out = gen_two_type_pos(y, p.integer("alpha"));
    } else if (family == "line-multitype") {
        out = gen_line_multitype(p.integer("k"));
    } else if (family == "no-potential") {
        out = gen_no_potential_gadget(p.integer("balanced", 0) != 0);
    } else if (family == "random") {
        RandomGameSpec spec;
        spec.nodes = p.integer("nodes", spec.nodes);
        spec.agents = p.integer("n", spec.agents);
        spec.types = p.integer("k", spec.types);
        spec.extra_edge_probability = p.real("p", spec.extra_edge_probability);
        spec.seed = static_cast<std::uint64_t>(p.integer("seed", 0));
        out.family = "random";
        out.game = random_game(spec);
        std::mt19937_64 rng(spec.seed + 1);
        out.named["random-start"] = random_assignment(out.game, rng);
    } else {
        throw InputError("unknown family '" + family + "'");
    }
    p.finish();
    return out;
}

inline SchedulerVariant parse_scheduler(const std::string& s)
{
    if (s == "first") {
        return SchedulerVariant::FirstImprovement;
    }
    if (s == "best") {
        return SchedulerVariant::BestImprovement;
    }
    if (s == "min-utility") {
        return SchedulerVariant::MinUtilityFirst;
    }
    if (s == "random") {
        return SchedulerVariant::SeededRandom;
    }
    throw InputError("scheduler must be first, best, min-utility or random");
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Exits early with the violation list when the input is not a valid game/assignment.
inline bool report_invalid(const ValidationResult& v, std::ostream& out)
{
    if (v.ok()) {
        return false;
    }
    Json j;
    j["valid"] = false;
    Json list = Json::array();
    for (const auto& violation : v.violations) {
        list.push_back({{"code", violation.code}, {"detail", violation.detail}});
    }
    j["violations"] = std::move(list);
    out << dump(j);
    return true;
}

} // namespace detail

struct Options {
    std::string game;
    std::string assignment;
    std::string out;
    std::string scheduler = "best";
    std::optional<std::uint64_t> seed;
    std::size_t max_steps = 0;
    std::uint64_t cap = kDefaultCap;
    std::string movers;
    std::string format = "json";
    bool decide = false;
    bool decimal = false;
    std::int32_t lambda = 0;
    std::string family;
    std::vector<std::string> params;
    std::vector<int> only;
};

inline int cmd_gen(const Options& o, std::ostream& out)
{
    detail::Params params(o.params);
    const auto c = detail::build_family(o.family, params);
    const std::filesystem::path dir = o.out.empty() ? "." : o.out;
    std::filesystem::create_directories(dir);
    detail::write_text(dir / "game.json", detail::dump(io::to_json(c.game)));

    Json manifest;
    manifest["family"] = c.family;
    manifest["game"] = "game.json";
    Json named = Json::object();
    for (const auto& [name, asg] : c.named) {
        detail::write_text(dir / (name + ".json"), detail::dump(io::to_json(asg)));
        named[name] = name + ".json";
    }
    manifest["assignments"] = std::move(named);
    Json movers = Json::object();
    for (const auto& [name, list] : c.movers) {
        detail::write_text(dir / ("movers-" + name + ".json"), detail::dump(io::movers_to_json(list)));
        movers[name] = "movers-" + name + ".json";
    }
    if (!c.movers.empty()) {
        manifest["movers"] = std::move(movers);
    }
    Json expected = Json::object();
    for (const auto& [name, value] : c.expected) {
        expected[name] = value.to_string();
    }
    manifest["expected"] = std::move(expected);
    Json regions = Json::object();
    for (const auto& [name, nodes] : c.regions) {
        regions[name] = nodes;
    }
    manifest["regions"] = std::move(regions);
    detail::write_text(dir / "construction.json", detail::dump(manifest));

    out << c.family << ": " << c.game.node_count() << " nodes, " << c.game.topology.edges().size() << " edges, "
        << c.game.agent_count() << " agents, k=" << c.game.k() << '\n';
    for (const auto& [name, value] : c.expected) {
        out << "  " << name << " = " << value << '\n';
    }
    return exit_code::kOk;
}

inline int cmd_eval(const Options& o, std::ostream& out)
{
    const Game game = io::game_from_json(detail::read_json(o.game));
    const Assignment asg = io::assignment_from_json(detail::read_json(o.assignment), game.node_count());
    if (detail::report_invalid(validate(game, asg), out)) {
        return exit_code::kInvalid;
    }
    Json j;
    j["valid"] = true;
    Json utilities = Json::object();
    for (NodeId v : asg.occupied_nodes()) {
        utilities[std::to_string(v)] = utility(game, asg, v).to_string();
    }
    j["utilities"] = std::move(utilities);
    const Fraction sw = social_welfare(game, asg);
    j["social_welfare"] = sw.to_string();
    if (o.decimal) {
        j["social_welfare_decimal"] = sw.to_decimal();
    }
    const auto check = is_equilibrium(game, asg);
    j["equilibrium"] = check.equilibrium;
    if (check.witness) {
        const auto& w = *check.witness;
        j["witness"] = {{"from", w.from},
                        {"to", w.to},
                        {"u_before", w.utility_before.to_string()},
                        {"u_after", w.utility_after.to_string()}};
    }
    if (game.k() == 1) {
        j["potential"] = potential(game, asg).value;
    }
    detail::emit(o.out, detail::dump(j), out);
    return exit_code::kOk;
}

inline int cmd_dynamics(const Options& o, std::ostream& out)
{
    const Game game = io::game_from_json(detail::read_json(o.game));
    const Assignment start = io::assignment_from_json(detail::read_json(o.assignment), game.node_count());
    if (detail::report_invalid(validate(game, start), out)) {
        return exit_code::kInvalid;
    }
    SchedulerPolicy policy {detail::parse_scheduler(o.scheduler), std::nullopt, o.seed};
    if (!o.movers.empty()) {
        policy.movers = io::movers_from_json(detail::read_json(o.movers));
    }
    const auto trace = o.max_steps == 0 ? run_dynamics(game, start, policy) : run_dynamics(game, start, policy, o.max_steps);
    detail::emit(o.out, detail::dump(io::to_json(trace)), out);
    switch (trace.outcome.status) {
    case OutcomeStatus::Converged: return exit_code::kOk;
    case OutcomeStatus::CycleDetected: return exit_code::kCycle;
    case OutcomeStatus::StepCapped: return exit_code::kLimit;
    }
    return exit_code::kInternal;
}

inline int cmd_enumerate(const Options& o, std::ostream& out)
{
    if (o.cap == 0) {
        throw InputError("cap must be positive");
    }
    const Game game = io::game_from_json(detail::read_json(o.game));
    if (detail::report_invalid(validate(game), out)) {
        return exit_code::kInvalid;
    }
    auto search = exhaustive_search(game, {o.cap, o.format == "json"});
    const MetricsReport metrics = metrics_from_search(search);
    std::string text;
    if (o.format == "csv") {
        const std::string name = std::filesystem::path(o.game).stem().string();
        text = io::csv_header(o.decimal) + "\n" + io::csv_row(name, metrics, o.decimal) + "\n";
    } else if (o.format == "json") {
        std::sort(search.equilibria.begin(), search.equilibria.end(), canonical_less);
        Json j = io::to_json(metrics, o.decimal);
        j["visited"] = search.visited;
        j["argmax"] = io::to_json(metrics.argmax);
        Json list = Json::array();
        for (const auto& eq : search.equilibria) {
            list.push_back(io::to_json(eq));
        }
        j["equilibria"] = std::move(list);
        text = detail::dump(j);
    } else {
        throw InputError("format must be json or csv");
    }
    detail::emit(o.out, text, out);
    return search.exhaustive ? exit_code::kOk : exit_code::kLimit;
}

inline int cmd_reduce_clique(const Options& o, std::ostream& out)
{
    const Topology graph = io::topology_from_json(detail::read_json(o.game));
    const auto red = clique_reduction(graph, o.lambda);
    Json j;
    j["lambda"] = red.instance.lambda;
    j["xi"] = red.instance.xi.to_string();
    if (o.out.empty()) {
        j["game"] = io::to_json(red.game);
    } else {
        detail::write_text(o.out, detail::dump(io::to_json(red.game)));
        j["game"] = o.out;
    }
    if (o.decide) {
        j["welfare_at_least_xi"] = decide_welfare_at_least(red.game, red.instance.xi, o.cap);
    }
    out << detail::dump(j);
    return exit_code::kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out)
{
    verify::Suite suite;
    std::vector<int> ids = o.only;
    if (ids.empty()) {
        for (int id = 1; id <= verify::kCriteria; ++id) {
            ids.push_back(id);
        }
    }
    int failed = 0;
    for (int id : ids) {
        const auto result = suite.run(id);
        verify::print(out, result);
        failed += !result.passed();
    }
    out << (ids.size() - static_cast<std::size_t>(failed)) << '/' << ids.size() << " criteria passed\n";
    return failed == 0 ? exit_code::kOk : exit_code::kInternal;
}

/// Parses `argv` and runs one subcommand. Never throws; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app {"Schelling games with the modified utility: generators, dynamics and exhaustive analysis"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("gen", "write a named construction to a directory");
    gen->add_option("family", o.family, "construction family")->required();
    gen->add_option("params", o.params, "key=value parameters");
    gen->add_option("--out", o.out, "output directory (default: current directory)");

    auto* eval = app.add_subcommand("eval", "utilities, welfare and equilibrium check of one assignment");
    eval->add_option("--game", o.game)->required();
    eval->add_option("--assignment", o.assignment)->required();
    eval->add_option("--out", o.out);
    eval->add_flag("--decimal", o.decimal);

    auto* dyn = app.add_subcommand("dynamics", "run improving-jump dynamics and write the trace");
    dyn->add_option("--game", o.game)->required();
    dyn->add_option("--assignment", o.assignment)->required();
    dyn->add_option("--scheduler", o.scheduler)->check(CLI::IsMember({"first", "best", "min-utility", "random"}));
    dyn->add_option("--seed", o.seed);
    dyn->add_option("--max-steps", o.max_steps);
    dyn->add_option("--movers", o.movers, "JSON file with the nodes whose agents may move");
    dyn->add_option("--out", o.out);

    auto* en = app.add_subcommand("enumerate", "exhaustive equilibria, OPT, PoA and PoS");
    en->add_option("--game", o.game)->required();
    en->add_option("--cap", o.cap, "maximum number of colorings to visit");
    en->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
    en->add_flag("--decimal", o.decimal);
    en->add_option("--out", o.out);

    auto* rc = app.add_subcommand("reduce-clique", "one-type game whose OPT reaches lambda-1 iff the graph has a lambda-clique");
    rc->add_option("--game", o.game, "graph as {\"nodes\", \"edges\"}")->required();
    rc->add_option("--lambda", o.lambda)->required();
    rc->add_option("--out", o.out, "write the game here instead of embedding it");
    rc->add_flag("--decide", o.decide, "also solve the instance by brute force");
    rc->add_option("--cap", o.cap);

    auto* ver = app.add_subcommand("verify", "run the acceptance criteria and print a pass/fail table");
    ver->alias("verify-paper");
    ver->add_option("--only", o.only, "criterion ids to run")->check(CLI::Range(1, verify::kCriteria));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_code::kInvalid;
    }

    try {
        if (*gen) {
            return cmd_gen(o, out);
        }
        if (*eval) {
            return cmd_eval(o, out);
        }
        if (*dyn) {
            return cmd_dynamics(o, out);
        }
        if (*en) {
            return cmd_enumerate(o, out);
        }
        if (*rc) {
            return cmd_reduce_clique(o, out);
        }
        return cmd_verify(o, out);
    } catch (const CapExceededError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kLimit;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kInvalid;
    } catch (const UnsupportedError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kInvalid;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed input: " << e.what() << '\n';
        return exit_code::kInvalid;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_code::kInternal;
    }
}

} // namespace mschelling::cli
