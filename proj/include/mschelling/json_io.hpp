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
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mschelling/analysis.hpp"
#include "mschelling/dynamics.hpp"
#include "mschelling/error.hpp"
#include "mschelling/fraction.hpp"
#include "mschelling/model.hpp"

namespace mschelling::io {

using Json = nlohmann::ordered_json;

namespace detail {

template <typename T>
T field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("field '") + key + "': " + e.what());
    }
}

inline std::int32_t parse_node_key(const std::string& key)
{
    if (key.empty() || key.size() > 9 || key.find_first_not_of("0123456789") != std::string::npos) {
        throw InputError("occupancy key '" + key + "' is not a node id");
    }
    return static_cast<std::int32_t>(std::stol(key));
}

} // namespace detail

inline Json to_json(const Fraction& f) { return f.to_string(); }

inline Fraction fraction_from_json(const Json& j)
{
    if (!j.is_string()) {
        throw InputError("fractions are serialized as \"p/q\" strings");
    }
    return Fraction::parse(j.get<std::string>());
}

// ---------------------------------------------------------------------------
// Game

inline Json to_json(const Game& game)
{
    Json edges = Json::array();
    for (const Edge& e : game.topology.edges()) {
        edges.push_back(Json::array({e.u, e.v}));
    }
    Json j;
    j["nodes"] = game.node_count();
    j["edges"] = std::move(edges);
    j["types"] = game.types.counts();
    return j;
}

inline Topology topology_from_json(const Json& j)
{
    const auto nodes = detail::field<std::int32_t>(j, "nodes");
    std::vector<Edge> edges;
    const auto raw = detail::field<std::vector<std::vector<std::int32_t>>>(j, "edges");
    for (const auto& pair : raw) {
        if (pair.size() != 2) {
            throw InputError("every edge must be a pair of node ids");
        }
        edges.push_back({pair[0], pair[1]});
    }
    return Topology(nodes, std::move(edges));
}

inline Game game_from_json(const Json& j)
{
    Topology topology = topology_from_json(j);
    return Game {std::move(topology), TypeCounts(detail::field<std::vector<std::int32_t>>(j, "types"))};
}

// ---------------------------------------------------------------------------
// Assignment

inline Json to_json(const Assignment& asg)
{
    Json occ = Json::object();
    for (const auto& [v, t] : asg.canonical_pairs()) {
        occ[std::to_string(v)] = t;
    }
    Json j;
    j["occupancy"] = std::move(occ);
    return j;
}

inline Assignment assignment_from_json(const Json& j, std::int32_t node_count)
{
    if (!j.is_object() || !j.contains("occupancy") || !j.at("occupancy").is_object()) {
        throw InputError("assignment needs an 'occupancy' object");
    }
    std::map<NodeId, TypeId> occ;
    for (const auto& [key, value] : j.at("occupancy").items()) {
        if (!value.is_number_integer()) {
            throw InputError("type of node " + key + " is not an integer");
        }
        occ[detail::parse_node_key(key)] = value.get<TypeId>();
    }
    return Assignment::from_occupancy(node_count, occ);
}

// ---------------------------------------------------------------------------
// Dynamics

inline Json to_json(const Jump& jump)
{
    Json j;
    j["from"] = jump.from;
    j["to"] = jump.to;
    j["type"] = jump.type;
    j["u_before"] = jump.utility_before.to_string();
    j["u_after"] = jump.utility_after.to_string();
    return j;
}

inline Json to_json(const Outcome& outcome)
{
    Json j;
    j["status"] = to_string(outcome.status);
    if (outcome.status == OutcomeStatus::CycleDetected) {
        j["period"] = outcome.period;
        j["first_revisit_index"] = outcome.first_revisit_index;
    }
    return j;
}

inline Json to_json(const DynamicsTrace& trace)
{
    Json jumps = Json::array();
    for (const Jump& jump : trace.jumps) {
        jumps.push_back(to_json(jump));
    }
    Json j;
    j["initial"] = to_json(trace.initial);
    j["jumps"] = std::move(jumps);
    j["outcome"] = to_json(trace.outcome);
    return j;
}

inline DynamicsTrace trace_from_json(const Json& j, std::int32_t node_count)
{
    if (!j.is_object() || !j.contains("initial") || !j.contains("jumps") || !j.contains("outcome")) {
        throw InputError("trace needs 'initial', 'jumps' and 'outcome'");
    }
    DynamicsTrace trace;
    trace.initial = assignment_from_json(j.at("initial"), node_count);
    for (const auto& item : j.at("jumps")) {
        trace.jumps.push_back(Jump {detail::field<NodeId>(item, "from"), detail::field<NodeId>(item, "to"),
                                    detail::field<TypeId>(item, "type"),
                                    fraction_from_json(item.at("u_before")), fraction_from_json(item.at("u_after"))});
    }
    const auto status = detail::field<std::string>(j.at("outcome"), "status");
    if (status == "converged") {
        trace.outcome = {OutcomeStatus::Converged, 0, 0};
    } else if (status == "step-capped") {
        trace.outcome = {OutcomeStatus::StepCapped, 0, 0};
    } else if (status == "cycle-detected") {
        trace.outcome = {OutcomeStatus::CycleDetected, detail::field<std::size_t>(j.at("outcome"), "period"),
                         detail::field<std::size_t>(j.at("outcome"), "first_revisit_index")};
    } else {
        throw InputError("unknown outcome status '" + status + "'");
    }
    return trace;
}

inline Json movers_to_json(const std::vector<NodeId>& movers)
{
    Json j;
    j["movers"] = movers;
    return j;
}

inline std::vector<NodeId> movers_from_json(const Json& j)
{
    return detail::field<std::vector<NodeId>>(j, "movers");
}

// ---------------------------------------------------------------------------
// Reports

inline std::string optional_fraction(const std::optional<Fraction>& f)
{
    return f ? f->to_string() : "undefined";
}

inline Json to_json(const MetricsReport& m, bool decimal = false)
{
    Json j;
    j["opt"] = m.opt.to_string();
    j["min_eq_sw"] = optional_fraction(m.min_equilibrium_welfare);
    j["max_eq_sw"] = optional_fraction(m.max_equilibrium_welfare);
    j["poa"] = m.poa.to_string();
    j["pos"] = m.pos.to_string();
    j["eq_count"] = m.equilibrium_count;
    j["exhaustive"] = m.exhaustive;
    if (decimal) {
        j["opt_decimal"] = m.opt.to_decimal();
        if (m.poa.finite()) {
            j["poa_decimal"] = m.poa.value.to_decimal();
        }
        if (m.pos.finite()) {
            j["pos_decimal"] = m.pos.value.to_decimal();
        }
    }
    return j;
}

inline Json to_json(const EquilibriumReport& r)
{
    Json list = Json::array();
    for (const auto& asg : r.equilibria) {
        list.push_back(to_json(asg));
    }
    Json j;
    j["equilibria"] = std::move(list);
    j["eq_count"] = r.equilibrium_count;
    j["min_welfare"] = optional_fraction(r.min_welfare);
    j["max_welfare"] = optional_fraction(r.max_welfare);
    j["exhaustive"] = r.exhaustive;
    j["visited"] = r.visited;
    return j;
}

inline std::string csv_header(bool decimal = false)
{
    std::string h = "instance,opt,min_eq_sw,max_eq_sw,poa,pos,eq_count,exhaustive";
    if (decimal) {
        h += ",poa_decimal,pos_decimal";
    }
    return h;
}

/// One CSV line (no trailing newline). `instance` must not contain commas.
inline std::string csv_row(const std::string& instance, const MetricsReport& m, bool decimal = false)
{
    std::ostringstream os;
    os << instance << ',' << m.opt << ',' << optional_fraction(m.min_equilibrium_welfare) << ','
       << optional_fraction(m.max_equilibrium_welfare) << ',' << m.poa.to_string() << ',' << m.pos.to_string() << ','
       << m.equilibrium_count << ',' << (m.exhaustive ? "true" : "false");
    if (decimal) {
        os << ',' << (m.poa.finite() ? m.poa.value.to_decimal() : "") << ','
           << (m.pos.finite() ? m.pos.value.to_decimal() : "");
    }
    return os.str();
}

} // namespace mschelling::io
