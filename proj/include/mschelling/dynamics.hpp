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
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "mschelling/error.hpp"
#include "mschelling/fraction.hpp"
#include "mschelling/model.hpp"
#include "mschelling/utility.hpp"

namespace mschelling {

enum class SchedulerVariant { FirstImprovement, BestImprovement, MinUtilityFirst, SeededRandom };

/// Which improving jump to take next. `movers`, when set, lists the nodes whose
/// occupants may move at the start of a run; the list follows those agents.
struct SchedulerPolicy {
    SchedulerVariant variant = SchedulerVariant::BestImprovement;
    std::optional<std::vector<NodeId>> movers;
    std::optional<std::uint64_t> seed;

    static SchedulerPolicy first_improvement() { return {SchedulerVariant::FirstImprovement, std::nullopt, std::nullopt}; }
    static SchedulerPolicy best_improvement() { return {SchedulerVariant::BestImprovement, std::nullopt, std::nullopt}; }
    static SchedulerPolicy min_utility_first() { return {SchedulerVariant::MinUtilityFirst, std::nullopt, std::nullopt}; }
    static SchedulerPolicy seeded_random(std::uint64_t seed) { return {SchedulerVariant::SeededRandom, std::nullopt, seed}; }

    SchedulerPolicy with_movers(std::vector<NodeId> nodes) const
    {
        SchedulerPolicy out = *this;
        out.movers = std::move(nodes);
        return out;
    }
};

struct ImprovingJump {
    NodeId to;
    Fraction utility;

    friend bool operator==(const ImprovingJump&, const ImprovingJump&) = default;
};

struct Jump {
    NodeId from;
    NodeId to;
    TypeId type;
    Fraction utility_before;
    Fraction utility_after;

    friend bool operator==(const Jump&, const Jump&) = default;
};

enum class OutcomeStatus { Converged, CycleDetected, StepCapped };

/// For cycles, `first_revisit_index` is the index (0 = initial) of the state that
/// repeats an earlier one, and `period` is how many jumps back that earlier state lies.
struct Outcome {
    OutcomeStatus status = OutcomeStatus::Converged;
    std::size_t period = 0;
    std::size_t first_revisit_index = 0;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct DynamicsTrace {
    Assignment initial;
    std::vector<Jump> jumps;
    Outcome outcome;

    /// Initial assignment followed by the assignment after every jump.
    std::vector<Assignment> states() const
    {
        std::vector<Assignment> out {initial};
        for (const Jump& j : jumps) {
            out.push_back(out.back().moved(j.from, j.to));
        }
        return out;
    }

    Assignment final_assignment() const { return states().back(); }

    friend bool operator==(const DynamicsTrace&, const DynamicsTrace&) = default;
};

inline std::string to_string(SchedulerVariant v)
{
    switch (v) {
    case SchedulerVariant::FirstImprovement: return "first";
    case SchedulerVariant::BestImprovement: return "best";
    case SchedulerVariant::MinUtilityFirst: return "min-utility";
    case SchedulerVariant::SeededRandom: return "random";
    }
    return "?";
}

inline std::string to_string(OutcomeStatus s)
{
    switch (s) {
    case OutcomeStatus::Converged: return "converged";
    case OutcomeStatus::CycleDetected: return "cycle-detected";
    case OutcomeStatus::StepCapped: return "step-capped";
    }
    return "?";
}

/// Empty targets that strictly raise the utility of the agent at `from`, by ascending node id.
inline std::vector<ImprovingJump> improving_jumps(const Game& game, const Assignment& asg, NodeId from)
{
    const Fraction current = utility(game, asg, from);
    std::vector<ImprovingJump> out;
    for (NodeId to = 0; to < asg.node_count(); ++to) {
        if (asg.occupied(to)) {
            continue;
        }
        Fraction after = jump_utility(game, asg, from, to);
        if (after > current) {
            out.push_back({to, std::move(after)});
        }
    }
    return out;
}

/// Stateful jump selector; owns the random stream and tracks whitelisted movers.
class Scheduler {
public:
    Scheduler(const Game& game, const Assignment& start, SchedulerPolicy policy)
        : game_(&game), policy_(std::move(policy))
    {
        if (policy_.variant == SchedulerVariant::SeededRandom) {
            if (!policy_.seed) {
                throw InputError("seeded-random scheduling requires a seed");
            }
            rng_.seed(*policy_.seed);
        }
        if (policy_.movers) {
            movers_ = *policy_.movers;
            std::sort(movers_.begin(), movers_.end());
            if (std::adjacent_find(movers_.begin(), movers_.end()) != movers_.end()) {
                throw InputError("mover whitelist lists a node twice");
            }
            for (NodeId v : movers_) {
                if (!start.occupied(v)) {
                    throw InputError("whitelisted node " + std::to_string(v) + " is not occupied");
                }
            }
        }
    }

    bool restricted() const { return policy_.movers.has_value(); }
    const std::vector<NodeId>& movers() const { return movers_; }

    std::optional<Jump> next(const Assignment& asg)
    {
        const std::vector<NodeId> candidates = restricted() ? movers_ : asg.occupied_nodes();
        switch (policy_.variant) {
        case SchedulerVariant::FirstImprovement: return pick_first(asg, candidates);
        case SchedulerVariant::BestImprovement: return pick_best(asg, candidates);
        case SchedulerVariant::MinUtilityFirst: return pick_min_utility(asg, candidates);
        case SchedulerVariant::SeededRandom: return pick_random(asg, candidates);
        }
        return std::nullopt;
    }

    /// Moves the whitelist entry along with the agent that jumped.
    void record(const Jump& jump)
    {
        if (!restricted()) {
            return;
        }
        auto it = std::find(movers_.begin(), movers_.end(), jump.from);
        if (it != movers_.end()) {
            *it = jump.to;
            std::sort(movers_.begin(), movers_.end());
        }
    }

private:
    Jump make_jump(const Assignment& asg, NodeId from, const ImprovingJump& j) const
    {
        return Jump {from, j.to, asg.type_at(from), utility(*game_, asg, from), j.utility};
    }

    std::optional<Jump> pick_first(const Assignment& asg, const std::vector<NodeId>& candidates) const
    {
        for (NodeId from : candidates) {
            auto jumps = improving_jumps(*game_, asg, from);
            if (!jumps.empty()) {
                return make_jump(asg, from, jumps.front());
            }
        }
        return std::nullopt;
    }

    static const ImprovingJump& best_of(const std::vector<ImprovingJump>& jumps)
    {
        const ImprovingJump* best = &jumps.front();
        for (const auto& j : jumps) {
            if (j.utility > best->utility) {
                best = &j;
            }
        }
        return *best;
    }

    std::optional<Jump> pick_best(const Assignment& asg, const std::vector<NodeId>& candidates) const
    {
        std::optional<Jump> best;
        for (NodeId from : candidates) {
            auto jumps = improving_jumps(*game_, asg, from);
            if (jumps.empty()) {
                continue;
            }
            const auto& j = best_of(jumps);
            if (!best || j.utility > best->utility_after) {
                best = make_jump(asg, from, j);
            }
        }
        return best;
    }

    std::optional<Jump> pick_min_utility(const Assignment& asg, const std::vector<NodeId>& candidates) const
    {
        std::optional<Jump> chosen;
        for (NodeId from : candidates) {
            auto jumps = improving_jumps(*game_, asg, from);
            if (jumps.empty()) {
                continue;
            }
            Fraction current = utility(*game_, asg, from);
            if (!chosen || current < chosen->utility_before) {
                chosen = make_jump(asg, from, best_of(jumps));
            }
        }
        return chosen;
    }

    std::optional<Jump> pick_random(const Assignment& asg, const std::vector<NodeId>& candidates)
    {
        std::vector<std::pair<NodeId, ImprovingJump>> all;
        for (NodeId from : candidates) {
            for (auto& j : improving_jumps(*game_, asg, from)) {
                all.emplace_back(from, std::move(j));
            }
        }
        if (all.empty()) {
            return std::nullopt;
        }
        std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
        const auto& [from, j] = all[pick(rng_)];
        return make_jump(asg, from, j);
    }

    const Game* game_;
    SchedulerPolicy policy_;
    std::vector<NodeId> movers_;
    std::mt19937_64 rng_;
};

/// One jump chosen by `policy` from a fresh scheduler, or nothing at a (restricted) equilibrium.
inline std::optional<Jump> step(const Game& game, const Assignment& asg, const SchedulerPolicy& policy)
{
    Scheduler scheduler(game, asg, policy);
    return scheduler.next(asg);
}

inline std::size_t default_max_steps(const Game& game)
{
    return 10 * static_cast<std::size_t>(game.agent_count()) * static_cast<std::size_t>(game.node_count());
}

namespace detail {

struct StateKeyHash {
    std::size_t operator()(const std::vector<NodeId>& key) const noexcept
    {
        std::size_t h = 1469598103934665603ULL;
        for (NodeId x : key) {
            h ^= static_cast<std::size_t>(x + 2);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

// Occupancy cells, then the sorted mover positions when the run is restricted.
inline std::vector<NodeId> state_key(const Assignment& asg, const Scheduler& scheduler)
{
    std::vector<NodeId> key(asg.cells().begin(), asg.cells().end());
    if (scheduler.restricted()) {
        key.push_back(-2);
        key.insert(key.end(), scheduler.movers().begin(), scheduler.movers().end());
    }
    return key;
}

} // namespace detail

inline DynamicsTrace run_dynamics(const Game& game, const Assignment& start, const SchedulerPolicy& policy,
                                  std::size_t max_steps)
{
    if (max_steps == 0) {
        throw InputError("max_steps must be positive");
    }
    const auto check = validate(game, start);
    if (!check.ok()) {
        throw InputError("invalid start assignment: " + check.violations.front().code);
    }
    Scheduler scheduler(game, start, policy);
    DynamicsTrace trace {start, {}, {}};
    Assignment current = start;
    std::unordered_map<std::vector<NodeId>, std::size_t, detail::StateKeyHash> seen;
    seen.emplace(detail::state_key(current, scheduler), 0);

    while (true) {
        auto jump = scheduler.next(current);
        if (!jump) {
            trace.outcome = {OutcomeStatus::Converged, 0, 0};
            return trace;
        }
        if (trace.jumps.size() == max_steps) {
            trace.outcome = {OutcomeStatus::StepCapped, 0, 0};
            return trace;
        }
        current = current.moved(jump->from, jump->to);
        scheduler.record(*jump);
        trace.jumps.push_back(std::move(*jump));
        const std::size_t index = trace.jumps.size();
        auto [it, inserted] = seen.emplace(detail::state_key(current, scheduler), index);
        if (!inserted) {
            trace.outcome = {OutcomeStatus::CycleDetected, index - it->second, index};
            return trace;
        }
    }
}

inline DynamicsTrace run_dynamics(const Game& game, const Assignment& start, const SchedulerPolicy& policy)
{
    return run_dynamics(game, start, policy, default_max_steps(game));
}

// ---------------------------------------------------------------------------
// One-type ordinal potential

struct PotentialValue {
    std::uint64_t value = 0;

    friend auto operator<=>(const PotentialValue&, const PotentialValue&) = default;
};

/// Sum of occupied-neighbor counts over occupied nodes, i.e. twice the occupied edges.
inline PotentialValue potential(const Game& game, const Assignment& asg)
{
    if (game.k() != 1) {
        throw UnsupportedError("the potential only exists for one-type games");
    }
    detail::require_matching(game, asg);
    std::uint64_t sum = 0;
    for (const Edge& e : game.topology.edges()) {
        if (asg.occupied(e.u) && asg.occupied(e.v)) {
            sum += 2;
        }
    }
    return {sum};
}

struct PotentialCounterexample {
    std::size_t index;
    Jump jump;
    PotentialValue before;
    PotentialValue after;
};

namespace detail {

inline int sign_of(std::int64_t x) { return (x > 0) - (x < 0); }

} // namespace detail

/// True iff moving the agent at `from` to `to` changes the potential with the
/// same sign as it changes that agent's utility. The move need not be improving.
inline bool potential_agrees(const Game& game, const Assignment& asg, NodeId from, NodeId to)
{
    const auto before = potential(game, asg);
    const auto after = potential(game, asg.moved(from, to));
    const Fraction du = jump_utility(game, asg, from, to) - utility(game, asg, from);
    const auto dphi = static_cast<std::int64_t>(after.value) - static_cast<std::int64_t>(before.value);
    return detail::sign_of(dphi) == du.sign();
}

/// Replays `trace` and returns the first jump whose potential change disagrees in sign
/// with the mover's utility change. Utilities are recomputed, not read from the trace.
inline std::optional<PotentialCounterexample> check_ordinal_potential(const Game& game, const DynamicsTrace& trace)
{
    if (game.k() != 1) {
        throw UnsupportedError("the potential only exists for one-type games");
    }
    Assignment current = trace.initial;
    for (std::size_t i = 0; i < trace.jumps.size(); ++i) {
        const Jump& j = trace.jumps[i];
        const Assignment next = current.moved(j.from, j.to);
        if (!potential_agrees(game, current, j.from, j.to)) {
            return PotentialCounterexample {i, j, potential(game, current), potential(game, next)};
        }
        current = next;
    }
    return std::nullopt;
}

} // namespace mschelling
