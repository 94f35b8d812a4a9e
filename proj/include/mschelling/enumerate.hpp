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
#include <limits>
#include <optional>
#include <vector>

#include "mschelling/fraction.hpp"
#include "mschelling/model.hpp"
#include "mschelling/utility.hpp"

namespace mschelling {

inline constexpr std::uint64_t kDefaultCap = 5'000'000;

/// C(nodes, n) * n! / (n_1! ... n_k!): the number of node colorings of a game.
inline BigInt coloring_count(const Game& game)
{
    BigInt total = 1;
    std::int32_t free_nodes = game.node_count();
    for (auto c : game.types.counts()) {
        // choose c of the still-free nodes for this type
        BigInt ways = 1;
        for (std::int32_t i = 0; i < c; ++i) {
            ways = ways * (free_nodes - i) / (i + 1);
        }
        total *= ways;
        free_nodes -= c;
    }
    return total;
}

struct SearchOptions {
    std::uint64_t cap = kDefaultCap;
    bool collect_equilibria = true;
};

struct SearchSummary {
    std::uint64_t visited = 0;
    bool exhaustive = false;
    std::uint64_t equilibrium_count = 0;
    std::vector<Assignment> equilibria;
    std::optional<Fraction> min_equilibrium_welfare;
    std::optional<Fraction> max_equilibrium_welfare;
    std::optional<Fraction> opt;
    std::optional<Assignment> argmax;
};

namespace detail {

/// Depth-first walk over every coloring in lexicographic node order (empty before
/// type 0 before type 1 ...). Neighbor counts are maintained incrementally, welfare
/// is accumulated as an integer multiple of 1/L with L = lcm of all reachable
/// denominators, so every comparison stays exact.
class ColoringWalker {
public:
    ColoringWalker(const Game& game, const SearchOptions& options)
        : game_(game), options_(options), n_(game.node_count()), k_(game.k())
    {
        const auto nn = static_cast<std::size_t>(n_);
        adjacency_.assign(nn * nn, 0);
        neighbors_.resize(nn);
        for (NodeId v = 0; v < n_; ++v) {
            for (NodeId w : game.topology.neighbors(v)) {
                neighbors_[static_cast<std::size_t>(v)].push_back(w);
                adjacency_[static_cast<std::size_t>(v) * nn + static_cast<std::size_t>(w)] = 1;
            }
        }
        cells_.assign(nn, kEmpty);
        counts_.assign(nn * static_cast<std::size_t>(k_), 0);
        totals_.assign(nn, 0);
        remaining_ = game.types.counts();
        empties_left_ = n_ - game.agent_count();
        occupied_.reserve(nn);
        empty_.reserve(nn);
        best_target_.resize(static_cast<std::size_t>(k_));
        setup_scale();
    }

    SearchSummary run()
    {
        if (empties_left_ < 0) {
            summary_.exhaustive = true;
            return summary_;
        }
        walk(0);
        summary_.exhaustive = !aborted_;
        if (fast_) {
            if (have_opt_) {
                summary_.opt = Fraction(best_scaled_, scale_);
            }
            if (summary_.equilibrium_count > 0) {
                summary_.min_equilibrium_welfare = Fraction(min_eq_scaled_, scale_);
                summary_.max_equilibrium_welfare = Fraction(max_eq_scaled_, scale_);
            }
        }
        return summary_;
    }

private:
    void setup_scale()
    {
        const std::int32_t reach = std::min(game_.topology.max_degree(), game_.agent_count() - 1) + 1;
        BigInt lcm = 1;
        for (std::int32_t d = 2; d <= reach; ++d) {
            lcm = lcm / boost::multiprecision::gcd(lcm, BigInt(d)) * d;
        }
        const BigInt bound = lcm * game_.agent_count();
        fast_ = bound < BigInt(std::numeric_limits<std::int64_t>::max() / 4);
        if (!fast_) {
            return;
        }
        scale_ = lcm.convert_to<std::int64_t>();
        unit_.assign(static_cast<std::size_t>(reach) + 1, 0);
        for (std::int32_t d = 1; d <= reach; ++d) {
            unit_[static_cast<std::size_t>(d)] = scale_ / d;
        }
    }

    std::int32_t& count(NodeId v, TypeId t)
    {
        return counts_[static_cast<std::size_t>(v) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(t)];
    }

    void place(NodeId v, TypeId t)
    {
        cells_[static_cast<std::size_t>(v)] = t;
        --remaining_[static_cast<std::size_t>(t)];
        for (NodeId w : neighbors_[static_cast<std::size_t>(v)]) {
            ++count(w, t);
            ++totals_[static_cast<std::size_t>(w)];
        }
    }

    void unplace(NodeId v, TypeId t)
    {
        cells_[static_cast<std::size_t>(v)] = kEmpty;
        ++remaining_[static_cast<std::size_t>(t)];
        for (NodeId w : neighbors_[static_cast<std::size_t>(v)]) {
            --count(w, t);
            --totals_[static_cast<std::size_t>(w)];
        }
    }

    void walk(NodeId v)
    {
        if (aborted_) {
            return;
        }
        if (v == n_) {
            leaf();
            return;
        }
        if (empties_left_ > 0) {
            --empties_left_;
            walk(v + 1);
            ++empties_left_;
        }
        for (TypeId t = 0; t < k_; ++t) {
            if (remaining_[static_cast<std::size_t>(t)] > 0) {
                place(v, t);
                walk(v + 1);
                unplace(v, t);
            }
        }
    }

    bool equilibrium()
    {
        // Best value per type over empty nodes, ignoring the mover's own adjacency.
        // Leaving a node adjacent to the target can only lower the value, so an agent
        // already at or above this bound has no improving jump.
        for (TypeId t = 0; t < k_; ++t) {
            best_target_[static_cast<std::size_t>(t)] = {0, 1};
        }
        for (NodeId e : empty_) {
            const auto den = static_cast<std::int64_t>(totals_[static_cast<std::size_t>(e)]) + 1;
            for (TypeId t = 0; t < k_; ++t) {
                auto& best = best_target_[static_cast<std::size_t>(t)];
                const std::int64_t num = count(e, t);
                if (num * best.second > best.first * den) {
                    best = {num, den};
                }
            }
        }
        const auto nn = static_cast<std::size_t>(n_);
        for (NodeId f : occupied_) {
            const TypeId t = cells_[static_cast<std::size_t>(f)];
            const std::int64_t a = count(f, t);
            const std::int64_t b = static_cast<std::int64_t>(totals_[static_cast<std::size_t>(f)]) + 1;
            const auto& best = best_target_[static_cast<std::size_t>(t)];
            if (best.first * b <= a * best.second) {
                continue;
            }
            for (NodeId e : empty_) {
                const std::int64_t adj = adjacency_[static_cast<std::size_t>(f) * nn + static_cast<std::size_t>(e)];
                const std::int64_t num = count(e, t) - adj;
                const std::int64_t den = totals_[static_cast<std::size_t>(e)] - adj + 1;
                if (num * b > a * den) {
                    return false;
                }
            }
        }
        return true;
    }

    Fraction exact_welfare()
    {
        Fraction sw;
        for (NodeId f : occupied_) {
            const TypeId t = cells_[static_cast<std::size_t>(f)];
            sw += Fraction(count(f, t), totals_[static_cast<std::size_t>(f)] + 1);
        }
        return sw;
    }

    void leaf()
    {
        if (summary_.visited == options_.cap) {
            aborted_ = true;
            return;
        }
        ++summary_.visited;
        occupied_.clear();
        empty_.clear();
        std::int64_t scaled = 0;
        for (NodeId v = 0; v < n_; ++v) {
            const TypeId t = cells_[static_cast<std::size_t>(v)];
            if (t == kEmpty) {
                empty_.push_back(v);
            } else {
                occupied_.push_back(v);
                if (fast_) {
                    scaled += count(v, t) * unit_[static_cast<std::size_t>(totals_[static_cast<std::size_t>(v)]) + 1];
                }
            }
        }
        const bool is_eq = equilibrium();
        if (fast_) {
            if (!have_opt_ || scaled > best_scaled_) {
                have_opt_ = true;
                best_scaled_ = scaled;
                summary_.argmax = Assignment(cells_);
            }
            if (is_eq) {
                if (summary_.equilibrium_count == 0 || scaled < min_eq_scaled_) {
                    min_eq_scaled_ = scaled;
                }
                if (summary_.equilibrium_count == 0 || scaled > max_eq_scaled_) {
                    max_eq_scaled_ = scaled;
                }
            }
        } else {
            Fraction sw = exact_welfare();
            if (!summary_.opt || sw > *summary_.opt) {
                summary_.opt = sw;
                summary_.argmax = Assignment(cells_);
            }
            if (is_eq) {
                if (!summary_.min_equilibrium_welfare || sw < *summary_.min_equilibrium_welfare) {
                    summary_.min_equilibrium_welfare = sw;
                }
                if (!summary_.max_equilibrium_welfare || sw > *summary_.max_equilibrium_welfare) {
                    summary_.max_equilibrium_welfare = sw;
                }
            }
        }
        if (is_eq) {
            ++summary_.equilibrium_count;
            if (options_.collect_equilibria) {
                summary_.equilibria.emplace_back(cells_);
            }
        }
    }

    const Game& game_;
    SearchOptions options_;
    std::int32_t n_;
    std::int32_t k_;
    std::vector<std::uint8_t> adjacency_;
    std::vector<std::vector<NodeId>> neighbors_;
    std::vector<TypeId> cells_;
    std::vector<std::int32_t> counts_;
    std::vector<std::int32_t> totals_;
    std::vector<std::int32_t> remaining_;
    std::int32_t empties_left_ = 0;
    std::vector<NodeId> occupied_;
    std::vector<NodeId> empty_;
    std::vector<std::pair<std::int64_t, std::int64_t>> best_target_;

    bool fast_ = false;
    std::int64_t scale_ = 1;
    std::vector<std::int64_t> unit_;
    bool have_opt_ = false;
    std::int64_t best_scaled_ = 0;
    std::int64_t min_eq_scaled_ = 0;
    std::int64_t max_eq_scaled_ = 0;
    bool aborted_ = false;
    SearchSummary summary_;
};

} // namespace detail

/// Visits up to `options.cap` colorings; `exhaustive` reports whether all were seen.
/// Optimum and equilibrium welfare extremes refer to the visited colorings only.
inline SearchSummary exhaustive_search(const Game& game, const SearchOptions& options = {})
{
    return detail::ColoringWalker(game, options).run();
}

} // namespace mschelling
