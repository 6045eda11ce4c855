/*
 * Copyright 2026 The trajkanon Authors
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

#include "trajkanon/alignment.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <string>

#include "trajkanon/error.hpp"

namespace trajkanon {

namespace {

// Losses are whole numbers of bits, so the DP runs on integers.
using Cost = std::int32_t;

inline Cost axis_pair_cost(NodeId a, NodeId b) {
    const NodeId top = heap_lca(a, b);
    return node_depth(a) + node_depth(b) - 2 * node_depth(top);
}

inline Cost match_cost(const GenPoint& a, const GenPoint& b) {
    return axis_pair_cost(a.x, b.x) + axis_pair_cost(a.y, b.y);
}

inline Cost suppress_cost(const Grid& grid) { return grid.lon.height() + grid.lat.height(); }

std::vector<TrajId> merge_ids(const std::vector<TrajId>& a, const std::vector<TrajId>& b) {
    std::vector<TrajId> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void require_non_empty(const GenTrajectory& t) {
    if (t.points.empty()) throw DomainError("cannot align an empty trajectory");
}

}  // namespace

void validate(const GenTrajectory& t, const Grid& grid) {
    for (const auto& p : t.points) {
        if (!grid.lon.contains(p.x) || !grid.lat.contains(p.y)) {
            throw DomainError("point (" + std::to_string(p.x.value) + ", " +
                              std::to_string(p.y.value) + ") is not on the grid trees");
        }
    }
}

GenTrajectory lift(const Trajectory& t) {
    GenTrajectory g;
    g.points.reserve(t.points.size());
    for (const auto& p : t.points) g.points.push_back(GenPoint{p.x_leaf, p.y_leaf});
    g.member_ids = {t.id};
    return g;
}

std::vector<GenTrajectory> lift_all(const std::vector<Trajectory>& trajs) {
    std::vector<GenTrajectory> out;
    out.reserve(trajs.size());
    for (const auto& t : trajs) out.push_back(lift(t));
    return out;
}

AlignmentResult dsa(const GenTrajectory& p, const GenTrajectory& q, const Grid& grid) {
    require_non_empty(p);
    require_non_empty(q);
    validate(p, grid);
    validate(q, grid);

    const std::size_t m = p.size();
    const std::size_t n = q.size();
    const std::size_t cols = n + 1;
    const Cost gap = suppress_cost(grid);

    std::vector<Cost> table((m + 1) * cols);
    auto at = [&](std::size_t i, std::size_t j) -> Cost& { return table[i * cols + j]; };

    for (std::size_t i = 1; i <= m; ++i) at(i, 0) = at(i - 1, 0) + gap;
    for (std::size_t j = 1; j <= n; ++j) at(0, j) = at(0, j - 1) + gap;
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            const Cost diag = at(i - 1, j - 1) + match_cost(p.points[i - 1], q.points[j - 1]);
            const Cost up = at(i - 1, j) + gap;
            const Cost left = at(i, j - 1) + gap;
            at(i, j) = std::min({diag, up, left});
        }
    }

    AlignmentResult result;
    result.loss = static_cast<double>(at(m, n));
    auto& merged = result.merged.points;
    merged.reserve(m + n);
    std::size_t i = m;
    std::size_t j = n;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 &&
            at(i, j) == at(i - 1, j - 1) + match_cost(p.points[i - 1], q.points[j - 1])) {
            const auto& a = p.points[i - 1];
            const auto& b = q.points[j - 1];
            merged.push_back(GenPoint{heap_lca(a.x, b.x), heap_lca(a.y, b.y)});
            --i;
            --j;
        } else if (i > 0 && at(i, j) == at(i - 1, j) + gap) {
            merged.push_back(GenPoint{kRoot, kRoot});
            --i;
        } else {
            merged.push_back(GenPoint{kRoot, kRoot});
            --j;
        }
    }
    std::reverse(merged.begin(), merged.end());
    result.merged.member_ids = merge_ids(p.member_ids, q.member_ids);
    return result;
}

double pairwise_distance(const GenTrajectory& p, const GenTrajectory& q, const Grid& grid) {
    require_non_empty(p);
    require_non_empty(q);
    validate(p, grid);
    validate(q, grid);

    // Keep the shorter sequence along the row.
    const GenTrajectory& outer = p.size() >= q.size() ? p : q;
    const GenTrajectory& inner = p.size() >= q.size() ? q : p;
    const std::size_t n = inner.size();
    const Cost gap = suppress_cost(grid);

    std::vector<Cost> prev(n + 1);
    std::vector<Cost> cur(n + 1);
    for (std::size_t j = 1; j <= n; ++j) prev[j] = prev[j - 1] + gap;
    for (std::size_t i = 1; i <= outer.size(); ++i) {
        cur[0] = prev[0] + gap;
        const GenPoint& a = outer.points[i - 1];
        for (std::size_t j = 1; j <= n; ++j) {
            const Cost diag = prev[j - 1] + match_cost(a, inner.points[j - 1]);
            cur[j] = std::min({diag, prev[j] + gap, cur[j - 1] + gap});
        }
        std::swap(prev, cur);
    }
    return static_cast<double>(prev[n]);
}

double pairwise_distance(const Trajectory& p, const Trajectory& q, const Grid& grid) {
    return pairwise_distance(lift(p), lift(q), grid);
}

PsaResult psa(std::span<const GenTrajectory> members, const Grid& grid) {
    if (members.empty()) throw DomainError("psa needs at least one trajectory");

    auto smallest_id = [](const GenTrajectory& t) {
        return t.member_ids.empty() ? std::numeric_limits<TrajId>::max() : t.member_ids.front();
    };
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (members[a].size() != members[b].size()) return members[a].size() > members[b].size();
        return smallest_id(members[a]) < smallest_id(members[b]);
    });

    PsaResult result;
    result.merged = members[order.front()];
    require_non_empty(result.merged);
    validate(result.merged, grid);
    for (std::size_t k = 1; k < order.size(); ++k) {
        AlignmentResult step = dsa(result.merged, members[order[k]], grid);
        result.loss += step.loss;
        result.merged = std::move(step.merged);
    }
    return result;
}

}  // namespace trajkanon
