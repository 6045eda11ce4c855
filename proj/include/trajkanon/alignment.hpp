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

#ifndef TRAJKANON_ALIGNMENT_HPP
#define TRAJKANON_ALIGNMENT_HPP

#include <span>
#include <vector>

#include "trajkanon/grid_tree.hpp"
#include "trajkanon/trajectory.hpp"

namespace trajkanon {

/// A point generalized to arbitrary-depth nodes on both axes.
struct GenPoint {
    NodeId x;
    NodeId y;

    bool operator==(const GenPoint&) const = default;
};

/// A (possibly merged) trajectory over tree nodes, together with the ids of
/// the source trajectories folded into it. member_ids is kept sorted.
struct GenTrajectory {
    std::vector<GenPoint> points;
    std::vector<TrajId> member_ids;

    std::size_t size() const noexcept { return points.size(); }
    bool operator==(const GenTrajectory&) const = default;
};

/// Views a raw trajectory as a generalized one (leaves as nodes).
GenTrajectory lift(const Trajectory& t);
std::vector<GenTrajectory> lift_all(const std::vector<Trajectory>& trajs);

struct AlignmentResult {
    double loss = 0.0;
    GenTrajectory merged;
};

/// Minimum-loss alignment of two trajectories by dynamic programming.
///
/// Matching p[i] with q[j] costs the LCA generalization loss on both axes;
/// leaving a point unmatched costs full suppression on both axes and emits a
/// (root, root) point in the merge. Ties during backtracking prefer a match,
/// then skipping p, then skipping q.
///
/// Throws DomainError on an empty input or a node outside `grid`.
AlignmentResult dsa(const GenTrajectory& p, const GenTrajectory& q, const Grid& grid);

/// Same loss as dsa(p, q, grid).loss using two rolling rows and no merge.
double pairwise_distance(const GenTrajectory& p, const GenTrajectory& q, const Grid& grid);
double pairwise_distance(const Trajectory& p, const Trajectory& q, const Grid& grid);

struct PsaResult {
    GenTrajectory merged;
    double loss = 0.0;
};

/// Progressive alignment: members are folded longest-first (ties by smallest
/// member id) into a running base via dsa; the loss is the sum of the steps.
PsaResult psa(std::span<const GenTrajectory> members, const Grid& grid);

/// Throws DomainError if any node of `t` is outside its tree.
void validate(const GenTrajectory& t, const Grid& grid);

}  // namespace trajkanon

#endif  // TRAJKANON_ALIGNMENT_HPP
