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

#ifndef TRAJKANON_PARTITION_HPP
#define TRAJKANON_PARTITION_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "trajkanon/grid_tree.hpp"
#include "trajkanon/trajectory.hpp"

namespace trajkanon {

/// Density-based pre-segmentation of trajectories.
///
/// Long trajectories are densified with evenly spaced auxiliary points, all
/// points are clustered with k-means, and each trajectory is cut wherever two
/// neighbouring points fall into different point clusters. Distances are
/// planar Euclidean in raw degrees.
struct PartitionConfig {
    double d = 0.0;           // auxiliary point spacing (degrees)
    int m = 27;               // number of point clusters
    int kmeans_max_iter = 100;
    std::uint64_t seed = 0;
    int threads = 0;          // 0 = runtime default

    void validate() const;
};

/// Spacing used when none is given: the region diagonal over 256.
double default_spacing(const BoundingBox& box);

/// Cluster label of every point, laid out like the dataset it was computed
/// for: labels[t][i] is the label of point i of trajectory t.
using PointLabeling = std::vector<std::vector<int>>;

/// Inserts auxiliary points every `d` along each segment, at arc lengths
/// strictly below the segment length.
Trajectory densify(const Trajectory& t, double d, const Grid& grid);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Lloyd iteration with k-means++ seeding on planar points. Stops at an
/// assignment fixpoint or after cfg.kmeans_max_iter rounds.
/// Throws ConfigError when there are fewer points than cfg.m.
std::vector<int> kmeans(const std::vector<Point2>& points, const PartitionConfig& cfg);

/// k-means over every point of a densified dataset.
PointLabeling kmeans_points(const std::vector<Trajectory>& densified, const PartitionConfig& cfg);

/// Cuts each trajectory between neighbouring points with different labels.
/// Auxiliary points survive only as segment endpoints. Output ids run from
/// `first_id` and inherit the source user.
std::vector<Trajectory> segment(const std::vector<Trajectory>& densified,
                                const PointLabeling& labels, TrajId first_id = 0);

struct PartitionResult {
    std::vector<Trajectory> densified;
    PointLabeling labels;
    std::vector<Trajectory> segments;
};

/// densify + kmeans_points + segment.
PartitionResult partition(const std::vector<Trajectory>& trajs, const PartitionConfig& cfg,
                          const Grid& grid);

/// Debug dump: "traj_id,seq,lon,lat,is_real,label".
void write_labels_csv(std::ostream& out, const std::vector<Trajectory>& densified,
                      const PointLabeling& labels);

}  // namespace trajkanon

#endif  // TRAJKANON_PARTITION_HPP
