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

#ifndef TRAJKANON_TRAJECTORY_HPP
#define TRAJKANON_TRAJECTORY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "trajkanon/grid_tree.hpp"

namespace trajkanon {

using TrajId = std::int64_t;

/// A raw GPS fix. The timestamp orders points and is never published.
struct RawPoint {
    double lat = 0.0;
    double lon = 0.0;
    std::int64_t timestamp = 0;

    bool operator==(const RawPoint&) const = default;
};

/// A grid-quantized point. Auxiliary points are synthesized during
/// partitioning and carry is_real = false.
struct TrajPoint {
    NodeId x_leaf;
    NodeId y_leaf;
    double lon = 0.0;
    double lat = 0.0;
    bool is_real = true;

    bool operator==(const TrajPoint&) const = default;
};

struct Trajectory {
    TrajId id = 0;
    std::string user_id;
    std::vector<TrajPoint> points;

    std::size_t size() const noexcept { return points.size(); }
    bool operator==(const Trajectory&) const = default;
};

/// Quantizes (lon, lat) onto the grid leaves.
TrajPoint make_point(const Grid& grid, double lon, double lat, bool is_real = true);

}  // namespace trajkanon

#endif  // TRAJKANON_TRAJECTORY_HPP
