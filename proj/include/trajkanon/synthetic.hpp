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

#ifndef TRAJKANON_SYNTHETIC_HPP
#define TRAJKANON_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "trajkanon/grid_tree.hpp"
#include "trajkanon/trajectory_io.hpp"

namespace trajkanon {

/// Knobs for a GPS-like corpus of trips over a jittered street grid.
struct RoadNetworkOptions {
    BoundingBox box = kDefaultRegion;
    std::size_t trips = 270;
    int avenues = 7;              // north-south roads
    int streets = 6;              // east-west roads
    double min_path = 0.003;      // travelled distance per trip (degrees)
    double max_path = 0.03;
    double min_step = 0.00015;    // spacing between fixes (degrees)
    double max_step = 0.0005;
    double noise = 4e-6;          // GPS jitter (degrees, std dev)
    double turn_probability = 0.35;
    std::uint64_t seed = 0;
};

/// One stream per trip, time-stamped at one fix per 5 s. Roads keep a small
/// margin from the box edges so every fix lands inside it.
std::vector<PointStream> road_network_streams(const RoadNetworkOptions& opts);

}  // namespace trajkanon

#endif  // TRAJKANON_SYNTHETIC_HPP
