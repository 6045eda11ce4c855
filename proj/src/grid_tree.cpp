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

#include "trajkanon/grid_tree.hpp"

#include <cmath>
#include <string>

#include "trajkanon/error.hpp"

namespace trajkanon {

GridTree::GridTree(double axis_min, double axis_max, int height)
    : axis_min_(axis_min), axis_max_(axis_max), height_(height), leaf_width_(0.0) {
    if (!std::isfinite(axis_min) || !std::isfinite(axis_max) || !(axis_max > axis_min)) {
        throw ConfigError("degenerate axis range [" + std::to_string(axis_min) + ", " +
                          std::to_string(axis_max) + "]");
    }
    if (height < 1 || height > kMaxHeight) {
        throw ConfigError("tree height " + std::to_string(height) + " outside [1, " +
                          std::to_string(kMaxHeight) + "]");
    }
    leaf_width_ = (axis_max_ - axis_min_) / static_cast<double>(leaf_count());
}

void GridTree::require(NodeId n) const {
    if (!contains(n)) {
        throw DomainError("node id " + std::to_string(n.value) + " not in tree of height " +
                          std::to_string(height_));
    }
}

int GridTree::depth(NodeId n) const {
    require(n);
    return node_depth(n);
}

NodeId GridTree::leaf_of(double value) const {
    if (!contains_value(value)) {
        throw OutOfBoundsError("coordinate " + std::to_string(value) + " outside [" +
                               std::to_string(axis_min_) + ", " + std::to_string(axis_max_) +
                               "]");
    }
    auto offset = static_cast<std::uint32_t>(std::floor((value - axis_min_) / leaf_width_));
    if (offset >= leaf_count()) offset = leaf_count() - 1;
    return NodeId{leaf_count() + offset};
}

std::uint64_t GridTree::lf(NodeId n) const {
    return std::uint64_t{1} << (height_ - depth(n));
}

NodeId GridTree::lca(NodeId a, NodeId b) const {
    require(a);
    require(b);
    return heap_lca(a, b);
}

double GridTree::loss_single(NodeId ancestor, NodeId node) const {
    require(ancestor);
    require(node);
    if (!is_ancestor_or_self(ancestor, node)) {
        throw DomainError("node " + std::to_string(ancestor.value) + " is not an ancestor of " +
                          std::to_string(node.value));
    }
    // log2 of a power-of-two leaf count is just the level difference.
    return static_cast<double>(node_depth(node) - node_depth(ancestor));
}

PairLoss GridTree::loss_pair(NodeId a, NodeId b) const {
    const NodeId top = lca(a, b);
    return {loss_single(top, a) + loss_single(top, b), top};
}

Interval GridTree::bounds(NodeId n) const {
    const int d = depth(n);
    const std::uint32_t index = n.value - (1u << d);
    const double width = (axis_max_ - axis_min_) / static_cast<double>(1u << d);
    const double lo = axis_min_ + width * index;
    const double hi = (index + 1 == (1u << d)) ? axis_max_ : axis_min_ + width * (index + 1);
    return {lo, hi};
}

void BoundingBox::validate() const {
    if (!(lon_max > lon_min) || !(lat_max > lat_min)) {
        throw ConfigError("bounding box must have lon_min < lon_max and lat_min < lat_max");
    }
}

double BoundingBox::diagonal() const noexcept {
    return std::hypot(lon_max - lon_min, lat_max - lat_min);
}

Grid make_grid(const BoundingBox& box, int height) {
    box.validate();
    return Grid{GridTree(box.lon_min, box.lon_max, height),
                GridTree(box.lat_min, box.lat_max, height)};
}

}  // namespace trajkanon
