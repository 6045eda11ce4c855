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

#ifndef TRAJKANON_GRID_TREE_HPP
#define TRAJKANON_GRID_TREE_HPP

#include <bit>
#include <compare>
#include <cstdint>

namespace trajkanon {

/// Heap-numbered node of a generalization tree: root is 1, children of n
/// are 2n and 2n + 1.
struct NodeId {
    std::uint32_t value = 0;

    constexpr auto operator<=>(const NodeId&) const = default;
};

inline constexpr NodeId kRoot{1};

/// Depth of a node under heap numbering (root has depth 0).
constexpr int node_depth(NodeId n) noexcept {
    return static_cast<int>(std::bit_width(n.value)) - 1;
}

/// True when `ancestor` lies on the root path of `node` (or equals it).
/// Pure heap arithmetic; no tree is needed.
constexpr bool is_ancestor_or_self(NodeId ancestor, NodeId node) noexcept {
    if (ancestor.value == 0 || node.value == 0) return false;
    const int diff = node_depth(node) - node_depth(ancestor);
    return diff >= 0 && (node.value >> diff) == ancestor.value;
}

/// Lowest common ancestor under heap numbering.
constexpr NodeId heap_lca(NodeId a, NodeId b) noexcept {
    std::uint32_t x = a.value;
    std::uint32_t y = b.value;
    const int da = node_depth(a);
    const int db = node_depth(b);
    if (da > db) x >>= (da - db);
    else y >>= (db - da);
    // Strip the differing low bits in one shot.
    return NodeId{x >> std::bit_width(x ^ y)};
}

struct PairLoss {
    double loss = 0.0;
    NodeId lca;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Full binary generalization hierarchy over one coordinate axis.
///
/// The range [axis_min, axis_max] is cut into 2^height equal leaves. Height is
/// counted in edges, so generalizing a leaf to the root costs exactly `height`
/// bits and a node at depth d owns 2^(height - d) leaves.
class GridTree {
public:
    static constexpr int kMaxHeight = 24;

    /// Throws ConfigError on a degenerate range or height outside [1, 24].
    GridTree(double axis_min, double axis_max, int height);

    double axis_min() const noexcept { return axis_min_; }
    double axis_max() const noexcept { return axis_max_; }
    int height() const noexcept { return height_; }
    std::uint32_t leaf_count() const noexcept { return 1u << height_; }
    double leaf_width() const noexcept { return leaf_width_; }

    NodeId root() const noexcept { return kRoot; }
    std::uint32_t node_count() const noexcept { return (2u << height_) - 1; }
    NodeId first_leaf() const noexcept { return NodeId{leaf_count()}; }
    NodeId last_leaf() const noexcept { return NodeId{node_count()}; }

    bool contains(NodeId n) const noexcept { return n.value >= 1 && n.value <= node_count(); }
    bool is_leaf(NodeId n) const noexcept { return contains(n) && n.value >= leaf_count(); }
    bool contains_value(double v) const noexcept { return v >= axis_min_ && v <= axis_max_; }

    /// Depth of a valid node; throws DomainError otherwise.
    int depth(NodeId n) const;

    /// Leaf whose half-open interval holds `value`; axis_max maps to the last
    /// leaf. Throws OutOfBoundsError outside the range.
    NodeId leaf_of(double value) const;

    /// Number of leaves owned by `n`.
    std::uint64_t lf(NodeId n) const;

    NodeId lca(NodeId a, NodeId b) const;

    /// Bits lost generalizing `node` up to `ancestor`:
    /// log2(lf(ancestor)) - log2(lf(node)).
    double loss_single(NodeId ancestor, NodeId node) const;

    /// Suppression cost: a leaf generalized to the root.
    double loss_suppress() const noexcept { return static_cast<double>(height_); }

    /// Both nodes generalized to their LCA.
    PairLoss loss_pair(NodeId a, NodeId b) const;

    /// Coordinate interval covered by a node.
    Interval bounds(NodeId n) const;

    bool operator==(const GridTree& other) const noexcept {
        return axis_min_ == other.axis_min_ && axis_max_ == other.axis_max_ &&
               height_ == other.height_;
    }

private:
    void require(NodeId n) const;

    double axis_min_;
    double axis_max_;
    int height_;
    double leaf_width_;
};

/// Longitude (x) and latitude (y) hierarchies used together.
struct Grid {
    GridTree lon;
    GridTree lat;

    bool operator==(const Grid&) const = default;
};

/// Axis-aligned region in degrees.
struct BoundingBox {
    double lon_min = 0.0;
    double lon_max = 0.0;
    double lat_min = 0.0;
    double lat_max = 0.0;

    /// Throws ConfigError unless both ranges are non-degenerate.
    void validate() const;
    bool contains(double lon, double lat) const noexcept {
        return lon >= lon_min && lon <= lon_max && lat >= lat_min && lat <= lat_max;
    }
    double diagonal() const noexcept;

    bool operator==(const BoundingBox&) const = default;
};

/// The Beijing region the Geolife experiments were cut from.
inline constexpr BoundingBox kDefaultRegion{116.300000, 116.316000, 39.989500, 40.000000};

inline constexpr int kDefaultHeight = 10;

/// Builds both axis trees over `box`.
Grid make_grid(const BoundingBox& box, int height);

}  // namespace trajkanon

#endif  // TRAJKANON_GRID_TREE_HPP
