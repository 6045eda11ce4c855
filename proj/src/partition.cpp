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

#include "trajkanon/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "trajkanon/error.hpp"
#include "trajkanon/parallel.hpp"

namespace trajkanon {

void PartitionConfig::validate() const {
    if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("auxiliary spacing d must be > 0");
    if (m < 1) throw ConfigError("number of point clusters m must be >= 1");
    if (kmeans_max_iter < 1) throw ConfigError("kmeans_max_iter must be >= 1");
}

double default_spacing(const BoundingBox& box) { return box.diagonal() / 256.0; }

Trajectory densify(const Trajectory& t, double d, const Grid& grid) {
    if (!(d > 0.0)) throw ConfigError("auxiliary spacing d must be > 0");
    Trajectory out{t.id, t.user_id, {}};
    if (t.points.empty()) return out;
    out.points.reserve(t.points.size());
    out.points.push_back(t.points.front());
    for (std::size_t i = 1; i < t.points.size(); ++i) {
        const TrajPoint& a = t.points[i - 1];
        const TrajPoint& b = t.points[i];
        const double dx = b.lon - a.lon;
        const double dy = b.lat - a.lat;
        const double length = std::hypot(dx, dy);
        for (std::size_t k = 1; static_cast<double>(k) * d < length; ++k) {
            const double s = static_cast<double>(k) * d / length;
            // Clamp to the segment's box so rounding never leaves the grid.
            const double lon = std::clamp(a.lon + dx * s, std::min(a.lon, b.lon), std::max(a.lon, b.lon));
            const double lat = std::clamp(a.lat + dy * s, std::min(a.lat, b.lat), std::max(a.lat, b.lat));
            out.points.push_back(make_point(grid, lon, lat, false));
        }
        out.points.push_back(b);
    }
    return out;
}

namespace {

inline double sq_dist(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

std::vector<Point2> seed_centers(const std::vector<Point2>& points, int m, std::mt19937_64& rng) {
    std::vector<Point2> centers;
    centers.reserve(static_cast<std::size_t>(m));
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    centers.push_back(points[pick(rng)]);

    std::vector<double> nearest(points.size(), std::numeric_limits<double>::infinity());
    while (centers.size() < static_cast<std::size_t>(m)) {
        const Point2& last = centers.back();
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            nearest[i] = std::min(nearest[i], sq_dist(points[i], last));
            total += nearest[i];
        }
        if (total > 0.0) {
            std::discrete_distribution<std::size_t> weighted(nearest.begin(), nearest.end());
            centers.push_back(points[weighted(rng)]);
        } else {
            centers.push_back(points[pick(rng)]);
        }
    }
    return centers;
}

}  // namespace

std::vector<int> kmeans(const std::vector<Point2>& points, const PartitionConfig& cfg) {
    cfg.validate();
    const auto m = static_cast<std::size_t>(cfg.m);
    if (points.size() < m) {
        throw ConfigError("k-means needs at least m = " + std::to_string(cfg.m) + " points, got " +
                          std::to_string(points.size()));
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<Point2> centers = seed_centers(points, cfg.m, rng);
    std::vector<int> labels(points.size(), -1);
    std::vector<int> next(points.size());

    for (int iter = 0; iter < cfg.kmeans_max_iter; ++iter) {
        parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
            int best = 0;
            double best_d = sq_dist(points[i], centers[0]);
            for (std::size_t c = 1; c < m; ++c) {
                const double dc = sq_dist(points[i], centers[c]);
                if (dc < best_d) {
                    best_d = dc;
                    best = static_cast<int>(c);
                }
            }
            next[i] = best;
        });
        if (next == labels) break;
        labels = next;

        std::vector<Point2> sums(m);
        std::vector<std::size_t> counts(m, 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto c = static_cast<std::size_t>(labels[i]);
            sums[c].x += points[i].x;
            sums[c].y += points[i].y;
            ++counts[c];
        }
        for (std::size_t c = 0; c < m; ++c) {
            // An emptied cluster keeps its previous center.
            if (counts[c] == 0) continue;
            centers[c] = Point2{sums[c].x / static_cast<double>(counts[c]),
                                sums[c].y / static_cast<double>(counts[c])};
        }
    }
    return labels;
}

PointLabeling kmeans_points(const std::vector<Trajectory>& densified, const PartitionConfig& cfg) {
    std::vector<Point2> flat;
    for (const auto& t : densified) {
        for (const auto& p : t.points) flat.push_back(Point2{p.lon, p.lat});
    }
    const std::vector<int> labels = kmeans(flat, cfg);

    PointLabeling out;
    out.reserve(densified.size());
    std::size_t k = 0;
    for (const auto& t : densified) {
        out.emplace_back(labels.begin() + static_cast<std::ptrdiff_t>(k),
                         labels.begin() + static_cast<std::ptrdiff_t>(k + t.points.size()));
        k += t.points.size();
    }
    return out;
}

std::vector<Trajectory> segment(const std::vector<Trajectory>& densified,
                                const PointLabeling& labels, TrajId first_id) {
    if (labels.size() != densified.size()) {
        throw DomainError("labeling does not cover the dataset");
    }
    std::vector<Trajectory> out;
    TrajId next_id = first_id;

    for (std::size_t t = 0; t < densified.size(); ++t) {
        const auto& src = densified[t];
        const auto& lab = labels[t];
        if (lab.size() != src.points.size()) {
            throw DomainError("labeling does not cover trajectory " + std::to_string(src.id));
        }
        if (src.points.empty()) continue;

        // Interior auxiliary points are dropped when the segment is emitted;
        // the first and last point are kept whatever their kind.
        std::size_t begin = 0;
        auto emit = [&](std::size_t end) {
            Trajectory seg{next_id++, src.user_id, {}};
            for (std::size_t i = begin; i < end; ++i) {
                const bool endpoint = i == begin || i + 1 == end;
                if (src.points[i].is_real || endpoint) seg.points.push_back(src.points[i]);
            }
            out.push_back(std::move(seg));
        };
        for (std::size_t p = 0; p + 1 < src.points.size(); ++p) {
            if (lab[p] != lab[p + 1]) {
                emit(p + 1);
                begin = p + 1;
            }
        }
        emit(src.points.size());
    }
    return out;
}

PartitionResult partition(const std::vector<Trajectory>& trajs, const PartitionConfig& cfg,
                          const Grid& grid) {
    cfg.validate();
    PartitionResult result;
    result.densified.resize(trajs.size());
    parallel_for(trajs.size(), cfg.threads,
                 [&](std::size_t i) { result.densified[i] = densify(trajs[i], cfg.d, grid); });
    result.labels = kmeans_points(result.densified, cfg);
    result.segments = segment(result.densified, result.labels);
    return result;
}

void write_labels_csv(std::ostream& out, const std::vector<Trajectory>& densified,
                      const PointLabeling& labels) {
    out << "traj_id,seq,lon,lat,is_real,label\n";
    const auto old_precision = out.precision(17);
    for (std::size_t t = 0; t < densified.size() && t < labels.size(); ++t) {
        const auto& tr = densified[t];
        for (std::size_t i = 0; i < tr.points.size(); ++i) {
            const auto& p = tr.points[i];
            out << tr.id << ',' << i << ',' << p.lon << ',' << p.lat << ',' << (p.is_real ? 1 : 0)
                << ',' << labels[t][i] << '\n';
        }
    }
    out.precision(old_precision);
}

}  // namespace trajkanon
