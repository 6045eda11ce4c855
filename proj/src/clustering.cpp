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

#include "trajkanon/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "trajkanon/error.hpp"
#include "trajkanon/parallel.hpp"

namespace trajkanon {

DistanceMatrix::DistanceMatrix(std::vector<TrajId> ids)
    : ids_(std::move(ids)), data_(ids_.size() * ids_.size(), 0.0) {}

double DistanceMatrix::max_value() const noexcept {
    double best = 0.0;
    for (double v : data_) {
        if (std::isfinite(v)) best = std::max(best, v);
    }
    return best;
}

std::vector<double> DistanceMatrix::pair_values(std::span<const std::size_t> subset) const {
    std::vector<double> out;
    out.reserve(subset.size() * (subset.size() - (subset.empty() ? 0 : 1)) / 2);
    for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = a + 1; b < subset.size(); ++b) {
            out.push_back((*this)(subset[a], subset[b]));
        }
    }
    return out;
}

DistanceMatrix build_distance_matrix(const std::vector<GenTrajectory>& trajs, const Grid& grid,
                                     int threads) {
    if (trajs.size() < 2) throw DomainError("distance matrix needs at least two trajectories");
    std::vector<TrajId> ids;
    ids.reserve(trajs.size());
    for (const auto& t : trajs) ids.push_back(t.member_ids.empty() ? -1 : t.member_ids.front());
    DistanceMatrix dist(std::move(ids));

    // Each task fills a distinct row of the upper triangle.
    parallel_for(trajs.size(), threads, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < trajs.size(); ++j) {
            dist.set(i, j, pairwise_distance(trajs[i], trajs[j], grid));
        }
    });
    return dist;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw DomainError("quantile of an empty sample");
    q = std::clamp(q, 0.0, 1.0);
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
}

DbscanResult dbscan_core(const DistanceMatrix& dist, std::span<const std::size_t> subset,
                         double epsilon, std::size_t min_pts) {
    if (min_pts < 2) throw ConfigError("minPts must be >= 2");
    const std::size_t n = subset.size();

    std::vector<std::vector<std::size_t>> neighbours(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (dist(subset[a], subset[b]) <= epsilon) neighbours[a].push_back(b);
        }
    }
    auto is_core = [&](std::size_t a) { return neighbours[a].size() >= min_pts; };

    constexpr int kUnassigned = -1;
    std::vector<int> label(n, kUnassigned);
    DbscanResult result;

    for (std::size_t seed = 0; seed < n; ++seed) {
        if (label[seed] != kUnassigned || !is_core(seed)) continue;
        const int cluster = static_cast<int>(result.clusters.size());
        result.clusters.emplace_back();
        std::deque<std::size_t> frontier{seed};
        label[seed] = cluster;
        while (!frontier.empty()) {
            const std::size_t cur = frontier.front();
            frontier.pop_front();
            result.clusters.back().push_back(subset[cur]);
            if (!is_core(cur)) continue;
            for (std::size_t nb : neighbours[cur]) {
                if (label[nb] != kUnassigned) continue;
                label[nb] = cluster;
                frontier.push_back(nb);
            }
        }
        std::sort(result.clusters.back().begin(), result.clusters.back().end());
    }
    for (std::size_t a = 0; a < n; ++a) {
        if (label[a] == kUnassigned) result.noise.push_back(subset[a]);
    }
    return result;
}

DbscanResult dbscan_core(const DistanceMatrix& dist, double epsilon, std::size_t min_pts) {
    std::vector<std::size_t> all(dist.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return dbscan_core(dist, all, epsilon, min_pts);
}

void DbscanConfig::validate() const {
    if (k < 2) throw ConfigError("anonymity parameter k must be >= 2");
    if (!(epsilon0 > 0.0) || !(epsilon0 <= top_epsilon)) {
        throw ConfigError("need 0 < epsilon0 <= top_epsilon");
    }
    if (!(quantile_step > 0.0)) throw ConfigError("quantile_step must be > 0");
    if (!(growth > 1.0)) throw ConfigError("epsilon growth must be > 1");
}

std::vector<double> k_distances(const DistanceMatrix& dist, std::span<const std::size_t> subset,
                                std::size_t k) {
    std::vector<double> out;
    out.reserve(subset.size());
    std::vector<double> row;
    for (std::size_t a : subset) {
        row.clear();
        for (std::size_t b : subset) {
            if (b != a) row.push_back(dist(a, b));
        }
        if (k < 2) {
            out.push_back(0.0);
        } else if (row.size() < k - 1) {
            out.push_back(std::numeric_limits<double>::infinity());
        } else {
            std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 2), row.end());
            out.push_back(row[k - 2]);
        }
    }
    return out;
}

namespace {

using DistanceFn = std::function<double(std::size_t, std::size_t)>;

// Moves each leftover into the existing group with the smallest mean
// distance to it (ties to the lower group index).
void spread_leftovers(Groups& groups, const std::vector<std::size_t>& leftovers,
                      const DistanceFn& distance) {
    for (std::size_t item : leftovers) {
        std::size_t best = 0;
        double best_mean = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < groups.size(); ++g) {
            double sum = 0.0;
            for (std::size_t member : groups[g]) sum += distance(item, member);
            const double mean = sum / static_cast<double>(groups[g].size());
            if (mean < best_mean) {
                best_mean = mean;
                best = g;
            }
        }
        groups[best].push_back(item);
    }
    for (auto& g : groups) std::sort(g.begin(), g.end());
}

// Final step shared by both algorithms: lump a remainder of >= k into its own
// group, or spread a smaller one over the existing groups.
void close_out(Groups& groups, std::vector<std::size_t> remaining, std::size_t k,
               const DistanceFn& distance) {
    if (remaining.empty()) return;
    std::sort(remaining.begin(), remaining.end());
    if (remaining.size() >= k || groups.empty()) {
        groups.push_back(std::move(remaining));
    } else {
        spread_leftovers(groups, remaining, distance);
    }
}

}  // namespace

AdaptiveDbscanResult adaptive_dbscan(const DistanceMatrix& dist, const DbscanConfig& cfg) {
    cfg.validate();
    if (dist.size() < cfg.k) {
        throw InfeasibleError("cannot reach " + std::to_string(cfg.k) + "-anonymity with " +
                              std::to_string(dist.size()) + " trajectories");
    }
    const DistanceFn distance = [&](std::size_t a, std::size_t b) { return dist(a, b); };

    AdaptiveDbscanResult result;
    std::vector<std::size_t> remaining(dist.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    double epsilon = cfg.epsilon0;

    for (int round = 1;; ++round) {
        result.epsilons.push_back(epsilon);
        DbscanResult pass = dbscan_core(dist, remaining, epsilon, cfg.k);

        std::vector<std::size_t> next = std::move(pass.noise);
        for (auto& cluster : pass.clusters) {
            if (cluster.size() >= cfg.k) {
                result.clusters.push_back(std::move(cluster));
            } else {
                next.insert(next.end(), cluster.begin(), cluster.end());
            }
        }
        std::sort(next.begin(), next.end());
        remaining = std::move(next);

        if (remaining.size() < 2 * cfg.k || !(epsilon < cfg.top_epsilon)) {
            close_out(result.clusters, std::move(remaining), cfg.k, distance);
            break;
        }
        const double q = std::min(cfg.quantile_step * round, 0.9);
        const double target = cfg.basis == EpsilonBasis::KDistance
                                  ? quantile(k_distances(dist, remaining, cfg.k), q)
                                  : quantile(dist.pair_values(remaining), q);
        epsilon = std::min(cfg.top_epsilon, std::max(epsilon * cfg.growth, target));
    }
    return result;
}

Groups iterative_kmeans(const std::vector<GenTrajectory>& trajs, std::size_t k, const Grid& grid,
                        std::uint64_t seed, const KMeansOptions& opts) {
    if (k < 2) throw ConfigError("anonymity parameter k must be >= 2");
    if (trajs.size() < k) {
        throw InfeasibleError("cannot reach " + std::to_string(k) + "-anonymity with " +
                              std::to_string(trajs.size()) + " trajectories");
    }
    const DistanceFn distance = [&](std::size_t a, std::size_t b) {
        return pairwise_distance(trajs[a], trajs[b], grid);
    };

    std::mt19937_64 rng(seed);
    Groups result;
    std::vector<std::size_t> pool(trajs.size());
    std::iota(pool.begin(), pool.end(), std::size_t{0});

    while (!pool.empty()) {
        if (pool.size() < k) {
            close_out(result, std::move(pool), k, distance);
            break;
        }
        const std::size_t n_clusters = std::max<std::size_t>(1, pool.size() / k);
        std::vector<std::size_t> picked;
        std::sample(pool.begin(), pool.end(), std::back_inserter(picked), n_clusters, rng);
        std::vector<GenTrajectory> centers;
        for (std::size_t idx : picked) centers.push_back(trajs[idx]);

        Groups groups;
        std::vector<std::size_t> assignment(pool.size());
        for (int iter = 0; iter < opts.max_iter; ++iter) {
            parallel_for(pool.size(), opts.threads, [&](std::size_t i) {
                std::size_t best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < centers.size(); ++c) {
                    const double d = pairwise_distance(trajs[pool[i]], centers[c], grid);
                    if (d < best_d) {
                        best_d = d;
                        best = c;
                    }
                }
                assignment[i] = best;
            });

            Groups next(centers.size());
            for (std::size_t i = 0; i < pool.size(); ++i) next[assignment[i]].push_back(pool[i]);
            // Centers that attracted nothing are dropped.
            std::erase_if(next, [](const auto& g) { return g.empty(); });
            if (next == groups) break;
            groups = std::move(next);

            centers.assign(groups.size(), GenTrajectory{});
            parallel_for(groups.size(), opts.threads, [&](std::size_t g) {
                std::vector<GenTrajectory> members;
                members.reserve(groups[g].size());
                for (std::size_t idx : groups[g]) members.push_back(trajs[idx]);
                centers[g] = psa(members, grid).merged;
            });
        }

        std::vector<std::size_t> dissolved;
        for (auto& g : groups) {
            if (g.size() >= k) {
                result.push_back(std::move(g));
            } else {
                dissolved.insert(dissolved.end(), g.begin(), g.end());
            }
        }
        std::sort(dissolved.begin(), dissolved.end());
        pool = std::move(dissolved);
    }
    return result;
}

GeneralizationResult generalize_clusters(const Groups& groups,
                                         const std::vector<GenTrajectory>& trajs,
                                         const Grid& grid, int threads) {
    GeneralizationResult result;
    result.clusters.resize(groups.size());
    parallel_for(groups.size(), threads, [&](std::size_t g) {
        std::vector<GenTrajectory> members;
        members.reserve(groups[g].size());
        for (std::size_t idx : groups[g]) {
            if (idx >= trajs.size()) throw DomainError("cluster refers to a missing trajectory");
            members.push_back(trajs[idx]);
        }
        PsaResult merged = psa(members, grid);
        Cluster& c = result.clusters[g];
        c.member_ids = merged.merged.member_ids;
        c.representative = std::move(merged.merged);
        c.gen_loss = merged.loss;
    });
    for (const auto& c : result.clusters) result.total_loss += c.gen_loss;
    return result;
}

std::vector<PublishedRecord> anonymize(const std::vector<Cluster>& clusters, std::size_t k,
                                       std::uint64_t seed) {
    std::vector<PublishedRecord> records;
    for (const auto& c : clusters) {
        if (c.member_ids.size() < k) {
            throw AnonymityViolation("cluster of " + std::to_string(c.member_ids.size()) +
                                     " trajectories is below k = " + std::to_string(k));
        }
        for (std::size_t i = 0; i < c.member_ids.size(); ++i) {
            records.push_back(PublishedRecord{0, c.representative.points});
        }
    }
    std::mt19937_64 rng(seed);
    std::shuffle(records.begin(), records.end(), rng);
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].pseudonym = static_cast<std::int64_t>(i);
    }
    return records;
}

void write_published_csv(std::ostream& out, const std::vector<PublishedRecord>& records,
                         const Grid& grid) {
    out << "pseudonym,seq,x_node,y_node,lon_lo,lon_hi,lat_lo,lat_hi\n";
    const auto old_precision = out.precision(17);
    for (const auto& r : records) {
        for (std::size_t i = 0; i < r.points.size(); ++i) {
            const auto& p = r.points[i];
            const Interval x = grid.lon.bounds(p.x);
            const Interval y = grid.lat.bounds(p.y);
            out << r.pseudonym << ',' << i << ',' << p.x.value << ',' << p.y.value << ',' << x.lo
                << ',' << x.hi << ',' << y.lo << ',' << y.hi << '\n';
        }
    }
    out.precision(old_precision);
}

}  // namespace trajkanon
