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

#ifndef TRAJKANON_CLUSTERING_HPP
#define TRAJKANON_CLUSTERING_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "trajkanon/alignment.hpp"
#include "trajkanon/grid_tree.hpp"

namespace trajkanon {

/// Groups of positions into the trajectory list being clustered.
using Groups = std::vector<std::vector<std::size_t>>;

/// Symmetric matrix of alignment losses with a zero diagonal. Rows follow the
/// order of the trajectory list it was built from.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::vector<TrajId> ids);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<TrajId>& ids() const noexcept { return ids_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * size() + j]; }
    void set(std::size_t i, std::size_t j, double value) noexcept {
        data_[i * size() + j] = value;
        data_[j * size() + i] = value;
    }

    /// Largest finite entry (0 for an empty or single-entry matrix).
    double max_value() const noexcept;

    /// All off-diagonal distances between members of `subset`, one per pair.
    std::vector<double> pair_values(std::span<const std::size_t> subset) const;

private:
    std::vector<TrajId> ids_;
    std::vector<double> data_;
};

/// Fills every unordered pair with pairwise_distance. Throws DomainError on
/// fewer than two trajectories.
DistanceMatrix build_distance_matrix(const std::vector<GenTrajectory>& trajs, const Grid& grid,
                                     int threads = 0);

/// Linear-interpolation quantile (q in [0, 1]) of an unsorted sample.
double quantile(std::vector<double> values, double q);

struct DbscanResult {
    Groups clusters;
    std::vector<std::size_t> noise;
};

/// Classic density expansion over the rows listed in `subset`.
///
/// The epsilon-neighbourhood (distance <= epsilon) counts the trajectory
/// itself; a core has at least `min_pts` neighbours. Clusters are seeded from
/// cores in subset order and a border trajectory joins the first cluster that
/// reaches it. Indices in the result are matrix rows.
DbscanResult dbscan_core(const DistanceMatrix& dist, std::span<const std::size_t> subset,
                         double epsilon, std::size_t min_pts);
DbscanResult dbscan_core(const DistanceMatrix& dist, double epsilon, std::size_t min_pts);

/// Distances the epsilon quantiles are taken over.
enum class EpsilonBasis {
    PairDistance,  // every pair among the remaining trajectories
    KDistance,     // each remaining trajectory's (k-1)-th nearest remaining neighbour
};

/// (k-1)-th smallest distance from each row in `subset` to the other rows of
/// `subset`, in subset order. Rows with fewer than k-1 others get +infinity.
std::vector<double> k_distances(const DistanceMatrix& dist, std::span<const std::size_t> subset,
                                std::size_t k);

struct DbscanConfig {
    std::size_t k = 2;          // anonymity parameter, used as minPts
    double epsilon0 = 1.0;
    double top_epsilon = 1.0;
    double quantile_step = 0.25;
    double growth = 2.0;        // minimum factor between rounds
    EpsilonBasis basis = EpsilonBasis::PairDistance;
    std::uint64_t seed = 0;     // recorded for reports; the algorithm is deterministic

    void validate() const;
};

struct AdaptiveDbscanResult {
    Groups clusters;
    std::vector<double> epsilons;  // radius used in each round
};

/// Repeats dbscan_core with minPts = k on the trajectories not yet placed in a
/// cluster of size >= k, growing epsilon between rounds:
///
///   eps <- min(top, max(growth eps, quantile(basis values, min(step r, 0.9))))
///
/// where the basis values are computed over the trajectories still remaining.
///
/// Once fewer than 2k trajectories remain, or epsilon has reached its cap,
/// the remainder becomes one final cluster. A remainder smaller than k is
/// instead spread over the nearest existing clusters. Throws InfeasibleError
/// when the dataset has fewer than k trajectories.
AdaptiveDbscanResult adaptive_dbscan(const DistanceMatrix& dist, const DbscanConfig& cfg);

struct KMeansOptions {
    int max_iter = 50;
    int threads = 0;
};

/// k'-means over trajectories with DSA loss as distance and PSA merges as
/// centers, dissolving and re-clustering groups smaller than k until every
/// group conforms.
Groups iterative_kmeans(const std::vector<GenTrajectory>& trajs, std::size_t k, const Grid& grid,
                        std::uint64_t seed, const KMeansOptions& opts = {});

struct Cluster {
    std::vector<TrajId> member_ids;
    GenTrajectory representative;
    double gen_loss = 0.0;
};

struct GeneralizationResult {
    std::vector<Cluster> clusters;
    double total_loss = 0.0;
};

/// PSA-merges every group into its representative.
GeneralizationResult generalize_clusters(const Groups& groups,
                                         const std::vector<GenTrajectory>& trajs,
                                         const Grid& grid, int threads = 0);

/// One published row group: a pseudonym and its cluster's generalized points.
struct PublishedRecord {
    std::int64_t pseudonym = 0;
    std::vector<GenPoint> points;

    bool operator==(const PublishedRecord&) const = default;
};

/// One record per member trajectory, carrying the cluster representative.
/// Pseudonyms are a seeded permutation of 0..N-1. Throws AnonymityViolation
/// if any cluster has fewer than k members.
std::vector<PublishedRecord> anonymize(const std::vector<Cluster>& clusters, std::size_t k,
                                       std::uint64_t seed);

/// "pseudonym,seq,x_node,y_node,lon_lo,lon_hi,lat_lo,lat_hi".
void write_published_csv(std::ostream& out, const std::vector<PublishedRecord>& records,
                         const Grid& grid);

}  // namespace trajkanon

#endif  // TRAJKANON_CLUSTERING_HPP
