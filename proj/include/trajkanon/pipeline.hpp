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

#ifndef TRAJKANON_PIPELINE_HPP
#define TRAJKANON_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajkanon/attack.hpp"
#include "trajkanon/clustering.hpp"
#include "trajkanon/grid_tree.hpp"
#include "trajkanon/partition.hpp"
#include "trajkanon/trajectory.hpp"

namespace trajkanon {

enum class InputFormat { PltDir, TaxiLog, Csv };
enum class Algorithm { AdaptiveDbscan, IterativeKMeans };

std::string to_string(InputFormat f);
std::string to_string(Algorithm a);
InputFormat parse_input_format(std::string_view s);
Algorithm parse_algorithm(std::string_view s);

struct RunConfig {
    std::filesystem::path input;
    InputFormat format = InputFormat::Csv;
    BoundingBox bbox = kDefaultRegion;
    int height = kDefaultHeight;
    std::size_t k = 2;
    std::size_t min_len = 2;

    bool partition = true;
    std::optional<double> d;  // default: bbox diagonal / 256
    int m = 27;
    int kmeans_max_iter = 100;

    Algorithm algorithm = Algorithm::AdaptiveDbscan;
    std::optional<double> epsilon0;  // default: see default_epsilon0
    double quantile_step = 0.05;
    double epsilon_growth = 1.25;
    EpsilonBasis epsilon_basis = EpsilonBasis::KDistance;
    int kprime_max_iter = 50;

    std::vector<std::size_t> sample_sizes{1, 2, 3, 5};
    std::uint64_t seed = 0;
    std::filesystem::path out_dir;  // empty: write nothing
    bool write_labels = false;
    int threads = 0;

    void validate() const;
};

enum class Stage : std::uint64_t { Partition = 1, Clustering, Publish, Attack };

/// Per-stage seed derived from the master seed.
std::uint64_t derive_seed(std::uint64_t master, Stage stage, std::uint64_t salt = 0);

/// Starting DBSCAN radius when none is configured: the `q` quantile of the
/// basis values over the whole dataset, at least 1 bit.
double default_epsilon0(const DistanceMatrix& dist, std::size_t k, double q,
                        EpsilonBasis basis = EpsilonBasis::KDistance);

struct StageTimes {
    double partition_s = 0.0;
    double distance_matrix_s = 0.0;
    double clustering_s = 0.0;
    double generalization_s = 0.0;

    /// Everything after ingestion and partitioning.
    double anonymization_s() const noexcept {
        return distance_matrix_s + clustering_s + generalization_s;
    }
};

struct RunReport {
    std::size_t k = 0;
    std::string algorithm;
    bool partition = false;
    int height = 0;
    std::uint64_t seed = 0;
    int threads = 1;

    std::size_t trajectories_before_partition = 0;
    std::size_t trajectories_after_partition = 0;
    std::size_t cluster_count = 0;
    double total_information_loss = 0.0;
    double avg_loss_per_cluster = 0.0;
    StageTimes times;
    std::vector<double> epsilons;

    double attack_success_rate = 0.0;  // worst case over sample sizes
    std::map<std::size_t, double> attack_success_rates;
    std::map<std::size_t, double> baseline_success_rates;  // same attack on the unprotected input

    std::string to_json() const;
    static RunReport from_json(std::string_view text);
};

struct AttackRun {
    AttackKnowledge knowledge;
    AttackReport anonymized;
    AttackReport baseline;
};

struct RunOutput {
    RunReport report;
    Grid grid;
    std::vector<Trajectory> input{};  // after ingestion
    std::optional<PartitionResult> partition{};
    std::vector<Trajectory> anonymization_input{};
    Groups groups{};
    GeneralizationResult generalization{};
    std::vector<PublishedRecord> published{};
    std::vector<AttackRun> attacks{};
};

/// Loads the configured input as trajectories on `grid`.
std::vector<Trajectory> ingest(const RunConfig& cfg, const Grid& grid);

/// Partition -> distance matrix -> clustering -> PSA -> publish -> attack, on
/// an already ingested dataset. Every random choice derives from cfg.seed.
RunOutput run_dataset(std::vector<Trajectory> trajs, const RunConfig& cfg);

/// Writes published.csv, attack.json, report.json (and labels.csv when
/// requested) under cfg.out_dir.
void write_outputs(const RunOutput& out, const RunConfig& cfg);

/// ingest + run_dataset + write_outputs.
RunReport run(const RunConfig& cfg);

struct Comparison {
    std::size_t k = 0;
    double total_a = 0.0;
    double total_b = 0.0;
    double total_reduction_pct = 0.0;
    double per_cluster_a = 0.0;
    double per_cluster_b = 0.0;
    double per_cluster_reduction_pct = 0.0;

    std::string to_table() const;
};

/// 100 (a - b) / a; zero when a == b.
double reduction_pct(double a, double b);

/// Loss reductions of `b` relative to `a`. Throws DomainError when the two
/// reports were produced with different k.
Comparison compare(const RunReport& a, const RunReport& b);

}  // namespace trajkanon

#endif  // TRAJKANON_PIPELINE_HPP
