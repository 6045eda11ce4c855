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

#include "trajkanon/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "trajkanon/error.hpp"
#include "trajkanon/parallel.hpp"
#include "trajkanon/trajectory_io.hpp"

namespace trajkanon {

using nlohmann::json;

std::string to_string(InputFormat f) {
    switch (f) {
        case InputFormat::PltDir: return "plt-dir";
        case InputFormat::TaxiLog: return "taxi-log";
        case InputFormat::Csv: return "csv";
    }
    return "csv";
}

std::string to_string(Algorithm a) {
    return a == Algorithm::AdaptiveDbscan ? "dbscan" : "kmeans";
}

InputFormat parse_input_format(std::string_view s) {
    if (s == "plt-dir") return InputFormat::PltDir;
    if (s == "taxi-log") return InputFormat::TaxiLog;
    if (s == "csv") return InputFormat::Csv;
    throw ConfigError("unknown input format '" + std::string(s) + "'");
}

Algorithm parse_algorithm(std::string_view s) {
    if (s == "dbscan") return Algorithm::AdaptiveDbscan;
    if (s == "kmeans") return Algorithm::IterativeKMeans;
    throw ConfigError("unknown algorithm '" + std::string(s) + "'");
}

void RunConfig::validate() const {
    bbox.validate();
    if (height < 1 || height > GridTree::kMaxHeight) throw ConfigError("height outside [1, 24]");
    if (k < 2) throw ConfigError("anonymity parameter k must be >= 2");
    if (min_len < 1) throw ConfigError("min_len must be >= 1");
    if (d && !(*d > 0.0)) throw ConfigError("auxiliary spacing d must be > 0");
    if (m < 1) throw ConfigError("m must be >= 1");
    if (kmeans_max_iter < 1 || kprime_max_iter < 1) throw ConfigError("iteration caps must be >= 1");
    if (epsilon0 && !(*epsilon0 > 0.0)) throw ConfigError("epsilon0 must be > 0");
    if (!(quantile_step > 0.0)) throw ConfigError("quantile_step must be > 0");
    if (!(epsilon_growth > 1.0)) throw ConfigError("epsilon growth must be > 1");
    if (sample_sizes.empty()) throw ConfigError("at least one attack sample size is needed");
    for (std::size_t s : sample_sizes) {
        if (s < 1) throw ConfigError("attack sample sizes must be >= 1");
    }
}

std::uint64_t derive_seed(std::uint64_t master, Stage stage, std::uint64_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(stage), static_cast<std::uint32_t>(salt),
                      static_cast<std::uint32_t>(salt >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (std::uint64_t{out[0]} << 32) | out[1];
}

double default_epsilon0(const DistanceMatrix& dist, std::size_t k, double q, EpsilonBasis basis) {
    std::vector<std::size_t> all(dist.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    auto values = basis == EpsilonBasis::KDistance ? k_distances(dist, all, k) : dist.pair_values(all);
    std::erase_if(values, [](double v) { return !std::isfinite(v); });
    if (values.empty()) return 1.0;
    return std::max(1.0, quantile(std::move(values), q));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    const double s = std::chrono::duration<double>(Clock::now() - start).count();
    return std::round(s * 1000.0) / 1000.0;
}

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const InfeasibleError& e) {
        throw InfeasibleError(std::string(stage) + ": " + e.what());
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e.what());
    }
}

json rates_json(const std::map<std::size_t, double>& rates) {
    json j = json::object();
    for (const auto& [size, rate] : rates) j[std::to_string(size)] = rate;
    return j;
}

std::map<std::size_t, double> rates_from_json(const json& j) {
    std::map<std::size_t, double> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out[static_cast<std::size_t>(std::stoull(it.key()))] = it.value().get<double>();
    }
    return out;
}

}  // namespace

std::string RunReport::to_json() const {
    json j = {
        {"k", k},
        {"algorithm", algorithm},
        {"partition", partition},
        {"height", height},
        {"seed", seed},
        {"threads", threads},
        {"trajectories_before_partition", trajectories_before_partition},
        {"trajectories_after_partition", trajectories_after_partition},
        {"cluster_count", cluster_count},
        {"total_information_loss", total_information_loss},
        {"avg_loss_per_cluster", avg_loss_per_cluster},
        {"times",
         {{"partition_s", times.partition_s},
          {"distance_matrix_s", times.distance_matrix_s},
          {"clustering_s", times.clustering_s},
          {"generalization_s", times.generalization_s}}},
        {"epsilons", epsilons},
        {"attack_success_rate", attack_success_rate},
        {"attack_success_rates", rates_json(attack_success_rates)},
        {"baseline_success_rates", rates_json(baseline_success_rates)},
    };
    return j.dump(2);
}

RunReport RunReport::from_json(std::string_view text) {
    RunReport r;
    try {
        const json j = json::parse(text);
        r.k = j.at("k").get<std::size_t>();
        r.algorithm = j.at("algorithm").get<std::string>();
        r.partition = j.at("partition").get<bool>();
        r.height = j.at("height").get<int>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.threads = j.at("threads").get<int>();
        r.trajectories_before_partition = j.at("trajectories_before_partition").get<std::size_t>();
        r.trajectories_after_partition = j.at("trajectories_after_partition").get<std::size_t>();
        r.cluster_count = j.at("cluster_count").get<std::size_t>();
        r.total_information_loss = j.at("total_information_loss").get<double>();
        r.avg_loss_per_cluster = j.at("avg_loss_per_cluster").get<double>();
        const json& t = j.at("times");
        r.times.partition_s = t.at("partition_s").get<double>();
        r.times.distance_matrix_s = t.at("distance_matrix_s").get<double>();
        r.times.clustering_s = t.at("clustering_s").get<double>();
        r.times.generalization_s = t.at("generalization_s").get<double>();
        r.epsilons = j.at("epsilons").get<std::vector<double>>();
        r.attack_success_rate = j.at("attack_success_rate").get<double>();
        r.attack_success_rates = rates_from_json(j.at("attack_success_rates"));
        r.baseline_success_rates = rates_from_json(j.at("baseline_success_rates"));
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("report json: ") + e.what());
    }
    return r;
}

std::vector<Trajectory> ingest(const RunConfig& cfg, const Grid& grid) {
    return in_stage("ingest", [&] {
        std::vector<PointStream> streams;
        switch (cfg.format) {
            case InputFormat::PltDir: streams = load_plt_dir(cfg.input); break;
            case InputFormat::TaxiLog: streams = load_taxi_logs(cfg.input); break;
            case InputFormat::Csv: streams = streams_from_csv(read_file(cfg.input)); break;
        }
        return build_dataset(streams, cfg.bbox, grid, cfg.min_len);
    });
}

RunOutput run_dataset(std::vector<Trajectory> trajs, const RunConfig& cfg) {
    cfg.validate();
    RunOutput out{.report = {}, .grid = make_grid(cfg.bbox, cfg.height)};
    const Grid& grid = out.grid;
    RunReport& report = out.report;
    report.k = cfg.k;
    report.algorithm = to_string(cfg.algorithm);
    report.partition = cfg.partition;
    report.height = cfg.height;
    report.seed = cfg.seed;
    report.threads = resolve_threads(cfg.threads);

    out.input = std::move(trajs);
    report.trajectories_before_partition = out.input.size();

    if (cfg.partition) {
        const auto start = Clock::now();
        PartitionConfig pc;
        pc.d = cfg.d.value_or(default_spacing(cfg.bbox));
        pc.m = cfg.m;
        pc.kmeans_max_iter = cfg.kmeans_max_iter;
        pc.seed = derive_seed(cfg.seed, Stage::Partition);
        pc.threads = cfg.threads;
        out.partition = in_stage("partition", [&] { return partition(out.input, pc, grid); });
        out.anonymization_input = out.partition->segments;
        report.times.partition_s = seconds_since(start);
    } else {
        out.anonymization_input = out.input;
    }
    report.trajectories_after_partition = out.anonymization_input.size();

    const std::vector<GenTrajectory> lifted = lift_all(out.anonymization_input);
    if (lifted.size() < cfg.k) {
        throw InfeasibleError("clustering: cannot reach " + std::to_string(cfg.k) +
                              "-anonymity with " + std::to_string(lifted.size()) + " trajectories");
    }

    if (cfg.algorithm == Algorithm::AdaptiveDbscan) {
        auto start = Clock::now();
        const DistanceMatrix dist = in_stage(
            "distance-matrix", [&] { return build_distance_matrix(lifted, grid, cfg.threads); });
        report.times.distance_matrix_s = seconds_since(start);

        start = Clock::now();
        DbscanConfig dc;
        dc.k = cfg.k;
        dc.epsilon0 = cfg.epsilon0.value_or(
            default_epsilon0(dist, cfg.k, cfg.quantile_step, cfg.epsilon_basis));
        dc.top_epsilon = std::max(dist.max_value(), dc.epsilon0);
        dc.quantile_step = cfg.quantile_step;
        dc.growth = cfg.epsilon_growth;
        dc.basis = cfg.epsilon_basis;
        dc.seed = derive_seed(cfg.seed, Stage::Clustering);
        AdaptiveDbscanResult res = in_stage("clustering", [&] { return adaptive_dbscan(dist, dc); });
        out.groups = std::move(res.clusters);
        report.epsilons = std::move(res.epsilons);
        report.times.clustering_s = seconds_since(start);
    } else {
        const auto start = Clock::now();
        KMeansOptions opts{cfg.kprime_max_iter, cfg.threads};
        out.groups = in_stage("clustering", [&] {
            return iterative_kmeans(lifted, cfg.k, grid, derive_seed(cfg.seed, Stage::Clustering),
                                    opts);
        });
        report.times.clustering_s = seconds_since(start);
    }

    {
        const auto start = Clock::now();
        out.generalization = in_stage(
            "generalization", [&] { return generalize_clusters(out.groups, lifted, grid, cfg.threads); });
        report.times.generalization_s = seconds_since(start);
    }
    out.published = in_stage("publish", [&] {
        return anonymize(out.generalization.clusters, cfg.k, derive_seed(cfg.seed, Stage::Publish));
    });

    report.cluster_count = out.generalization.clusters.size();
    report.total_information_loss = out.generalization.total_loss;
    report.avg_loss_per_cluster =
        report.cluster_count == 0 ? 0.0
                                  : report.total_information_loss /
                                        static_cast<double>(report.cluster_count);

    const std::vector<PublishedRecord> unprotected = as_records(out.anonymization_input);
    for (std::size_t size : cfg.sample_sizes) {
        AttackRun attack;
        attack.knowledge =
            sample_knowledge(out.anonymization_input, size, derive_seed(cfg.seed, Stage::Attack, size));
        attack.anonymized = evaluate(out.published, attack.knowledge, cfg.threads);
        attack.baseline = evaluate(unprotected, attack.knowledge, cfg.threads);
        report.attack_success_rates[size] = attack.anonymized.success_rate;
        report.baseline_success_rates[size] = attack.baseline.success_rate;
        report.attack_success_rate = std::max(report.attack_success_rate, attack.anonymized.success_rate);
        out.attacks.push_back(std::move(attack));
    }
    return out;
}

void write_outputs(const RunOutput& out, const RunConfig& cfg) {
    if (cfg.out_dir.empty()) return;
    std::filesystem::create_directories(cfg.out_dir);
    auto open = [&](const char* name) {
        std::ofstream f(cfg.out_dir / name, std::ios::binary);
        if (!f) throw Error("cannot write " + (cfg.out_dir / name).string());
        return f;
    };
    {
        auto f = open("published.csv");
        write_published_csv(f, out.published, out.grid);
    }
    {
        json attacks = json::array();
        for (const auto& a : out.attacks) {
            attacks.push_back(json::parse(attack_report_json(a.anonymized, cfg.k, a.knowledge)));
        }
        auto f = open("attack.json");
        f << attacks.dump(2) << '\n';
    }
    {
        auto f = open("report.json");
        f << out.report.to_json() << '\n';
    }
    if (cfg.write_labels && out.partition) {
        auto f = open("labels.csv");
        write_labels_csv(f, out.partition->densified, out.partition->labels);
    }
}

RunReport run(const RunConfig& cfg) {
    cfg.validate();
    const Grid grid = make_grid(cfg.bbox, cfg.height);
    RunOutput out = run_dataset(ingest(cfg, grid), cfg);
    write_outputs(out, cfg);
    return out.report;
}

double reduction_pct(double a, double b) {
    if (a == b) return 0.0;
    if (a == 0.0) throw DomainError("reduction relative to a zero baseline is undefined");
    return 100.0 * (a - b) / a;
}

Comparison compare(const RunReport& a, const RunReport& b) {
    if (a.k != b.k) {
        throw DomainError("cannot compare reports with k = " + std::to_string(a.k) + " and k = " +
                          std::to_string(b.k));
    }
    Comparison c;
    c.k = a.k;
    c.total_a = a.total_information_loss;
    c.total_b = b.total_information_loss;
    c.total_reduction_pct = reduction_pct(c.total_a, c.total_b);
    c.per_cluster_a = a.avg_loss_per_cluster;
    c.per_cluster_b = b.avg_loss_per_cluster;
    c.per_cluster_reduction_pct = reduction_pct(c.per_cluster_a, c.per_cluster_b);
    return c;
}

std::string Comparison::to_table() const {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2);
    s << "| k | metric | A | B | reduction(%) |\n";
    s << "|---|---|---|---|---|\n";
    s << "| " << k << " | total information loss | " << total_a << " | " << total_b << " | "
      << total_reduction_pct << " |\n";
    s << "| " << k << " | avg loss per cluster | " << per_cluster_a << " | " << per_cluster_b
      << " | " << per_cluster_reduction_pct << " |\n";
    return s.str();
}

}  // namespace trajkanon
