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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status if
// any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "trajkanon/alignment.hpp"
#include "trajkanon/attack.hpp"
#include "trajkanon/clustering.hpp"
#include "trajkanon/partition.hpp"
#include "trajkanon/pipeline.hpp"
#include "trajkanon/synthetic.hpp"
#include "trajkanon/trajectory_io.hpp"

using namespace trajkanon;

namespace {

// Pinned thresholds.
constexpr double kDsaTimeLimitS = 30.0;
constexpr std::size_t kDsaRandomPairs = 500;
constexpr std::size_t kAnonDatasets = 100;
constexpr std::array<std::size_t, 3> kAnonKs{2, 4, 8};
constexpr std::array<std::size_t, 3> kAttackSizes{1, 3, 5};
constexpr int kTrendSeeds = 5;
constexpr int kTrendSeedsRequired = 4;
constexpr double kTrendMinReductionAtK2 = 30.0;  // percent
constexpr int kTrendHeight = 8;
constexpr double kTrendSpacingDivisor = 128.0;
constexpr std::array<std::size_t, 4> kTrendKs{2, 4, 8, 10};
constexpr double kSegmentFactorLo = 3.0;
constexpr double kSegmentFactorHi = 7.0;
constexpr std::size_t kDbscanCases = 200;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int id, const char* name, const Outcome& o, double seconds) {
    std::printf("[%s] criterion %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), seconds);
    std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// 1. DSA against exhaustive enumeration.

const Grid kGrid3 = make_grid(BoundingBox{0.0, 8.0, 0.0, 8.0}, 3);

GenTrajectory from_leaves(const std::vector<std::uint32_t>& xs, const std::vector<std::uint32_t>& ys,
                          TrajId id) {
    GenTrajectory t;
    for (std::size_t i = 0; i < xs.size(); ++i) t.points.push_back({NodeId{xs[i]}, NodeId{ys[i]}});
    t.member_ids = {id};
    return t;
}

Outcome dsa_oracle() {
    Outcome o;
    std::size_t checked = 0;
    std::size_t mismatches = 0;

    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> len(1, 4);
    std::uniform_int_distribution<std::uint32_t> leaf(8, 15);
    for (std::size_t pair = 0; pair < kDsaRandomPairs; ++pair) {
        std::array<GenTrajectory, 2> t;
        for (TrajId side = 0; side < 2; ++side) {
            const std::size_t n = len(rng);
            std::vector<std::uint32_t> xs(n);
            std::vector<std::uint32_t> ys(n);
            for (std::size_t i = 0; i < n; ++i) {
                xs[i] = leaf(rng);
                ys[i] = leaf(rng);
            }
            t[static_cast<std::size_t>(side)] = from_leaves(xs, ys, side);
        }
        const double want = oracle::min_alignment_loss(t[0], t[1], 3, 3);
        mismatches += dsa(t[0], t[1], kGrid3).loss == want ? 0 : 1;
        mismatches += pairwise_distance(t[0], t[1], kGrid3) == want ? 0 : 1;
        ++checked;
    }

    // Every trajectory of one or two points, against every other. The oracle
    // enumerates the alignments explicitly with costs from explicit root paths.
    std::array<std::array<int, 16>, 16> axis{};
    for (std::uint32_t a = 8; a < 16; ++a) {
        for (std::uint32_t b = 8; b < 16; ++b) {
            const std::uint32_t top = oracle::lca(a, b);
            axis[a][b] = oracle::depth(a) + oracle::depth(b) - 2 * oracle::depth(top);
        }
    }
    constexpr int kGap = 6;
    std::vector<GenTrajectory> all;
    std::vector<std::vector<std::array<std::uint32_t, 2>>> raw;
    for (std::uint32_t x = 8; x < 16; ++x) {
        for (std::uint32_t y = 8; y < 16; ++y) {
            raw.push_back({{x, y}});
        }
    }
    const std::size_t singles = raw.size();
    for (std::size_t a = 0; a < singles; ++a) {
        for (std::size_t b = 0; b < singles; ++b) raw.push_back({raw[a][0], raw[b][0]});
    }
    for (const auto& r : raw) {
        std::vector<std::uint32_t> xs;
        std::vector<std::uint32_t> ys;
        for (const auto& p : r) {
            xs.push_back(p[0]);
            ys.push_back(p[1]);
        }
        all.push_back(from_leaves(xs, ys, 0));
    }
    auto cost = [&](const std::array<std::uint32_t, 2>& a, const std::array<std::uint32_t, 2>& b) {
        return axis[a[0]][b[0]] + axis[a[1]][b[1]];
    };
    // All monotone alignments of sequences of length <= 2, listed by hand.
    auto enumerate = [&](const auto& p, const auto& q) {
        const std::size_t m = p.size();
        const std::size_t n = q.size();
        int best = kGap * static_cast<int>(m + n);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                best = std::min(best, cost(p[i], q[j]) + kGap * static_cast<int>(m + n - 2));
            }
        }
        if (m == 2 && n == 2) best = std::min(best, cost(p[0], q[0]) + cost(p[1], q[1]));
        return best;
    };
    for (std::size_t a = 0; a < all.size(); ++a) {
        for (std::size_t b = a; b < all.size(); ++b) {
            const double got = pairwise_distance(all[a], all[b], kGrid3);
            if (got != static_cast<double>(enumerate(raw[a], raw[b]))) ++mismatches;
            ++checked;
        }
    }
    // Spot-check the enumerator itself against the recursive oracle.
    for (std::size_t a = 0; a < all.size(); a += 97) {
        for (std::size_t b = 0; b < all.size(); b += 89) {
            if (oracle::min_alignment_loss(all[a], all[b], 3, 3) != enumerate(raw[a], raw[b])) ++mismatches;
        }
    }
    o.pass = mismatches == 0;
    o.detail = std::to_string(checked) + " pairs, " + std::to_string(mismatches) + " mismatches";
    return o;
}

// ---------------------------------------------------------------------------
// 2. Loss-model axioms.

Outcome loss_axioms() {
    std::size_t violations = 0;
    std::size_t checks = 0;
    for (int h = 1; h <= 4; ++h) {
        const GridTree t(0.0, 1.0, h);
        for (std::uint32_t a = 1; a <= t.node_count(); ++a) {
            const NodeId na{a};
            ++checks;
            violations += t.loss_single(na, na) == 0.0 ? 0 : 1;
            if (t.is_leaf(na)) {
                violations += t.loss_single(t.root(), na) == t.loss_suppress() ? 0 : 1;
                violations += t.loss_suppress() == static_cast<double>(h) ? 0 : 1;
            }
            for (std::uint32_t b = 1; b <= t.node_count(); ++b) {
                const NodeId nb{b};
                ++checks;
                const auto ab = t.loss_pair(na, nb);
                const auto ba = t.loss_pair(nb, na);
                violations += ab.loss == ba.loss && ab.lca == ba.lca ? 0 : 1;
                const NodeId l = t.lca(na, nb);
                violations += l.value == oracle::lca(a, b) ? 0 : 1;
                violations += oracle::covers(l.value, a) && oracle::covers(l.value, b) ? 0 : 1;
                for (std::uint32_t child : {2 * l.value, 2 * l.value + 1}) {
                    if (child <= t.node_count() && oracle::covers(child, a) && oracle::covers(child, b)) {
                        ++violations;
                    }
                }
                const double expect = (oracle::depth(a) - oracle::depth(l.value)) +
                                      (oracle::depth(b) - oracle::depth(l.value));
                violations += ab.loss == expect ? 0 : 1;
            }
        }
    }
    return {violations == 0,
            std::to_string(checks) + " node checks over H = 1..4, " + std::to_string(violations) +
                " violations"};
}

// ---------------------------------------------------------------------------
// 3-5. Synthetic random-walk datasets.

const Grid kWalkGrid = make_grid(kDefaultRegion, 8);

std::vector<std::vector<Trajectory>> walk_datasets() {
    std::vector<std::vector<Trajectory>> out;
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<std::size_t> count(20, 80);
    for (std::size_t i = 0; i < kAnonDatasets; ++i) {
        out.push_back(fixtures::random_dataset(rng, count(rng), 1, 10, kWalkGrid));
    }
    return out;
}

struct AnonRun {
    std::size_t dataset = 0;
    std::size_t k = 0;
    std::vector<PublishedRecord> records;
};

Outcome k_anonymity(const std::vector<std::vector<Trajectory>>& data, std::vector<AnonRun>& runs) {
    std::size_t violations = 0;
    std::size_t outputs = 0;
    for (std::size_t d = 0; d < data.size(); ++d) {
        const auto lifted = lift_all(data[d]);
        const auto dist = build_distance_matrix(lifted, kWalkGrid);
        for (std::size_t k : kAnonKs) {
            if (lifted.size() < k) continue;
            for (Algorithm algo : {Algorithm::AdaptiveDbscan, Algorithm::IterativeKMeans}) {
                Groups groups;
                if (algo == Algorithm::AdaptiveDbscan) {
                    DbscanConfig cfg;
                    cfg.k = k;
                    const RunConfig defaults;
                    cfg.quantile_step = defaults.quantile_step;
                    cfg.growth = defaults.epsilon_growth;
                    cfg.basis = defaults.epsilon_basis;
                    cfg.epsilon0 = default_epsilon0(dist, k, cfg.quantile_step, cfg.basis);
                    cfg.top_epsilon = std::max(dist.max_value(), cfg.epsilon0);
                    groups = adaptive_dbscan(dist, cfg).clusters;
                } else {
                    groups = iterative_kmeans(lifted, k, kWalkGrid, d * 31 + k);
                }
                // Partition of the input with every group at least k.
                std::vector<int> seen(lifted.size(), 0);
                for (const auto& g : groups) {
                    violations += g.size() >= k ? 0 : 1;
                    for (std::size_t i : g) ++seen[i];
                }
                for (int s : seen) violations += s == 1 ? 0 : 1;

                const auto gen = generalize_clusters(groups, lifted, kWalkGrid);
                auto records = anonymize(gen.clusters, k, d);
                std::map<std::vector<GenPoint>, std::size_t, std::function<bool(const std::vector<GenPoint>&,
                                                                                 const std::vector<GenPoint>&)>>
                    counts([](const auto& a, const auto& b) {
                        return std::lexicographical_compare(
                            a.begin(), a.end(), b.begin(), b.end(), [](const GenPoint& x, const GenPoint& y) {
                                return std::pair(x.x.value, x.y.value) < std::pair(y.x.value, y.y.value);
                            });
                    });
                for (const auto& r : records) ++counts[r.points];
                for (const auto& [value, c] : counts) violations += c >= k ? 0 : 1;
                violations += records.size() == lifted.size() ? 0 : 1;
                runs.push_back({d, k, std::move(records)});
                ++outputs;
            }
        }
    }
    return {violations == 0,
            std::to_string(outputs) + " anonymized outputs, " + std::to_string(violations) + " violations"};
}

Outcome attack_nullification(const std::vector<std::vector<Trajectory>>& data,
                             const std::vector<AnonRun>& runs) {
    std::size_t nonzero = 0;
    std::size_t evaluations = 0;
    for (const auto& run : runs) {
        for (std::size_t size : kAttackSizes) {
            const auto knowledge = sample_knowledge(data[run.dataset], size, run.dataset * 7 + size);
            const auto r = evaluate(run.records, knowledge);
            nonzero += r.success_rate == 0.0 ? 0 : 1;
            ++evaluations;
        }
    }
    std::size_t not_unique = 0;
    for (std::size_t d = 0; d < data.size(); ++d) {
        std::size_t longest = 0;
        for (const auto& t : data[d]) longest = std::max(longest, t.size());
        const auto full = sample_knowledge(data[d], longest, d);
        not_unique += evaluate(as_records(data[d]), full).success_rate == 1.0 ? 0 : 1;
    }
    return {nonzero == 0 && not_unique == 0,
            std::to_string(evaluations) + " anonymized evaluations with " + std::to_string(nonzero) +
                " non-zero rates; " + std::to_string(data.size()) + " originals with " +
                std::to_string(not_unique) + " rates below 1.0"};
}

Outcome partition_invariants(const std::vector<std::vector<Trajectory>>& data) {
    std::size_t violations = 0;
    std::size_t segments = 0;
    const double d = kDefaultRegion.diagonal() / 64.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
        PartitionConfig cfg;
        cfg.d = d;
        cfg.m = 9;
        cfg.seed = n;
        const auto result = partition(data[n], cfg, kWalkGrid);
        segments += result.segments.size();

        // Densify spacing.
        for (std::size_t t = 0; t < data[n].size(); ++t) {
            const auto& dense = result.densified[t];
            std::size_t prev = 0;
            for (std::size_t i = 1; i < dense.size(); ++i) {
                if (!dense.points[i].is_real) continue;
                const double gap = std::hypot(dense.points[i].lon - dense.points[prev].lon,
                                              dense.points[i].lat - dense.points[prev].lat);
                if (gap > d && i - prev < 2) ++violations;
                if (i - prev >= 2) {
                    for (std::size_t j = prev + 1; j <= i; ++j) {
                        const double step = std::hypot(dense.points[j].lon - dense.points[j - 1].lon,
                                                       dense.points[j].lat - dense.points[j - 1].lat);
                        if (step > d * (1.0 + 1e-9)) ++violations;
                    }
                }
                prev = i;
            }
        }

        // Segments are emitted source by source; user ids are unique per source.
        std::size_t s = 0;
        for (std::size_t t = 0; t < data[n].size(); ++t) {
            const auto& dense = result.densified[t];
            std::vector<TrajPoint> reals;
            std::size_t pos = 0;
            std::size_t pieces = 0;
            while (s < result.segments.size() && result.segments[s].user_id == data[n][t].user_id) {
                const auto& seg = result.segments[s];
                std::set<int> labels;
                for (std::size_t i = 0; i < seg.size(); ++i) {
                    const auto& p = seg.points[i];
                    if (p.is_real) reals.push_back(p);
                    else if (i != 0 && i + 1 != seg.size()) ++violations;
                    while (pos < dense.size() && !(dense.points[pos] == p)) ++pos;
                    if (pos == dense.size()) {
                        ++violations;
                        break;
                    }
                    labels.insert(result.labels[t][pos]);
                    ++pos;
                }
                violations += labels.size() == 1 ? 0 : 1;
                ++pieces;
                ++s;
            }
            violations += reals == data[n][t].points ? 0 : 1;
            violations += pieces >= 1 && pieces <= dense.size() ? 0 : 1;
        }
        violations += s == result.segments.size() ? 0 : 1;
    }
    return {violations == 0,
            std::to_string(segments) + " segments from " + std::to_string(data.size()) + " datasets, " +
                std::to_string(violations) + " violations"};
}

// ---------------------------------------------------------------------------
// 6-7. Road-network corpus.

std::vector<Trajectory> road_corpus(std::uint64_t seed, const Grid& grid) {
    RoadNetworkOptions opts;
    opts.seed = seed;
    return build_dataset(road_network_streams(opts), opts.box, grid);
}

Outcome trends() {
    int a_ok = 0;
    int b_ok = 0;
    int c_ok = 0;
    std::string per_seed;
    for (int seed = 0; seed < kTrendSeeds; ++seed) {
        RunConfig cfg;
        cfg.height = kTrendHeight;
        cfg.d = kDefaultRegion.diagonal() / kTrendSpacingDivisor;
        cfg.seed = static_cast<std::uint64_t>(seed);
        cfg.sample_sizes = {1};
        cfg.threads = 1;
        const Grid grid = make_grid(cfg.bbox, cfg.height);
        const auto data = road_corpus(100 + static_cast<std::uint64_t>(seed), grid);

        bool a = true;
        bool c = true;
        bool b = true;
        double reduction_k2 = 0.0;
        for (std::size_t k : kTrendKs) {
            cfg.k = k;
            cfg.partition = true;
            cfg.algorithm = Algorithm::AdaptiveDbscan;
            const RunReport with = run_dataset(data, cfg).report;
            cfg.partition = false;
            const RunReport without = run_dataset(data, cfg).report;
            const double red = reduction_pct(without.avg_loss_per_cluster, with.avg_loss_per_cluster);
            b = b && with.avg_loss_per_cluster < without.avg_loss_per_cluster;
            if (k == 2) {
                reduction_k2 = red;
                b = b && red >= kTrendMinReductionAtK2;
            }
            if (k <= 4) {
                cfg.partition = true;
                cfg.algorithm = Algorithm::IterativeKMeans;
                const RunReport km = run_dataset(data, cfg).report;
                a = a && with.total_information_loss < km.total_information_loss;
                c = c && with.times.anonymization_s() < km.times.anonymization_s();
                per_seed += " s" + std::to_string(seed) + "k" + std::to_string(k) + "[db " +
                            std::to_string(static_cast<long>(with.total_information_loss)) + "/" +
                            std::to_string(with.times.anonymization_s()).substr(0, 5) + "s km " +
                            std::to_string(static_cast<long>(km.total_information_loss)) + "/" +
                            std::to_string(km.times.anonymization_s()).substr(0, 5) + "s]";
            }
        }
        per_seed += " s" + std::to_string(seed) + " red@k2 " + std::to_string(reduction_k2).substr(0, 5) + "%";
        a_ok += a ? 1 : 0;
        b_ok += b ? 1 : 0;
        c_ok += c ? 1 : 0;
    }
    const bool pass = a_ok >= kTrendSeedsRequired && b_ok >= kTrendSeedsRequired &&
                      c_ok >= kTrendSeedsRequired;
    return {pass, "seeds holding (a) " + std::to_string(a_ok) + "/5, (b) " + std::to_string(b_ok) +
                      "/5, (c) " + std::to_string(c_ok) + "/5;" + per_seed};
}

Outcome segmentation_scale() {
    std::size_t in_band = 0;
    std::string factors;
    for (int seed = 0; seed < kTrendSeeds; ++seed) {
        RunConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(seed);
        const Grid grid = make_grid(cfg.bbox, cfg.height);
        const auto data = road_corpus(100 + static_cast<std::uint64_t>(seed), grid);
        PartitionConfig pc;
        pc.d = default_spacing(cfg.bbox);
        pc.m = 27;
        pc.seed = derive_seed(cfg.seed, Stage::Partition);
        const auto result = partition(data, pc, grid);
        const double factor = static_cast<double>(result.segments.size()) / static_cast<double>(data.size());
        in_band += factor >= kSegmentFactorLo && factor <= kSegmentFactorHi ? 1 : 0;
        factors += " " + std::to_string(data.size()) + "->" + std::to_string(result.segments.size());
    }
    return {in_band == static_cast<std::size_t>(kTrendSeeds),
            std::to_string(in_band) + "/5 corpora in [3, 7]:" + factors};
}

// ---------------------------------------------------------------------------
// 8. dbscan_core against the density-connectivity oracle.

Outcome dbscan_oracle() {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::size_t> count(1, 8);
    std::uniform_int_distribution<std::size_t> len(1, 3);
    std::uniform_int_distribution<std::uint32_t> leaf(8, 15);
    std::uniform_int_distribution<std::size_t> pts(2, 4);
    std::size_t mismatches = 0;
    std::size_t clusters = 0;
    for (std::size_t c = 0; c < kDbscanCases; ++c) {
        const std::size_t n = std::max<std::size_t>(2, count(rng));
        std::vector<GenTrajectory> trajs;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t l = len(rng);
            std::vector<std::uint32_t> xs(l);
            std::vector<std::uint32_t> ys(l);
            for (std::size_t j = 0; j < l; ++j) {
                // Bias toward shared leaves so dense groups occur.
                xs[j] = 8 + (leaf(rng) - 8) / 2;
                ys[j] = 8 + (leaf(rng) - 8) / 2;
            }
            trajs.push_back(from_leaves(xs, ys, static_cast<TrajId>(i)));
        }
        const auto dist = build_distance_matrix(trajs, kGrid3);
        std::vector<std::vector<double>> rows(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) rows[i][j] = oracle::min_alignment_loss(trajs[i], trajs[j], 3, 3);
        }
        std::set<double> radii{0.5};
        for (const auto& r : rows) radii.insert(r.begin(), r.end());
        const std::size_t min_pts = pts(rng);
        for (double eps : radii) {
            const auto got = dbscan_core(dist, eps, min_pts);
            const auto want = oracle::dbscan(rows, eps, min_pts);
            auto as_sets = [](const Groups& g) {
                std::set<std::set<std::size_t>> s;
                for (const auto& c : g) s.insert(std::set<std::size_t>(c.begin(), c.end()));
                return s;
            };
            if (as_sets(got.clusters) != as_sets(want.clusters) ||
                std::set<std::size_t>(got.noise.begin(), got.noise.end()) !=
                    std::set<std::size_t>(want.noise.begin(), want.noise.end())) {
                ++mismatches;
            }
            clusters += got.clusters.size();
        }
    }
    return {mismatches == 0, std::to_string(kDbscanCases) + " matrices, " + std::to_string(clusters) +
                                 " clusters compared, " + std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
    int failures = 0;
    auto run = [&](int id, const char* name, const std::function<Outcome()>& fn,
                   double limit = std::numeric_limits<double>::infinity()) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double s = elapsed(start);
        if (s > limit) {
            o.pass = false;
            o.detail += "; over the time limit";
        }
        report(id, name, o, s);
        failures += o.pass ? 0 : 1;
    };

    run(1, "dsa oracle equivalence", dsa_oracle, kDsaTimeLimitS);
    run(2, "loss-model axioms", loss_axioms);

    const auto data = walk_datasets();
    std::vector<AnonRun> runs;
    run(3, "k-anonymity guarantee", [&] { return k_anonymity(data, runs); });
    run(4, "attack nullification", [&] { return attack_nullification(data, runs); });
    run(5, "partition invariants", [&] { return partition_invariants(data); });
    run(6, "trend reproduction", trends);
    run(7, "segmentation scale", segmentation_scale);
    run(8, "dbscan_core oracle", dbscan_oracle);

    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
