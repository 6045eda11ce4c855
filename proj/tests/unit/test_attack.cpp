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

#include <doctest.h>

#include <json.hpp>
#include <random>

#include "oracles.hpp"
#include "trajkanon/attack.hpp"
#include "trajkanon/error.hpp"

using namespace trajkanon;

namespace {

const Grid kGrid3 = make_grid(BoundingBox{0.0, 8.0, 0.0, 8.0}, 3);

std::vector<GenPoint> nodes(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> pts) {
    return fixtures::gen(pts).points;
}

std::vector<LeafPair> leaves(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> pts) {
    std::vector<LeafPair> out;
    for (const auto& [x, y] : pts) out.push_back({NodeId{x}, NodeId{y}});
    return out;
}

Trajectory walk(TrajId id, std::initializer_list<std::pair<double, double>> pts) {
    Trajectory t{id, "user" + std::to_string(id), {}};
    for (const auto& [x, y] : pts) t.points.push_back(make_point(kGrid3, x, y));
    return t;
}

}  // namespace

TEST_CASE("matches examples") {
    CHECK(matches(nodes({{1, 1}, {1, 1}}), leaves({{8, 9}, {15, 15}})));
    CHECK(matches(nodes({{1, 1}, {1, 1}}), leaves({{8, 9}})));
    CHECK_FALSE(matches(nodes({{6, 6}, {7, 7}}), leaves({{8, 8}})));
    CHECK_FALSE(matches(nodes({{1, 1}}), leaves({{8, 8}, {9, 9}})));
    CHECK(matches(nodes({{6, 6}, {7, 7}}), leaves({{12, 13}, {15, 14}})));
    CHECK_FALSE(matches(nodes({{6, 6}, {7, 7}}), leaves({{15, 14}, {12, 13}})));
    CHECK(matches(nodes({{6, 6}}), {}));
    // Needs both axes covered.
    CHECK_FALSE(matches(nodes({{6, 7}}), leaves({{12, 12}})));
}

TEST_CASE("greedy matching agrees with exhaustive search") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::size_t> len(0, 6);
    std::uniform_int_distribution<std::uint32_t> node(1, 15);
    std::uniform_int_distribution<std::uint32_t> leaf(8, 15);
    for (int round = 0; round < 3000; ++round) {
        std::vector<GenPoint> record(len(rng));
        for (auto& p : record) p = {NodeId{node(rng)}, NodeId{node(rng)}};
        std::vector<LeafPair> observed(len(rng));
        for (auto& p : observed) p = {NodeId{leaf(rng)}, NodeId{leaf(rng)}};
        CHECK(matches(record, observed) == oracle::embeds(record, observed));
    }
}

TEST_CASE("sample_knowledge") {
    const std::vector<Trajectory> data{walk(0, {{0.5, 0.5}, {1.5, 1.5}, {2.5, 2.5}, {3.5, 3.5}}),
                                       walk(1, {{7.5, 7.5}, {6.5, 6.5}})};
    auto k = sample_knowledge(data, 10, 3);
    REQUIRE(k.observations.size() == 2);
    CHECK(k.observations[0].points.size() == 4);
    CHECK(k.observations[0].points[2] == LeafPair{data[0].points[2].x_leaf, data[0].points[2].y_leaf});
    CHECK(k.observations[1].user_id == "user1");

    k = sample_knowledge(data, 1, 3);
    CHECK(k.observations[0].points.size() == 1);
    CHECK(k.observations[1].points.size() == 1);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = sample_knowledge(data, 3, seed);
        const auto b = sample_knowledge(data, 3, seed);
        CHECK(a.observations[0].points == b.observations[0].points);
        // Order-preserving: the sample embeds into the source.
        CHECK(oracle::embeds(lift(data[0]).points, a.observations[0].points));
    }

    Trajectory mixed = walk(2, {{0.5, 0.5}, {1.5, 1.5}, {2.5, 2.5}});
    mixed.points[1].is_real = false;
    k = sample_knowledge({mixed}, 5, 0);
    CHECK(k.observations[0].points.size() == 2);

    CHECK_THROWS_AS(sample_knowledge(data, 0, 0), ConfigError);
}

TEST_CASE("evaluate") {
    const std::vector<Trajectory> data{walk(0, {{0.5, 0.5}, {1.5, 1.5}}),
                                       walk(1, {{7.5, 7.5}, {6.5, 6.5}}),
                                       walk(2, {{0.5, 0.5}, {4.5, 1.5}})};
    const auto full = sample_knowledge(data, 10, 0);
    auto report = evaluate(as_records(data), full);
    CHECK(report.success_rate == 1.0);
    CHECK(report.success_count == 3);

    // Everything published as one fully generalized group of three.
    std::vector<PublishedRecord> hidden;
    for (std::int64_t i = 0; i < 3; ++i) hidden.push_back({i, nodes({{1, 1}, {1, 1}})});
    report = evaluate(hidden, full);
    CHECK(report.success_rate == 0.0);
    CHECK(report.per_user[0].matching_records == 2);

    report = evaluate({}, full);
    CHECK(report.success_rate == 0.0);
    for (const auto& o : report.per_user) {
        CHECK(o.matching_records == 0);
        CHECK_FALSE(o.reidentified);
    }

    const auto one = sample_knowledge(data, 1, 0);
    report = evaluate(as_records(data), one);
    CHECK(report.per_user.size() == 3);
    CHECK(report.success_rate == static_cast<double>(report.success_count) / 3.0);

    const auto j = nlohmann::json::parse(attack_report_json(report, 2, one));
    CHECK(j["k"] == 2);
    CHECK(j["sample_size"] == 1);
    CHECK(j["seed"] == 0);
    CHECK(j["per_user"].size() == 3);
    CHECK(j["success_rate"].get<double>() == report.success_rate);
}
