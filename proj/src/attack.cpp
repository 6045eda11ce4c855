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

#include "trajkanon/attack.hpp"

#include <algorithm>
#include <iterator>
#include <random>

#include <json.hpp>

#include "trajkanon/error.hpp"
#include "trajkanon/parallel.hpp"

namespace trajkanon {

AttackKnowledge sample_knowledge(const std::vector<Trajectory>& dataset, std::size_t sample_size,
                                 std::uint64_t seed) {
    if (sample_size < 1) throw ConfigError("attack sample size must be >= 1");
    AttackKnowledge knowledge{sample_size, seed, {}};
    knowledge.observations.reserve(dataset.size());
    std::mt19937_64 rng(seed);

    for (const auto& t : dataset) {
        std::vector<LeafPair> real;
        for (const auto& p : t.points) {
            if (p.is_real) real.push_back(LeafPair{p.x_leaf, p.y_leaf});
        }
        Observation obs{t.id, t.user_id, {}};
        // std::sample is stable for forward iterators, so time order survives.
        std::sample(real.begin(), real.end(), std::back_inserter(obs.points), sample_size, rng);
        knowledge.observations.push_back(std::move(obs));
    }
    return knowledge;
}

bool matches(std::span<const GenPoint> record, std::span<const LeafPair> observed) {
    std::size_t pos = 0;
    for (const auto& leaf : observed) {
        while (pos < record.size() && !(is_ancestor_or_self(record[pos].x, leaf.x) &&
                                        is_ancestor_or_self(record[pos].y, leaf.y))) {
            ++pos;
        }
        if (pos == record.size()) return false;
        ++pos;
    }
    return true;
}

AttackReport evaluate(const std::vector<PublishedRecord>& records, const AttackKnowledge& knowledge,
                      int threads) {
    AttackReport report;
    const auto& obs = knowledge.observations;
    report.per_user.resize(obs.size());
    parallel_for(obs.size(), threads, [&](std::size_t u) {
        AttackOutcome& out = report.per_user[u];
        out.traj_id = obs[u].traj_id;
        out.user_id = obs[u].user_id;
        for (const auto& r : records) {
            if (matches(r.points, obs[u].points) && ++out.matching_records == 2) break;
        }
        out.reidentified = out.matching_records == 1;
    });
    report.success_count = static_cast<std::size_t>(std::count_if(
        report.per_user.begin(), report.per_user.end(), [](const auto& o) { return o.reidentified; }));
    report.success_rate = report.per_user.empty()
                              ? 0.0
                              : static_cast<double>(report.success_count) /
                                    static_cast<double>(report.per_user.size());
    return report;
}

std::vector<PublishedRecord> as_records(const std::vector<Trajectory>& dataset) {
    std::vector<PublishedRecord> out;
    out.reserve(dataset.size());
    for (const auto& t : dataset) out.push_back(PublishedRecord{t.id, lift(t).points});
    return out;
}

std::string attack_report_json(const AttackReport& report, std::size_t k,
                               const AttackKnowledge& knowledge) {
    nlohmann::json per_user = nlohmann::json::array();
    for (const auto& o : report.per_user) {
        per_user.push_back({{"traj_id", o.traj_id},
                            {"user_id", o.user_id},
                            {"matching_records", o.matching_records},
                            {"c", o.reidentified ? 1 : 0}});
    }
    nlohmann::json j = {{"k", k},
                        {"sample_size", knowledge.sample_size},
                        {"seed", knowledge.seed},
                        {"success_rate", report.success_rate},
                        {"per_user", std::move(per_user)}};
    return j.dump(2);
}

}  // namespace trajkanon
