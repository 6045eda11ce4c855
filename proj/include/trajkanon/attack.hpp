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

#ifndef TRAJKANON_ATTACK_HPP
#define TRAJKANON_ATTACK_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trajkanon/alignment.hpp"
#include "trajkanon/clustering.hpp"
#include "trajkanon/trajectory.hpp"

namespace trajkanon {

/// An observed fix, as leaves on both axes.
struct LeafPair {
    NodeId x;
    NodeId y;

    bool operator==(const LeafPair&) const = default;
};

/// What the adversary knows about one target trajectory.
struct Observation {
    TrajId traj_id = 0;
    std::string user_id;
    std::vector<LeafPair> points;
};

struct AttackKnowledge {
    std::size_t sample_size = 1;
    std::uint64_t seed = 0;
    std::vector<Observation> observations;
};

/// Draws, for every trajectory, an order-preserving uniform sample of
/// min(sample_size, #real points) of its real points.
AttackKnowledge sample_knowledge(const std::vector<Trajectory>& dataset, std::size_t sample_size,
                                 std::uint64_t seed);

/// True iff the observations embed, in order, into positions of `record`
/// whose nodes are ancestors-or-self of the observed leaves on both axes.
/// Greedy leftmost matching decides this exactly.
bool matches(std::span<const GenPoint> record, std::span<const LeafPair> observed);

struct AttackOutcome {
    TrajId traj_id = 0;
    std::string user_id;
    std::size_t matching_records = 0;  // capped at 2: only uniqueness matters
    bool reidentified = false;
};

struct AttackReport {
    std::vector<AttackOutcome> per_user;
    std::size_t success_count = 0;
    double success_rate = 0.0;
};

/// A target is re-identified iff exactly one record matches its observations.
AttackReport evaluate(const std::vector<PublishedRecord>& records, const AttackKnowledge& knowledge,
                      int threads = 0);

/// Views an un-anonymized dataset as publishable records (pseudonym = id).
std::vector<PublishedRecord> as_records(const std::vector<Trajectory>& dataset);

/// {"k", "sample_size", "seed", "success_rate", "per_user": [...]}.
std::string attack_report_json(const AttackReport& report, std::size_t k,
                               const AttackKnowledge& knowledge);

}  // namespace trajkanon

#endif  // TRAJKANON_ATTACK_HPP
