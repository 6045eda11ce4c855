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

#ifndef TRAJKANON_TRAJECTORY_IO_HPP
#define TRAJKANON_TRAJECTORY_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "trajkanon/grid_tree.hpp"
#include "trajkanon/trajectory.hpp"

namespace trajkanon {

/// Parses a Geolife .plt file: six header lines, then rows of
/// "lat,lon,flag,altitude,days,date,time". Throws EmptyTrajectoryError when
/// there are no data rows and ParseError on a malformed field.
std::vector<RawPoint> parse_plt(std::string_view contents);

struct TaxiRow {
    std::int64_t taxi_id = 0;
    RawPoint point;

    bool operator==(const TaxiRow&) const = default;
};

/// Parses a T-Drive style log of "id,YYYY-MM-DD HH:MM:SS,lon,lat" rows.
std::vector<TaxiRow> parse_taxi_log(std::string_view contents);

/// One contiguous run of fixes from a single user (e.g. one .plt file).
struct PointStream {
    std::string user_id;
    std::vector<RawPoint> points;
};

/// Groups taxi rows into one stream per taxi id, in first-seen order.
std::vector<PointStream> group_taxi_rows(const std::vector<TaxiRow>& rows);

/// Cuts every stream at each excursion outside `box`, quantizes the kept
/// points and drops pieces shorter than `min_len`. Ids are assigned
/// sequentially from `first_id`.
std::vector<Trajectory> build_dataset(const std::vector<PointStream>& streams,
                                      const BoundingBox& box, const Grid& grid,
                                      std::size_t min_len = 2, TrajId first_id = 0);

/// Canonical interchange CSV: "traj_id,user_id,seq,lon,lat,is_real".
void write_trajectories_csv(std::ostream& out, const std::vector<Trajectory>& trajs);
std::string trajectories_to_csv(const std::vector<Trajectory>& trajs);

/// Reads the canonical CSV back, re-deriving leaves from the coordinates.
/// Rows of one traj_id must be contiguous and in seq order.
std::vector<Trajectory> read_trajectories_csv(std::string_view contents, const Grid& grid);

/// Streams for the pipeline's "csv" input format: one stream per traj_id.
std::vector<PointStream> streams_from_csv(std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Loads every .plt under `root`. The user id is the directory holding the
/// Trajectory/ folder when present (Geolife layout), else the parent folder.
std::vector<PointStream> load_plt_dir(const std::filesystem::path& root);

/// Loads a taxi log file, or every file in a directory of them.
std::vector<PointStream> load_taxi_logs(const std::filesystem::path& path);

}  // namespace trajkanon

#endif  // TRAJKANON_TRAJECTORY_IO_HPP
