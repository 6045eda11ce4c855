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

#include "trajkanon/trajectory_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <type_traits>
#include <sstream>
#include <system_error>
#include <unordered_map>

#include "trajkanon/error.hpp"

namespace trajkanon {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',') {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t end = line.find(sep, start);
        if (end == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, end - start));
        start = end + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* what) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(line, std::string("malformed ") + what + " '" + std::string(field) + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            throw ParseError(line, std::string("non-finite ") + what);
        }
    }
    return value;
}

// "YYYY-MM-DD" and "HH:MM:SS" to seconds since the Unix epoch (UTC).
std::int64_t parse_timestamp(std::string_view date, std::string_view time, std::size_t line) {
    date = trim(date);
    time = trim(time);
    const auto d = split_fields(date, '-');
    const auto t = split_fields(time, ':');
    if (d.size() != 3 || t.size() != 3) {
        throw ParseError(line, "malformed date/time '" + std::string(date) + " " +
                                   std::string(time) + "'");
    }
    const int year = parse_number<int>(d[0], line, "year");
    const unsigned month = parse_number<unsigned>(d[1], line, "month");
    const unsigned day = parse_number<unsigned>(d[2], line, "day");
    const int hh = parse_number<int>(t[0], line, "hour");
    const int mm = parse_number<int>(t[1], line, "minute");
    const int ss = parse_number<int>(t[2], line, "second");
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok() || hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0 || ss > 60) {
        throw ParseError(line, "invalid date/time");
    }
    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

constexpr std::string_view kCsvHeader = "traj_id,user_id,seq,lon,lat,is_real";

struct CsvRow {
    TrajId traj_id;
    std::string user_id;
    std::size_t seq;
    double lon;
    double lat;
    bool is_real;
};

std::vector<CsvRow> parse_canonical_rows(std::string_view contents) {
    const auto lines = split_lines(contents);
    if (lines.empty() || trim(lines[0]) != kCsvHeader) {
        throw ParseError(1, "expected header '" + std::string(kCsvHeader) + "'");
    }
    std::vector<CsvRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (is_blank(lines[i])) continue;
        const auto f = split_fields(lines[i]);
        if (f.size() != 6) throw ParseError(lineno, "expected 6 fields");
        CsvRow row;
        row.traj_id = parse_number<TrajId>(f[0], lineno, "traj_id");
        row.user_id = std::string(f[1]);
        row.seq = parse_number<std::size_t>(f[2], lineno, "seq");
        row.lon = parse_number<double>(f[3], lineno, "lon");
        row.lat = parse_number<double>(f[4], lineno, "lat");
        const int flag = parse_number<int>(f[5], lineno, "is_real");
        if (flag != 0 && flag != 1) throw ParseError(lineno, "is_real must be 0 or 1");
        row.is_real = flag == 1;
        if (!rows.empty() && rows.back().traj_id == row.traj_id) {
            if (row.seq != rows.back().seq + 1) throw ParseError(lineno, "seq out of order");
        } else if (row.seq != 0) {
            throw ParseError(lineno, "trajectory must start at seq 0");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TrajPoint make_point(const Grid& grid, double lon, double lat, bool is_real) {
    return TrajPoint{grid.lon.leaf_of(lon), grid.lat.leaf_of(lat), lon, lat, is_real};
}

std::vector<RawPoint> parse_plt(std::string_view contents) {
    constexpr std::size_t kHeaderLines = 6;
    auto lines = split_lines(contents);
    while (!lines.empty() && is_blank(lines.back())) lines.pop_back();
    if (lines.size() <= kHeaderLines) {
        throw EmptyTrajectoryError("plt file has no data rows");
    }
    std::vector<RawPoint> points;
    points.reserve(lines.size() - kHeaderLines);
    for (std::size_t i = kHeaderLines; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (is_blank(lines[i])) continue;
        const auto f = split_fields(lines[i]);
        if (f.size() < 7) throw ParseError(lineno, "expected 7 fields");
        RawPoint p;
        p.lat = parse_number<double>(f[0], lineno, "latitude");
        p.lon = parse_number<double>(f[1], lineno, "longitude");
        p.timestamp = parse_timestamp(f[5], f[6], lineno);
        points.push_back(p);
    }
    if (points.empty()) throw EmptyTrajectoryError("plt file has no data rows");
    return points;
}

std::vector<TaxiRow> parse_taxi_log(std::string_view contents) {
    std::vector<TaxiRow> rows;
    const auto lines = split_lines(contents);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (is_blank(lines[i])) continue;
        const auto f = split_fields(lines[i]);
        if (f.size() != 4) throw ParseError(lineno, "expected 4 fields 'id,datetime,lon,lat'");
        const auto dt = split_fields(trim(f[1]), ' ');
        if (dt.size() != 2) throw ParseError(lineno, "malformed datetime");
        TaxiRow row;
        row.taxi_id = parse_number<std::int64_t>(f[0], lineno, "taxi id");
        row.point.timestamp = parse_timestamp(dt[0], dt[1], lineno);
        row.point.lon = parse_number<double>(f[2], lineno, "longitude");
        row.point.lat = parse_number<double>(f[3], lineno, "latitude");
        rows.push_back(row);
    }
    return rows;
}

std::vector<PointStream> group_taxi_rows(const std::vector<TaxiRow>& rows) {
    std::vector<PointStream> streams;
    std::unordered_map<std::int64_t, std::size_t> slot;
    for (const auto& row : rows) {
        auto [it, inserted] = slot.try_emplace(row.taxi_id, streams.size());
        if (inserted) streams.push_back(PointStream{std::to_string(row.taxi_id), {}});
        streams[it->second].points.push_back(row.point);
    }
    return streams;
}

std::vector<Trajectory> build_dataset(const std::vector<PointStream>& streams,
                                      const BoundingBox& box, const Grid& grid,
                                      std::size_t min_len, TrajId first_id) {
    box.validate();
    min_len = std::max<std::size_t>(min_len, 1);
    std::vector<Trajectory> out;
    TrajId next_id = first_id;

    for (const auto& stream : streams) {
        std::vector<RawPoint> pts = stream.points;
        std::stable_sort(pts.begin(), pts.end(), [](const RawPoint& a, const RawPoint& b) {
            return a.timestamp < b.timestamp;
        });

        Trajectory current{0, stream.user_id, {}};
        auto flush = [&] {
            if (current.points.size() >= min_len) {
                current.id = next_id++;
                out.push_back(std::move(current));
            }
            current = Trajectory{0, stream.user_id, {}};
        };
        for (const auto& p : pts) {
            const bool inside = std::isfinite(p.lon) && std::isfinite(p.lat) &&
                                box.contains(p.lon, p.lat) && grid.lon.contains_value(p.lon) &&
                                grid.lat.contains_value(p.lat);
            if (inside) {
                current.points.push_back(make_point(grid, p.lon, p.lat, true));
            } else {
                flush();
            }
        }
        flush();
    }
    return out;
}

void write_trajectories_csv(std::ostream& out, const std::vector<Trajectory>& trajs) {
    out << kCsvHeader << '\n';
    for (const auto& t : trajs) {
        if (t.user_id.find_first_of(",\n\r") != std::string::npos) {
            throw DomainError("user id '" + t.user_id + "' cannot be written to CSV");
        }
        for (std::size_t i = 0; i < t.points.size(); ++i) {
            const auto& p = t.points[i];
            out << t.id << ',' << t.user_id << ',' << i << ',' << format_double(p.lon) << ','
                << format_double(p.lat) << ',' << (p.is_real ? 1 : 0) << '\n';
        }
    }
}

std::string trajectories_to_csv(const std::vector<Trajectory>& trajs) {
    std::ostringstream out;
    write_trajectories_csv(out, trajs);
    return out.str();
}

std::vector<Trajectory> read_trajectories_csv(std::string_view contents, const Grid& grid) {
    std::vector<Trajectory> trajs;
    for (auto& row : parse_canonical_rows(contents)) {
        if (trajs.empty() || trajs.back().id != row.traj_id) {
            trajs.push_back(Trajectory{row.traj_id, row.user_id, {}});
        }
        trajs.back().points.push_back(make_point(grid, row.lon, row.lat, row.is_real));
    }
    return trajs;
}

std::vector<PointStream> streams_from_csv(std::string_view contents) {
    std::vector<PointStream> streams;
    TrajId last = 0;
    for (auto& row : parse_canonical_rows(contents)) {
        if (streams.empty() || last != row.traj_id) {
            streams.push_back(PointStream{row.user_id, {}});
            last = row.traj_id;
        }
        auto& pts = streams.back().points;
        pts.push_back(RawPoint{row.lat, row.lon, static_cast<std::int64_t>(pts.size())});
    }
    return streams;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<PointStream> load_plt_dir(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw Error(root.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().extension() == ".plt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<PointStream> streams;
    for (const auto& file : files) {
        fs::path parent = file.parent_path();
        if (parent.filename() == "Trajectory") parent = parent.parent_path();
        try {
            streams.push_back(PointStream{parent.filename().string(), parse_plt(read_file(file))});
        } catch (const EmptyTrajectoryError&) {
            continue;
        } catch (const ParseError& e) {
            throw Error(file.string() + ": " + e.what());
        }
    }
    return streams;
}

std::vector<PointStream> load_taxi_logs(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(path);
    }
    std::vector<TaxiRow> rows;
    for (const auto& file : files) {
        try {
            auto part = parse_taxi_log(read_file(file));
            rows.insert(rows.end(), part.begin(), part.end());
        } catch (const ParseError& e) {
            throw Error(file.string() + ": " + e.what());
        }
    }
    return group_taxi_rows(rows);
}

}  // namespace trajkanon
