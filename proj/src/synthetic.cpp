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

#include "trajkanon/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "trajkanon/error.hpp"

namespace trajkanon {

namespace {

std::vector<double> road_positions(double lo, double hi, int count, std::mt19937_64& rng) {
    const double margin = (hi - lo) * 0.04;
    const double span = (hi - lo) - 2.0 * margin;
    const double spacing = span / (count - 1);
    std::uniform_real_distribution<double> jitter(-0.2 * spacing, 0.2 * spacing);
    std::vector<double> pos(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        double p = lo + margin + spacing * i;
        if (i > 0 && i + 1 < count) p += jitter(rng);
        pos[static_cast<std::size_t>(i)] = p;
    }
    return pos;
}

// Direction indices: 0 east, 1 north, 2 west, 3 south.
constexpr std::array<int, 4> kDx{1, 0, -1, 0};
constexpr std::array<int, 4> kDy{0, 1, 0, -1};

}  // namespace

std::vector<PointStream> road_network_streams(const RoadNetworkOptions& opts) {
    opts.box.validate();
    if (opts.avenues < 2 || opts.streets < 2) throw ConfigError("need at least a 2x2 road grid");
    if (!(opts.min_path > 0.0) || opts.max_path < opts.min_path || !(opts.min_step > 0.0) ||
        opts.max_step < opts.min_step) {
        throw ConfigError("invalid path or step range");
    }

    std::mt19937_64 rng(opts.seed);
    const auto xs = road_positions(opts.box.lon_min, opts.box.lon_max, opts.avenues, rng);
    const auto ys = road_positions(opts.box.lat_min, opts.box.lat_max, opts.streets, rng);

    // Busy roads attract more trips; popularity is heavy tailed.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto popularity = [&](std::size_t n) {
        std::vector<double> w(n);
        for (auto& v : w) v = 1.0 + 4.0 * std::pow(unit(rng), 3.0);
        return w;
    };
    const auto avenue_weight = popularity(xs.size());
    const auto street_weight = popularity(ys.size());

    std::discrete_distribution<int> pick_avenue(avenue_weight.begin(), avenue_weight.end());
    std::discrete_distribution<int> pick_street(street_weight.begin(), street_weight.end());
    std::normal_distribution<double> noise(0.0, opts.noise);
    const double log_min = std::log(opts.min_path);
    const double log_max = std::log(opts.max_path);

    const int nx = opts.avenues;
    const int ny = opts.streets;
    auto valid_dirs = [&](int ix, int iy) {
        std::vector<int> dirs;
        for (int d = 0; d < 4; ++d) {
            const int jx = ix + kDx[d];
            const int jy = iy + kDy[d];
            if (jx >= 0 && jx < nx && jy >= 0 && jy < ny) dirs.push_back(d);
        }
        return dirs;
    };

    const std::size_t users = std::max<std::size_t>(1, opts.trips / 3);
    std::vector<PointStream> streams;
    streams.reserve(opts.trips);
    for (std::size_t trip = 0; trip < opts.trips; ++trip) {
        PointStream stream{"user-" + std::to_string(trip % users), {}};
        int ix = pick_avenue(rng);
        int iy = pick_street(rng);
        auto dirs = valid_dirs(ix, iy);
        int dir = dirs[std::uniform_int_distribution<std::size_t>(0, dirs.size() - 1)(rng)];

        double budget = std::exp(log_min + (log_max - log_min) * unit(rng));
        const double step = opts.min_step + (opts.max_step - opts.min_step) * unit(rng);
        double until_fix = 0.0;
        std::int64_t clock = 1'200'000'000 + static_cast<std::int64_t>(trip) * 10'000;

        while (budget > 0.0) {
            const int jx = ix + kDx[static_cast<std::size_t>(dir)];
            const int jy = iy + kDy[static_cast<std::size_t>(dir)];
            const double ax = xs[static_cast<std::size_t>(ix)];
            const double ay = ys[static_cast<std::size_t>(iy)];
            const double bx = xs[static_cast<std::size_t>(jx)];
            const double by = ys[static_cast<std::size_t>(jy)];
            const double length = std::hypot(bx - ax, by - ay);

            double along = until_fix;
            while (along < length && along < budget) {
                const double s = along / length;
                RawPoint p;
                p.lon = std::clamp(ax + (bx - ax) * s + noise(rng), opts.box.lon_min, opts.box.lon_max);
                p.lat = std::clamp(ay + (by - ay) * s + noise(rng), opts.box.lat_min, opts.box.lat_max);
                p.timestamp = clock;
                clock += 5;
                stream.points.push_back(p);
                along += step * (0.8 + 0.4 * unit(rng));
            }
            if (budget <= length) break;
            budget -= length;
            until_fix = along - length;
            ix = jx;
            iy = jy;

            // Keep going straight unless a turn is drawn or the road ends.
            auto options = valid_dirs(ix, iy);
            const int back = (dir + 2) % 4;
            std::erase(options, back);
            const bool can_continue = std::find(options.begin(), options.end(), dir) != options.end();
            if (options.empty()) {
                dir = back;
            } else if (!can_continue || unit(rng) < opts.turn_probability) {
                std::erase(options, dir);
                if (options.empty()) continue;
                std::vector<double> w;
                for (int d : options) {
                    w.push_back(d % 2 == 0 ? street_weight[static_cast<std::size_t>(iy)]
                                           : avenue_weight[static_cast<std::size_t>(ix)]);
                }
                std::discrete_distribution<std::size_t> turn(w.begin(), w.end());
                dir = options[turn(rng)];
            }
        }
        streams.push_back(std::move(stream));
    }
    return streams;
}

}  // namespace trajkanon
