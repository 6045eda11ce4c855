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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "trajkanon/alignment.hpp"
#include "trajkanon/attack.hpp"
#include "trajkanon/clustering.hpp"
#include "trajkanon/error.hpp"
#include "trajkanon/grid_tree.hpp"
#include "trajkanon/partition.hpp"
#include "trajkanon/pipeline.hpp"
#include "trajkanon/synthetic.hpp"
#include "trajkanon/trajectory_io.hpp"

namespace py = pybind11;
using namespace trajkanon;

namespace {

// Node ids cross the boundary as plain ints.
std::vector<std::pair<std::uint32_t, std::uint32_t>> to_pairs(const std::vector<GenPoint>& pts) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.emplace_back(p.x.value, p.y.value);
    return out;
}

GenTrajectory from_pairs(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pts,
                         std::vector<TrajId> ids) {
    GenTrajectory t;
    for (const auto& [x, y] : pts) t.points.push_back({NodeId{x}, NodeId{y}});
    t.member_ids = std::move(ids);
    return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Trajectory k-anonymization core";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    auto domain = py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<OutOfBoundsError>(m, "OutOfBoundsError", domain.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<EmptyTrajectoryError>(m, "EmptyTrajectoryError", error.ptr());
    py::register_exception<InfeasibleError>(m, "InfeasibleError", error.ptr());
    py::register_exception<AnonymityViolation>(m, "AnonymityViolation", error.ptr());
    py::register_exception<StageError>(m, "StageError", error.ptr());

    py::class_<GridTree>(m, "GridTree")
        .def(py::init<double, double, int>(), py::arg("axis_min"), py::arg("axis_max"), py::arg("height"))
        .def_property_readonly("height", &GridTree::height)
        .def_property_readonly("leaf_count", &GridTree::leaf_count)
        .def_property_readonly("leaf_width", &GridTree::leaf_width)
        .def("leaf_of", [](const GridTree& t, double v) { return t.leaf_of(v).value; })
        .def("lf", [](const GridTree& t, std::uint32_t n) { return t.lf(NodeId{n}); })
        .def("lca", [](const GridTree& t, std::uint32_t a, std::uint32_t b) {
            return t.lca(NodeId{a}, NodeId{b}).value;
        })
        .def("loss_single", [](const GridTree& t, std::uint32_t anc, std::uint32_t n) {
            return t.loss_single(NodeId{anc}, NodeId{n});
        })
        .def("loss_suppress", &GridTree::loss_suppress)
        .def("loss_pair", [](const GridTree& t, std::uint32_t a, std::uint32_t b) {
            const PairLoss p = t.loss_pair(NodeId{a}, NodeId{b});
            return py::make_tuple(p.loss, p.lca.value);
        })
        .def("bounds", [](const GridTree& t, std::uint32_t n) {
            const Interval i = t.bounds(NodeId{n});
            return py::make_tuple(i.lo, i.hi);
        });

    py::class_<BoundingBox>(m, "BoundingBox")
        .def(py::init<double, double, double, double>(), py::arg("lon_min"), py::arg("lon_max"),
             py::arg("lat_min"), py::arg("lat_max"))
        .def_readwrite("lon_min", &BoundingBox::lon_min)
        .def_readwrite("lon_max", &BoundingBox::lon_max)
        .def_readwrite("lat_min", &BoundingBox::lat_min)
        .def_readwrite("lat_max", &BoundingBox::lat_max)
        .def("diagonal", &BoundingBox::diagonal);
    m.attr("DEFAULT_REGION") = kDefaultRegion;

    py::class_<Grid>(m, "Grid")
        .def(py::init([](const BoundingBox& box, int height) { return make_grid(box, height); }),
             py::arg("box"), py::arg("height") = kDefaultHeight)
        .def_readonly("lon", &Grid::lon)
        .def_readonly("lat", &Grid::lat);

    py::class_<TrajPoint>(m, "TrajPoint")
        .def_property_readonly("x_leaf", [](const TrajPoint& p) { return p.x_leaf.value; })
        .def_property_readonly("y_leaf", [](const TrajPoint& p) { return p.y_leaf.value; })
        .def_readonly("lon", &TrajPoint::lon)
        .def_readonly("lat", &TrajPoint::lat)
        .def_readonly("is_real", &TrajPoint::is_real);

    py::class_<Trajectory>(m, "Trajectory")
        .def(py::init([](const Grid& grid, TrajId id, std::string user,
                         const std::vector<std::pair<double, double>>& lonlat) {
                 Trajectory t{id, std::move(user), {}};
                 for (const auto& [lon, lat] : lonlat) t.points.push_back(make_point(grid, lon, lat));
                 return t;
             }),
             py::arg("grid"), py::arg("id"), py::arg("user_id"), py::arg("points"))
        .def_readonly("id", &Trajectory::id)
        .def_readonly("user_id", &Trajectory::user_id)
        .def_readonly("points", &Trajectory::points)
        .def("__len__", &Trajectory::size);

    m.def("read_trajectories_csv", &read_trajectories_csv, py::arg("contents"), py::arg("grid"));
    m.def("trajectories_to_csv", &trajectories_to_csv, py::arg("trajectories"));
    m.def(
        "synthetic_dataset",
        [](const Grid& grid, std::size_t trips, std::uint64_t seed, const BoundingBox& box) {
            RoadNetworkOptions opts;
            opts.box = box;
            opts.trips = trips;
            opts.seed = seed;
            return build_dataset(road_network_streams(opts), box, grid);
        },
        py::arg("grid"), py::arg("trips") = 270, py::arg("seed") = 0, py::arg("box") = kDefaultRegion);

    m.def(
        "dsa",
        [](const std::vector<std::pair<std::uint32_t, std::uint32_t>>& p,
           const std::vector<std::pair<std::uint32_t, std::uint32_t>>& q, const Grid& grid) {
            const AlignmentResult r = dsa(from_pairs(p, {0}), from_pairs(q, {1}), grid);
            return py::make_tuple(r.loss, to_pairs(r.merged.points));
        },
        py::arg("p"), py::arg("q"), py::arg("grid"),
        "Minimum alignment loss and merged node pairs of two node-pair sequences.");
    m.def(
        "psa",
        [](const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& members,
           const Grid& grid) {
            std::vector<GenTrajectory> gen;
            for (std::size_t i = 0; i < members.size(); ++i) {
                gen.push_back(from_pairs(members[i], {static_cast<TrajId>(i)}));
            }
            const PsaResult r = psa(gen, grid);
            return py::make_tuple(r.loss, to_pairs(r.merged.points));
        },
        py::arg("members"), py::arg("grid"));
    m.def(
        "distance",
        [](const Trajectory& p, const Trajectory& q, const Grid& grid) {
            return pairwise_distance(p, q, grid);
        },
        py::arg("p"), py::arg("q"), py::arg("grid"));

    m.def(
        "partition",
        [](const std::vector<Trajectory>& trajs, const Grid& grid, double d, int m_clusters,
           std::uint64_t seed) {
            PartitionConfig cfg;
            cfg.d = d;
            cfg.m = m_clusters;
            cfg.seed = seed;
            return partition(trajs, cfg, grid).segments;
        },
        py::arg("trajectories"), py::arg("grid"), py::arg("d"), py::arg("m") = 27, py::arg("seed") = 0);

    m.def(
        "adaptive_dbscan",
        [](const std::vector<Trajectory>& trajs, const Grid& grid, std::size_t k) {
            const DistanceMatrix dist = build_distance_matrix(lift_all(trajs), grid);
            DbscanConfig cfg;
            cfg.k = k;
            const RunConfig defaults;
            cfg.quantile_step = defaults.quantile_step;
            cfg.growth = defaults.epsilon_growth;
            cfg.basis = defaults.epsilon_basis;
            cfg.epsilon0 = default_epsilon0(dist, k, cfg.quantile_step, cfg.basis);
            cfg.top_epsilon = std::max(dist.max_value(), cfg.epsilon0);
            const AdaptiveDbscanResult r = adaptive_dbscan(dist, cfg);
            return py::make_tuple(r.clusters, r.epsilons);
        },
        py::arg("trajectories"), py::arg("grid"), py::arg("k"),
        "Groups of trajectory positions, and the radii used per round.");
    m.def(
        "iterative_kmeans",
        [](const std::vector<Trajectory>& trajs, const Grid& grid, std::size_t k, std::uint64_t seed) {
            return iterative_kmeans(lift_all(trajs), k, grid, seed);
        },
        py::arg("trajectories"), py::arg("grid"), py::arg("k"), py::arg("seed") = 0);

    m.def(
        "run",
        [](const std::vector<Trajectory>& trajs, std::size_t k, const std::string& algorithm,
           bool partition, std::uint64_t seed, int height, std::vector<std::size_t> sample_sizes) {
            RunConfig cfg;
            cfg.k = k;
            cfg.algorithm = parse_algorithm(algorithm);
            cfg.partition = partition;
            cfg.seed = seed;
            cfg.height = height;
            cfg.sample_sizes = std::move(sample_sizes);
            const RunOutput out = run_dataset(trajs, cfg);
            py::list published;
            for (const auto& r : out.published) published.append(py::make_tuple(r.pseudonym, to_pairs(r.points)));
            return py::make_tuple(out.report.to_json(), published);
        },
        py::arg("trajectories"), py::arg("k") = 2, py::arg("algorithm") = "dbscan",
        py::arg("partition") = true, py::arg("seed") = 0, py::arg("height") = kDefaultHeight,
        py::arg("sample_sizes") = std::vector<std::size_t>{1, 2, 3, 5},
        "Runs the full pipeline; returns (report JSON, [(pseudonym, node pairs)]).");
    m.def(
        "run_config",
        [](const std::string& input, const std::string& format, const std::string& out_dir,
           std::size_t k, const std::string& algorithm, bool partition, std::uint64_t seed) {
            RunConfig cfg;
            cfg.input = input;
            cfg.format = parse_input_format(format);
            cfg.out_dir = out_dir;
            cfg.k = k;
            cfg.algorithm = parse_algorithm(algorithm);
            cfg.partition = partition;
            cfg.seed = seed;
            return run(cfg).to_json();
        },
        py::arg("input"), py::arg("format") = "csv", py::arg("out_dir") = "", py::arg("k") = 2,
        py::arg("algorithm") = "dbscan", py::arg("partition") = true, py::arg("seed") = 0,
        "Reads input from disk like the command line tool; returns the report JSON.");
    m.def(
        "compare",
        [](const std::string& a, const std::string& b) {
            const Comparison c = compare(RunReport::from_json(a), RunReport::from_json(b));
            return py::dict(py::arg("k") = c.k, py::arg("total_reduction_pct") = c.total_reduction_pct,
                            py::arg("per_cluster_reduction_pct") = c.per_cluster_reduction_pct);
        },
        py::arg("report_a"), py::arg("report_b"));
}
