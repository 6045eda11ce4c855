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

// Batch front end: anonymize a trajectory dataset, compare two run reports,
// or generate a synthetic road-network corpus.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trajkanon/error.hpp"
#include "trajkanon/pipeline.hpp"
#include "trajkanon/synthetic.hpp"
#include "trajkanon/trajectory_io.hpp"

namespace {

trajkanon::BoundingBox parse_bbox(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) v.push_back(std::stod(part));
    if (v.size() != 4) throw trajkanon::ConfigError("--bbox expects lonmin,lonmax,latmin,latmax");
    trajkanon::BoundingBox box{v[0], v[1], v[2], v[3]};
    box.validate();
    return box;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace trajkanon;

    CLI::App app{"Trajectory k-anonymization by density partitioning and alignment clustering"};
    app.require_subcommand(0, 1);

    RunConfig cfg;
    std::string format = "csv";
    std::string bbox;
    std::string partition = "on";
    std::string algo = "dbscan";
    double d = 0.0;
    double epsilon0 = 0.0;
    std::string basis = "kdist";
    bool print_report = true;

    app.add_option("--input", cfg.input, "Input file or directory");
    app.add_option("--format", format, "Input format")
        ->check(CLI::IsMember({"plt-dir", "taxi-log", "csv"}))
        ->capture_default_str();
    app.add_option("--bbox", bbox, "Region lonmin,lonmax,latmin,latmax (default: Beijing study area)");
    app.add_option("--height", cfg.height, "Generalization tree height per axis")->capture_default_str();
    app.add_option("--k", cfg.k, "Anonymity parameter k")->capture_default_str();
    app.add_option("--min-len", cfg.min_len, "Drop trajectories shorter than this")->capture_default_str();
    app.add_option("--partition", partition, "Density partition preprocessing")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app.add_option("--d", d, "Auxiliary point spacing in degrees (default: bbox diagonal / 256)");
    app.add_option("--m", cfg.m, "Number of point clusters")->capture_default_str();
    app.add_option("--algo", algo, "Clustering algorithm")
        ->check(CLI::IsMember({"dbscan", "kmeans"}))
        ->capture_default_str();
    app.add_option("--epsilon0", epsilon0, "Initial DBSCAN radius in bits (default: first basis quantile)");
    app.add_option("--quantile-step", cfg.quantile_step, "DBSCAN quantile step per round")->capture_default_str();
    app.add_option("--epsilon-growth", cfg.epsilon_growth, "Minimum DBSCAN radius growth factor")
        ->capture_default_str();
    app.add_option("--epsilon-basis", basis, "Distances the radius quantiles are taken over")
        ->check(CLI::IsMember({"kdist", "pairs"}))
        ->capture_default_str();
    app.add_option("--sample-size", cfg.sample_sizes, "Attack sample sizes")->delimiter(',');
    app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    app.add_option("--out-dir", cfg.out_dir, "Output directory");
    app.add_option("--threads", cfg.threads, "Worker threads (0 = all)")->capture_default_str();
    app.add_flag("--labels", cfg.write_labels, "Also write labels.csv");
    app.add_flag("!--quiet", print_report, "Do not print the run report");

    auto* compare_cmd = app.add_subcommand("compare", "Loss reductions of report B relative to A");
    std::string report_a;
    std::string report_b;
    compare_cmd->add_option("a", report_a, "Baseline report.json")->required();
    compare_cmd->add_option("b", report_b, "Compared report.json")->required();

    auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic road-network corpus as CSV");
    RoadNetworkOptions gen;
    std::string gen_out;
    gen_cmd->add_option("--out", gen_out, "Output CSV")->required();
    gen_cmd->add_option("--trips", gen.trips, "Number of trips")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (compare_cmd->parsed()) {
            const auto a = RunReport::from_json(read_file(report_a));
            const auto b = RunReport::from_json(read_file(report_b));
            std::cout << compare(a, b).to_table();
            return 0;
        }
        if (gen_cmd->parsed()) {
            if (!bbox.empty()) gen.box = parse_bbox(bbox);
            const Grid grid = make_grid(gen.box, cfg.height);
            const auto trajs = build_dataset(road_network_streams(gen), gen.box, grid);
            std::ofstream out(gen_out, std::ios::binary);
            if (!out) throw Error("cannot write " + gen_out);
            write_trajectories_csv(out, trajs);
            std::cerr << "wrote " << trajs.size() << " trajectories to " << gen_out << '\n';
            return 0;
        }

        if (cfg.input.empty()) {
            std::cerr << "--input is required\n" << app.help();
            return 2;
        }
        cfg.format = parse_input_format(format);
        cfg.algorithm = parse_algorithm(algo);
        cfg.partition = partition == "on";
        if (!bbox.empty()) cfg.bbox = parse_bbox(bbox);
        if (app.count("--d") > 0) cfg.d = d;
        if (app.count("--epsilon0") > 0) cfg.epsilon0 = epsilon0;
        cfg.epsilon_basis = basis == "pairs" ? EpsilonBasis::PairDistance : EpsilonBasis::KDistance;

        const RunReport report = run(cfg);
        if (print_report) std::cout << report.to_json() << '\n';
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
