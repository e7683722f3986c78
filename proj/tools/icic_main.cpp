/*
   Copyright 2026 The ICIC Lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// icic: command-line front end. Every experiment subcommand writes CSV to
// --out (or stdout); `validate` runs the quick oracle suite.

#include "icic/config.hpp"
#include "icic/experiments.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
    std::optional<std::string> p0_db;
    std::optional<int> nt;
    std::optional<double> alpha;
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> placements;
    std::optional<double> min_home_distance;
    std::optional<int> bits;
    std::optional<std::string> user2_x;
    std::optional<int> grid_points;
    std::string out;
    std::string config;
    std::string gnuplot;
};

void add_common(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--p0-db", o.p0_db, "Edge SNR list in dB, e.g. --p0-db=-5,5,10");
    cmd->add_option("--nt", o.nt, "Transmit antennas per BS");
    cmd->add_option("--alpha", o.alpha, "Path loss exponent");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--placements", o.placements, "Random placements per P0");
    cmd->add_option("--min-home-distance", o.min_home_distance,
                    "Shadow region: minimum user-to-home-BS distance in units of R");
    cmd->add_option("--out", o.out, "CSV output path (default stdout)");
    cmd->add_option("--config", o.config, "key = value config file");
    cmd->add_option("--gnuplot", o.gnuplot, "Also write a gnuplot script here (needs --out)");
}

icic::ExperimentConfig build_config(const std::string& experiment, const Overrides& o)
{
    icic::ExperimentConfig cfg = icic::ExperimentConfig::defaults(experiment);
    if (!o.config.empty()) {
        cfg.apply(icic::load_key_values(o.config));
        if (cfg.experiment != experiment) {
            throw std::invalid_argument("config file is for '" + cfg.experiment +
                                        "', not '" + experiment + "'");
        }
    }
    if (o.p0_db) {
        cfg.p0_db = icic::parse_double_list(*o.p0_db);
    }
    if (o.nt) {
        cfg.nt = *o.nt;
    }
    if (o.alpha) {
        cfg.alpha = *o.alpha;
    }
    if (o.trials) {
        cfg.trials = *o.trials;
    }
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.placements) {
        cfg.placements = *o.placements;
    }
    if (o.min_home_distance) {
        cfg.min_home_distance = *o.min_home_distance;
    }
    if (o.bits) {
        cfg.bits = *o.bits;
    }
    if (o.user2_x) {
        cfg.user2_x = icic::parse_double_list(*o.user2_x);
    }
    if (o.grid_points) {
        cfg.grid_points = *o.grid_points;
    }
    if (!o.out.empty()) {
        cfg.out = o.out;
    }
    cfg.validate();
    return cfg;
}

void write_plot(const icic::ExperimentConfig& cfg, const icic::Table& table,
                const std::string& path)
{
    std::string x = "p0_db";
    std::vector<std::string> ys;
    if (cfg.experiment == "simvcalc") {
        x = "x2";
        for (const auto& c : table.columns) {
            if (c.rfind("calc_", 0) == 0 || c.rfind("approx_", 0) == 0 ||
                (c.rfind("sim_", 0) == 0 && c.rfind("sim_ci95", 0) != 0)) {
                ys.push_back(c);
            }
        }
    } else if (cfg.experiment == "regions") {
        x = "x1";
        ys = {"x2"};
    } else {
        for (std::size_t k = 2; k < table.columns.size(); ++k) {
            const auto& c = table.columns[k];
            if (c.find("ci95") == std::string::npos && c.find("gain") == std::string::npos &&
                c != "bstar") {
                ys.push_back(c);
            }
        }
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << icic::gnuplot_script(table, cfg.out, x, ys);
}

int run(const std::string& experiment, const Overrides& o)
{
    const icic::ExperimentConfig cfg = build_config(experiment, o);
    const icic::Table table = icic::run_experiment(cfg);
    if (cfg.out.empty()) {
        table.write_csv(std::cout);
    } else {
        std::ofstream out(cfg.out);
        if (!out) {
            throw std::runtime_error("cannot write '" + cfg.out + "'");
        }
        table.write_csv(out);
        std::cerr << "wrote " << table.rows.size() << " rows to " << cfg.out << "\n";
    }
    if (!o.gnuplot.empty()) {
        if (cfg.out.empty()) {
            throw std::invalid_argument("--gnuplot needs --out");
        }
        write_plot(cfg, table, o.gnuplot);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multicell downlink interference-cancellation lab"};
    app.require_subcommand(1);

    Overrides o;
    std::string chosen;
    for (const char* name : {"simvcalc", "regions", "compare3", "csicost", "feedback"}) {
        const std::string help =
            std::string(name) == "simvcalc"   ? "Two-cell closed form vs simulation sweep"
            : std::string(name) == "regions"  ? "Two-cell selected-profile map"
            : std::string(name) == "compare3" ? "Three-cell average / 5th-percentile comparison"
            : std::string(name) == "csicost"  ? "Three-cell CSI cost in channel directions"
                                              : "Three-cell limited-feedback designs";
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common(cmd, o);
        if (std::string(name) == "simvcalc") {
            cmd->add_option("--bits", o.bits, "Feedback bits per link (omit for perfect CSI)");
            cmd->add_option("--x2", o.user2_x, "User 2 positions in units of R, comma separated");
        }
        if (std::string(name) == "regions") {
            cmd->add_option("--grid", o.grid_points, "Grid points per axis");
        }
        cmd->callback([&chosen, name] { chosen = name; });
    }

    std::int64_t validate_trials = 20000;
    std::uint64_t validate_seed = 1;
    CLI::App* validate = app.add_subcommand("validate", "Run the quick oracle suite");
    validate->add_option("--trials", validate_trials, "Monte Carlo trials per geometry");
    validate->add_option("--seed", validate_seed, "Master seed");
    validate->callback([&chosen] { chosen = "validate"; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (chosen == "validate") {
            if (validate_trials < 2) {
                throw std::invalid_argument("--trials must be >= 2");
            }
            return icic::run_validation(validate_trials, validate_seed, std::cout) ? 0 : 1;
        }
        return run(chosen, o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "icic: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "icic: " << e.what() << "\n";
        return 1;
    }
}
