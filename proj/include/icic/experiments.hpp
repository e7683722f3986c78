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

#pragma once

#include "icic/config.hpp"
#include "icic/mc_simulator.hpp"
#include "icic/network_model.hpp"
#include "icic/strategy.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace icic {

/// Everything an experiment run depends on. The canonical text form (and
/// its hash) is written next to every output row.
struct ExperimentConfig {
    std::string experiment = "compare3";
    Layout layout = Layout::three_cell;
    std::vector<double> p0_db{-10, -5, 0, 5, 10, 15, 20};
    double alpha = 3.7;
    int nt = 4;
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;
    int placements = 2000;
    double cell_radius = 1000.0;
    double min_home_distance = 0.5;

    // Two-cell sweeps, positions in units of R.
    double user1_x = -0.1;
    std::vector<double> user2_x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int grid_points = 20;  // per axis, cell centres of (0, 1)

    // Feedback. bits < 0 means perfect CSI.
    int bits = -1;
    double delta_r = 2.0;
    int fixed_home_bits = 6;
    int total_bits = 30;
    std::vector<std::pair<int, int>> allowed_pairs{{10, 10}, {8, 11}, {6, 12}, {4, 13}, {2, 14}};

    std::string out;

    /// Defaults for one experiment id (simvcalc, regions, compare3, csicost,
    /// feedback).
    static ExperimentConfig defaults(const std::string& experiment);

    /// Overrides fields from `key = value` entries; unknown keys are an error.
    void apply(const KeyValueMap& kv);

    /// Throws std::invalid_argument on any inconsistency.
    void validate() const;

    /// Stable `key = value` text of every field except `out`.
    std::string canonical() const;
    std::uint64_t hash() const;
};

/// Seed of placement `index` in an ensemble.
std::uint64_t placement_seed(std::uint64_t seed, std::uint64_t index);

/// A CSV table: header mandatory, comma separated, '.' decimals.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void write_csv(std::ostream& out) const;
};

/// Gnuplot script that plots `csv_path` (one curve per y column).
std::string gnuplot_script(const Table& table, const std::string& csv_path,
                           const std::string& x_column, const std::vector<std::string>& y_columns);

// ---- structured results --------------------------------------------------

struct SimVsCalcRow {
    double p0_db = 0.0;
    double x2 = 0.0;
    std::vector<StrategyProfile> profiles;
    std::vector<double> analytic_sum;   // closed form (or the feedback approximation)
    std::vector<McEstimate> mc_sum;
};

std::vector<SimVsCalcRow> sim_vs_calc(const ExperimentConfig& cfg);

struct RegionCell {
    double p0_db = 0.0;
    double d1 = 0.0;  // user 1 at (-d1 R, 0)
    double d2 = 0.0;  // user 2 at (d2 R, 0)
    StrategyProfile profile;
    double sum_rate = 0.0;
};

std::vector<RegionCell> regions(const ExperimentConfig& cfg);

struct SystemMetrics {
    double average = 0.0;      // per-cell mean over placements
    double average_ci = 0.0;   // 95% half width
    double pct5 = 0.0;         // 5th percentile of per-user rates
    double csi_cost = 0.0;     // mean channel directions per cluster
};

struct CompareRow {
    double p0_db = 0.0;
    SystemMetrics no_icic;
    SystemMetrics static_icic;
    SystemMetrics adaptive;
    SystemMetrics distributed;
};

/// Three-cell ensemble comparison (perfect CSI, closed-form rates).
std::vector<CompareRow> compare_3cell(const ExperimentConfig& cfg);

struct FeedbackRow {
    double p0_db = 0.0;
    int bstar = 0;
    SystemMetrics perfect;        // adaptive, perfect CSI
    SystemMetrics no_icic;        // all beamforming, perfect CSI
    SystemMetrics scaled_both;    // B_s = B_I = B*
    SystemMetrics scaled_helper;  // B_s fixed, B_I = B*
    SystemMetrics uniform;        // the first allowed pair (10, 10)
    SystemMetrics allocated;      // adaptive bit allocation over allowed pairs
};

std::vector<FeedbackRow> feedback_study(const ExperimentConfig& cfg);

// ---- CSV front ends ------------------------------------------------------

Table run_sim_vs_calc(const ExperimentConfig& cfg);
Table run_regions(const ExperimentConfig& cfg);
Table run_compare_3cell(const ExperimentConfig& cfg);
Table run_csi_cost(const ExperimentConfig& cfg);
Table run_feedback(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
Table run_experiment(const ExperimentConfig& cfg);

/// Quick oracle suite behind `icic validate`: closed forms against the
/// quadrature oracle, Monte Carlo against closed forms on one two-cell and
/// one three-cell geometry, and the exact feedback-scaling values. Prints
/// one line per check; true if all pass.
bool run_validation(std::int64_t trials, std::uint64_t seed, std::ostream& log);

} // namespace icic
