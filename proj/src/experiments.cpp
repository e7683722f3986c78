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

#include "icic/experiments.hpp"

#include "icic/coordinator.hpp"
#include "icic/numerics.hpp"
#include "icic/rate_engine.hpp"
#include "icic/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace icic {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string hex(std::uint64_t v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string join(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        out += (k ? "," : "") + fmt(values[k]);
    }
    return out;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text)
{
    std::vector<std::pair<int, int>> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("allowed_pairs: expected 'Bs:BI' items, got '" + item + "'");
        }
        out.emplace_back(parse_int(item.substr(0, colon)), parse_int(item.substr(colon + 1)));
    }
    return out;
}

// Runs body(k) for k in [0, n) across threads; rethrows the first failure
// (lowest k) after the loop.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body)
{
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < n; ++k) {
        try {
            body(k);
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

bool needs_two_cells(const std::string& e)
{
    return e == "simvcalc" || e == "regions";
}

std::vector<BuiltScenario> shadow_ensemble(const ExperimentConfig& cfg, double p0_db)
{
    PlacementSpec spec;
    spec.mode = PlacementSpec::Mode::random_shadow;
    spec.shadow.min_home_distance = cfg.min_home_distance;
    std::vector<BuiltScenario> out;
    out.reserve(static_cast<std::size_t>(cfg.placements));
    for (int p = 0; p < cfg.placements; ++p) {
        out.push_back(build_scenario(Layout::three_cell, spec, p0_db, cfg.alpha, cfg.nt,
                                     placement_seed(cfg.seed, static_cast<std::uint64_t>(p)),
                                     cfg.cell_radius));
    }
    return out;
}

// Per-placement reports of one system, reduced to the published metrics.
SystemMetrics summarize_reports(const std::vector<RateReport>& reports)
{
    std::vector<double> per_user;
    std::vector<double> per_placement;
    double cost = 0.0;
    for (const auto& r : reports) {
        per_user.insert(per_user.end(), r.user_rates.begin(), r.user_rates.end());
        per_placement.push_back(r.sum_rate / static_cast<double>(r.user_rates.size()));
        cost += r.csi_cost;
    }
    SystemMetrics m;
    const stats::Summary s = stats::summarize(per_placement);
    m.average = s.mean;
    m.average_ci = s.half_width_95;
    m.pct5 = stats::percentile(per_user, 5.0);
    m.csi_cost = reports.empty() ? 0.0 : cost / static_cast<double>(reports.size());
    return m;
}

// "(BF,IC)" -> "BF_IC", safe inside a CSV header.
std::string column_label(const StrategyProfile& p)
{
    std::string out;
    for (char c : p.label()) {
        if (c == ',') {
            out += '_';
        } else if (c != '(' && c != ')') {
            out += c;
        }
    }
    return out;
}

std::string config_column(const ExperimentConfig& cfg)
{
    return hex(cfg.hash());
}

} // namespace

// ---- ExperimentConfig ----------------------------------------------------

ExperimentConfig ExperimentConfig::defaults(const std::string& experiment)
{
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    if (experiment == "simvcalc") {
        cfg.layout = Layout::two_cell;
        cfg.p0_db = {10};
    } else if (experiment == "regions") {
        cfg.layout = Layout::two_cell;
        cfg.p0_db = {-5, 5, 10};
    } else if (experiment == "compare3" || experiment == "csicost") {
        cfg.layout = Layout::three_cell;
    } else if (experiment == "feedback") {
        cfg.layout = Layout::three_cell;
        cfg.p0_db = {0, 5, 10, 15};
    } else {
        throw std::invalid_argument("unknown experiment '" + experiment + "'");
    }
    return cfg;
}

void ExperimentConfig::apply(const KeyValueMap& kv)
{
    for (const auto& [key, value] : kv.entries()) {
        if (key == "experiment") {
            experiment = value;
        } else if (key == "layout") {
            layout = parse_layout(value);
        } else if (key == "p0_db") {
            p0_db = parse_double_list(value);
        } else if (key == "alpha") {
            alpha = parse_double(value);
        } else if (key == "nt") {
            nt = parse_int(value);
        } else if (key == "trials") {
            trials = static_cast<std::int64_t>(parse_u64(value));
        } else if (key == "seed") {
            seed = parse_u64(value);
        } else if (key == "placements") {
            placements = parse_int(value);
        } else if (key == "cell_radius") {
            cell_radius = parse_double(value);
        } else if (key == "min_home_distance") {
            min_home_distance = parse_double(value);
        } else if (key == "user1_x") {
            user1_x = parse_double(value);
        } else if (key == "user2_x") {
            user2_x = parse_double_list(value);
        } else if (key == "grid_points") {
            grid_points = parse_int(value);
        } else if (key == "bits") {
            bits = parse_int(value);
        } else if (key == "delta_r") {
            delta_r = parse_double(value);
        } else if (key == "fixed_home_bits") {
            fixed_home_bits = parse_int(value);
        } else if (key == "total_bits") {
            total_bits = parse_int(value);
        } else if (key == "allowed_pairs") {
            allowed_pairs = parse_pairs(value);
        } else if (key == "out") {
            out = value;
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (experiment != "simvcalc" && experiment != "regions" && experiment != "compare3" &&
        experiment != "csicost" && experiment != "feedback") {
        fail("unknown experiment '" + experiment + "'");
    }
    if (needs_two_cells(experiment) != (layout == Layout::two_cell)) {
        fail(experiment + " needs the " + (needs_two_cells(experiment) ? "two" : "three") +
             "-cell layout");
    }
    if (p0_db.empty()) {
        fail("p0_db is empty");
    }
    for (double p : p0_db) {
        if (!std::isfinite(p) || p < -100.0 || p > 100.0) {
            fail("p0_db values must lie in [-100, 100] dB");
        }
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        fail("alpha must be positive");
    }
    const int min_nt = layout == Layout::two_cell ? 2 : 3;
    if (nt < min_nt || nt > kMaxAntennas) {
        fail("nt must be in [" + std::to_string(min_nt) + ", " + std::to_string(kMaxAntennas) +
             "] for " + experiment);
    }
    if (trials < 1) {
        fail("trials must be >= 1");
    }
    if (placements < 1) {
        fail("placements must be >= 1");
    }
    if (!(cell_radius > 0.0) || !std::isfinite(cell_radius)) {
        fail("cell_radius must be positive");
    }
    if (!(min_home_distance >= 0.0 && min_home_distance < 1.0)) {
        fail("min_home_distance must be in [0, 1)");
    }
    if (!(user1_x >= -1.0 && user1_x < 0.0)) {
        fail("user1_x must be in [-1, 0)");
    }
    if (user2_x.empty()) {
        fail("user2_x is empty");
    }
    for (double x : user2_x) {
        if (!(x > 0.0 && x <= 1.0)) {
            fail("user2_x values must be in (0, 1]");
        }
    }
    if (grid_points < 1 || grid_points > 1000) {
        fail("grid_points must be in [1, 1000]");
    }
    if (bits < -1 || bits > 20) {
        fail("bits must be -1 (perfect CSI) or in [0, 20]");
    }
    if (!(delta_r > 1.0) || !std::isfinite(delta_r)) {
        fail("delta_r must exceed 1");
    }
    if (fixed_home_bits < 0) {
        fail("fixed_home_bits must be >= 0");
    }
    if (experiment != "feedback") {
        return;
    }
    if (allowed_pairs.empty()) {
        fail("allowed_pairs is empty");
    }
    const int helpers = cell_count(layout) - 1;
    for (const auto& [bs, bi] : allowed_pairs) {
        if (bs < 0 || bi < 0 || bs + helpers * bi != total_bits) {
            fail("allowed pair (" + std::to_string(bs) + "," + std::to_string(bi) +
                 ") does not meet the total bit budget");
        }
    }
}

std::string ExperimentConfig::canonical() const
{
    std::string pairs;
    for (std::size_t k = 0; k < allowed_pairs.size(); ++k) {
        pairs += (k ? "," : "") + std::to_string(allowed_pairs[k].first) + ":" +
                 std::to_string(allowed_pairs[k].second);
    }
    std::ostringstream s;
    s << "experiment = " << experiment << "\n"
      << "layout = " << to_string(layout) << "\n"
      << "p0_db = " << join(p0_db) << "\n"
      << "alpha = " << fmt(alpha) << "\n"
      << "nt = " << nt << "\n"
      << "trials = " << trials << "\n"
      << "seed = " << seed << "\n"
      << "placements = " << placements << "\n"
      << "cell_radius = " << fmt(cell_radius) << "\n"
      << "min_home_distance = " << fmt(min_home_distance) << "\n"
      << "user1_x = " << fmt(user1_x) << "\n"
      << "user2_x = " << join(user2_x) << "\n"
      << "grid_points = " << grid_points << "\n"
      << "bits = " << bits << "\n"
      << "delta_r = " << fmt(delta_r) << "\n"
      << "fixed_home_bits = " << fixed_home_bits << "\n"
      << "total_bits = " << total_bits << "\n"
      << "allowed_pairs = " << pairs << "\n";
    return s.str();
}

std::uint64_t ExperimentConfig::hash() const
{
    return fnv1a64(canonical());
}

std::uint64_t placement_seed(std::uint64_t seed, std::uint64_t index)
{
    // splitmix64 finalizer over (seed, index)
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// ---- Table ---------------------------------------------------------------

void Table::write_csv(std::ostream& out) const
{
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << columns[c];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << row[c];
        }
        out << "\n";
    }
}

std::string gnuplot_script(const Table& table, const std::string& csv_path,
                           const std::string& x_column, const std::vector<std::string>& y_columns)
{
    auto index_of = [&](const std::string& name) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (table.columns[c] == name) {
                return static_cast<int>(c) + 1;
            }
        }
        throw std::invalid_argument("gnuplot_script: no column '" + name + "'");
    };
    std::ostringstream s;
    s << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel '" << x_column << "'\n"
      << "plot ";
    const int x = index_of(x_column);
    for (std::size_t k = 0; k < y_columns.size(); ++k) {
        s << (k ? ", \\\n     " : "") << "'" << csv_path << "' using " << x << ":"
          << index_of(y_columns[k]) << " with linespoints";
    }
    s << "\n";
    return s.str();
}

// ---- experiments ---------------------------------------------------------

std::vector<SimVsCalcRow> sim_vs_calc(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.experiment != "simvcalc") {
        throw std::invalid_argument("sim_vs_calc: config is for '" + cfg.experiment + "'");
    }
    std::optional<FeedbackConfig> fb;
    if (cfg.bits >= 0) {
        fb = FeedbackConfig::uniform(2, cfg.bits, cfg.bits);
    }
    std::vector<SimVsCalcRow> rows;
    std::uint64_t index = 0;
    for (double p0 : cfg.p0_db) {
        for (double x2 : cfg.user2_x) {
            PlacementSpec spec;
            spec.users = {{cfg.user1_x, 0.0}, {x2, 0.0}};
            const BuiltScenario b =
                build_scenario(Layout::two_cell, spec, p0, cfg.alpha, cfg.nt, cfg.seed,
                               cfg.cell_radius);
            SimVsCalcRow row;
            row.p0_db = p0;
            row.x2 = x2;
            row.profiles = enumerate_profiles(b.budget, cfg.nt);
            for (const auto& p : row.profiles) {
                row.analytic_sum.push_back(
                    evaluate_profile(p, b.budget, cfg.nt, fb ? &*fb : nullptr).sum_rate);
            }
            McConfig mc;
            mc.trials = cfg.trials;
            mc.seed = placement_seed(cfg.seed, index++);
            row.mc_sum = mc_ergodic_batch(b.budget, cfg.nt, row.profiles, fb ? &*fb : nullptr, mc).sum;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<RegionCell> regions(const ExperimentConfig& cfg)
{
    cfg.validate();
    const int n = cfg.grid_points;
    std::vector<RegionCell> cells(cfg.p0_db.size() * static_cast<std::size_t>(n * n));
    parallel_for(static_cast<std::int64_t>(cells.size()), [&](std::int64_t k) {
        const auto idx = static_cast<std::size_t>(k);
        const double p0 = cfg.p0_db[idx / static_cast<std::size_t>(n * n)];
        const int a = static_cast<int>(idx % static_cast<std::size_t>(n * n)) / n;
        const int b = static_cast<int>(idx % static_cast<std::size_t>(n));
        RegionCell cell;
        cell.p0_db = p0;
        cell.d1 = (a + 0.5) / n;
        cell.d2 = (b + 0.5) / n;
        PlacementSpec spec;
        spec.users = {{-cell.d1, 0.0}, {cell.d2, 0.0}};
        const BuiltScenario s =
            build_scenario(Layout::two_cell, spec, p0, cfg.alpha, cfg.nt, cfg.seed, cfg.cell_radius);
        const RateReport r = select_joint(s.budget, cfg.nt);
        cell.profile = r.profile;
        cell.sum_rate = r.sum_rate;
        cells[idx] = std::move(cell);
    });
    return cells;
}

std::vector<CompareRow> compare_3cell(const ExperimentConfig& cfg)
{
    cfg.validate();
    std::vector<CompareRow> rows;
    for (double p0 : cfg.p0_db) {
        const auto ensemble = shadow_ensemble(cfg, p0);
        const std::size_t n = ensemble.size();
        std::vector<RateReport> none(n), all(n), adaptive(n), distributed(n);
        parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t k) {
            const auto i = static_cast<std::size_t>(k);
            const LinkBudget& b = ensemble[i].budget;
            none[i] = evaluate_profile(all_beamforming(3), b, cfg.nt);
            all[i] = evaluate_profile(all_cancel(3), b, cfg.nt);
            adaptive[i] = select_joint(b, cfg.nt);
            distributed[i] = evaluate_profile(select_distributed(b, cfg.nt), b, cfg.nt);
        });
        rows.push_back({p0, summarize_reports(none), summarize_reports(all),
                        summarize_reports(adaptive), summarize_reports(distributed)});
    }
    return rows;
}

std::vector<FeedbackRow> feedback_study(const ExperimentConfig& cfg)
{
    cfg.validate();
    std::vector<FeedbackRow> rows;
    for (double p0 : cfg.p0_db) {
        FeedbackRow row;
        row.p0_db = p0;
        row.bstar = bstar_bits(db_to_linear(p0), cfg.nt, cfg.delta_r);
        const FeedbackConfig both = FeedbackConfig::uniform(3, row.bstar, row.bstar);
        const FeedbackConfig helper = FeedbackConfig::uniform(3, cfg.fixed_home_bits, row.bstar);
        const FeedbackConfig uniform =
            FeedbackConfig::uniform(3, cfg.allowed_pairs.front().first,
                                    cfg.allowed_pairs.front().second);

        const auto ensemble = shadow_ensemble(cfg, p0);
        const std::size_t n = ensemble.size();
        std::vector<RateReport> perfect(n), none(n), r_both(n), r_helper(n), r_uniform(n), r_alloc(n);
        parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t k) {
            const auto i = static_cast<std::size_t>(k);
            const LinkBudget& b = ensemble[i].budget;
            perfect[i] = select_joint(b, cfg.nt);
            none[i] = evaluate_profile(all_beamforming(3), b, cfg.nt);
            r_both[i] = select_joint(b, cfg.nt, &both);
            r_helper[i] = select_joint(b, cfg.nt, &helper);
            r_uniform[i] = select_joint(b, cfg.nt, &uniform);
            r_alloc[i] = allocate_bits(b, cfg.nt, cfg.total_bits, cfg.allowed_pairs).report;
        });
        row.perfect = summarize_reports(perfect);
        row.no_icic = summarize_reports(none);
        row.scaled_both = summarize_reports(r_both);
        row.scaled_helper = summarize_reports(r_helper);
        row.uniform = summarize_reports(r_uniform);
        row.allocated = summarize_reports(r_alloc);
        rows.push_back(row);
    }
    return rows;
}

// ---- CSV front ends ------------------------------------------------------

Table run_sim_vs_calc(const ExperimentConfig& cfg)
{
    const auto rows = sim_vs_calc(cfg);
    Table t;
    t.columns = {"config_hash", "p0_db", "x2"};
    const std::string tag = cfg.bits >= 0 ? "approx" : "calc";
    if (!rows.empty()) {
        for (const auto& p : rows.front().profiles) {
            const std::string l = column_label(p);
            t.columns.push_back(tag + "_" + l);
            t.columns.push_back("sim_" + l);
            t.columns.push_back("sim_ci95_" + l);
        }
    }
    for (const auto& r : rows) {
        std::vector<std::string> line{config_column(cfg), fmt(r.p0_db), fmt(r.x2)};
        for (std::size_t p = 0; p < r.profiles.size(); ++p) {
            line.push_back(fmt(r.analytic_sum[p]));
            line.push_back(fmt(r.mc_sum[p].mean));
            line.push_back(fmt(r.mc_sum[p].half_width_95));
        }
        t.rows.push_back(std::move(line));
    }
    return t;
}

Table run_regions(const ExperimentConfig& cfg)
{
    Table t;
    t.columns = {"config_hash", "p0_db", "x1", "x2", "profile", "sum_rate"};
    for (const auto& c : regions(cfg)) {
        t.rows.push_back({config_column(cfg), fmt(c.p0_db), fmt(c.d1), fmt(c.d2),
                          "\"" + c.profile.label() + "\"", fmt(c.sum_rate)});
    }
    return t;
}

Table run_compare_3cell(const ExperimentConfig& cfg)
{
    Table t;
    t.columns = {"config_hash",      "p0_db",          "no_icic_avg",     "no_icic_ci95",
                 "no_icic_p5",       "static_avg",     "static_ci95",     "static_p5",
                 "adaptive_avg",     "adaptive_ci95",  "adaptive_p5",     "distributed_avg",
                 "distributed_ci95", "distributed_p5", "adaptive_gain_avg", "adaptive_gain_p5"};
    for (const auto& r : compare_3cell(cfg)) {
        std::vector<std::string> line{config_column(cfg), fmt(r.p0_db)};
        for (const SystemMetrics* m : {&r.no_icic, &r.static_icic, &r.adaptive, &r.distributed}) {
            line.push_back(fmt(m->average));
            line.push_back(fmt(m->average_ci));
            line.push_back(fmt(m->pct5));
        }
        line.push_back(fmt(r.adaptive.average / r.no_icic.average - 1.0));
        line.push_back(fmt(r.adaptive.pct5 / r.no_icic.pct5 - 1.0));
        t.rows.push_back(std::move(line));
    }
    return t;
}

Table run_csi_cost(const ExperimentConfig& cfg)
{
    Table t;
    t.columns = {"config_hash", "p0_db", "no_icic", "static_icic", "adaptive_icic",
                 "distributed_icic"};
    for (const auto& r : compare_3cell(cfg)) {
        t.rows.push_back({config_column(cfg), fmt(r.p0_db), fmt(r.no_icic.csi_cost),
                          fmt(r.static_icic.csi_cost), fmt(r.adaptive.csi_cost),
                          fmt(r.distributed.csi_cost)});
    }
    return t;
}

Table run_feedback(const ExperimentConfig& cfg)
{
    Table t;
    t.columns = {"config_hash", "p0_db", "bstar"};
    for (const char* name :
         {"perfect", "no_icic", "scaled_both", "scaled_helper", "uniform", "allocated"}) {
        t.columns.push_back(std::string(name) + "_avg");
        t.columns.push_back(std::string(name) + "_p5");
    }
    for (const auto& r : feedback_study(cfg)) {
        std::vector<std::string> line{config_column(cfg), fmt(r.p0_db), std::to_string(r.bstar)};
        for (const SystemMetrics* m : {&r.perfect, &r.no_icic, &r.scaled_both, &r.scaled_helper,
                                       &r.uniform, &r.allocated}) {
            line.push_back(fmt(m->average));
            line.push_back(fmt(m->pct5));
        }
        t.rows.push_back(std::move(line));
    }
    return t;
}

Table run_experiment(const ExperimentConfig& cfg)
{
    if (cfg.experiment == "simvcalc") {
        return run_sim_vs_calc(cfg);
    }
    if (cfg.experiment == "regions") {
        return run_regions(cfg);
    }
    if (cfg.experiment == "compare3") {
        return run_compare_3cell(cfg);
    }
    if (cfg.experiment == "csicost") {
        return run_csi_cost(cfg);
    }
    if (cfg.experiment == "feedback") {
        return run_feedback(cfg);
    }
    throw std::invalid_argument("unknown experiment '" + cfg.experiment + "'");
}

bool run_validation(std::int64_t trials, std::uint64_t seed, std::ostream& log)
{
    bool all = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        log << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        all = all && ok;
    };

    // Closed forms against direct quadrature.
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> log_snr(std::log(0.1), std::log(100.0));
    std::uniform_int_distribution<int> dof(1, 6);
    double worst = 0.0;
    for (int k = 0; k < 30; ++k) {
        const double a = std::exp(log_snr(gen));
        const double d1 = std::exp(log_snr(gen));
        const double d2 = std::exp(log_snr(gen));
        const int m = dof(gen);
        const std::vector<double> p1{a, static_cast<double>(m)};
        const std::vector<double> p2{a, d1, static_cast<double>(m)};
        const std::vector<double> p3{a, d1, d2, static_cast<double>(m)};
        using numerics::DensityKind;
        const double o1 = numerics::expected_log_oracle(DensityKind::pure_gamma, p1).value;
        const double o2 = numerics::expected_log_oracle(DensityKind::gamma_ratio_1, p2).value;
        const double o3 = numerics::expected_log_oracle(DensityKind::gamma_ratio_2, p3).value;
        worst = std::max({worst, std::abs(rate_bf(a, m) - o1) / o1,
                          std::abs(rate_i2(a, d1, m) - o2) / o2,
                          std::abs(rate_i3(a, d1, d2, m) - o3) / o3});
    }
    report("closed_form_vs_quadrature", worst <= 1e-7,
           "worst relative error " + fmt(worst) + " over 90 rates (limit 1e-7)");

    // Monte Carlo against closed forms, z = 4 per check.
    auto mc_check = [&](const std::string& name, const BuiltScenario& b, int nt) {
        const auto profiles = enumerate_profiles(b.budget, nt);
        McConfig mc;
        mc.trials = trials;
        mc.seed = seed;
        const McBatchResult res = mc_ergodic_batch(b.budget, nt, profiles, nullptr, mc);
        double worst_z = 0.0;
        for (std::size_t p = 0; p < profiles.size(); ++p) {
            for (int i = 0; i < b.budget.cells; ++i) {
                const McEstimate& e = res.user[p][static_cast<std::size_t>(i)];
                const double se = e.half_width(1.0);
                const double z = se > 0.0 ? std::abs(e.mean - user_rate(profiles[p], b.budget, nt, i)) / se
                                          : 0.0;
                worst_z = std::max(worst_z, z);
            }
        }
        report(name, worst_z < 4.0,
               std::to_string(profiles.size()) + " profiles, " + std::to_string(trials) +
                   " trials, max |z| " + fmt(worst_z) + " (limit 4)");
    };
    PlacementSpec two;
    two.users = {{-0.1, 0.0}, {0.4, 0.0}};
    mc_check("mc_vs_closed_form_2cell", build_scenario(Layout::two_cell, two, 10.0, 3.7, 4, seed), 4);
    PlacementSpec three;
    three.mode = PlacementSpec::Mode::random_shadow;
    mc_check("mc_vs_closed_form_3cell",
             build_scenario(Layout::three_cell, three, 10.0, 3.7, 4, seed), 4);

    const int bstar = bstar_bits(db_to_linear(15.0), 4, 2.0);
    report("bstar_15dB", bstar == 18, "B* = " + std::to_string(bstar) + " (expected 18)");
    const double kappa = residual_kappa(18, 4);
    report("kappa_18_bits", kappa == 0.015625, "kappa = " + fmt(kappa) + " (expected 2^-6)");
    return all;
}

} // namespace icic
