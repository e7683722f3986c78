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

#include "icic/config.hpp"
#include "icic/coordinator.hpp"
#include "icic/experiments.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace icic;

namespace {

std::string csv(const Table& t)
{
    std::ostringstream s;
    t.write_csv(s);
    return s.str();
}

// "(A,B)" -> "(B,A)" for two-cell labels.
std::string swap_label(const std::string& label)
{
    const auto comma = label.find(',');
    return "(" + label.substr(comma + 1, label.size() - comma - 2) + "," +
           label.substr(1, comma - 1) + ")";
}

ExperimentConfig small(const std::string& experiment)
{
    ExperimentConfig cfg = ExperimentConfig::defaults(experiment);
    cfg.placements = 150;
    cfg.trials = 4000;
    cfg.grid_points = 6;
    return cfg;
}

} // namespace

TEST_CASE("key-value parsing")
{
    const KeyValueMap kv = parse_key_values("# comment\n  nt = 4 \n\np0_db=-5, 5\r\n");
    CHECK(kv.require("nt") == "4");
    CHECK(kv.get("p0_db") == std::optional<std::string>("-5, 5"));
    CHECK_FALSE(kv.get("alpha"));
    CHECK_THROWS_AS(kv.require("alpha"), std::invalid_argument);
    CHECK_THROWS_AS(parse_key_values("nt 4\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_key_values(" = 4\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_key_values("nt = 4\nnt = 5\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_key_values("/nonexistent/icic.cfg"), std::invalid_argument);

    CHECK(parse_double(" +2.5 ") == 2.5);
    CHECK(parse_int("-3") == -3);
    CHECK(parse_u64("18446744073709551615") == 18446744073709551615ULL);
    CHECK_THROWS_AS(parse_double("2.5x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_int("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_u64("-1"), std::invalid_argument);
    CHECK(parse_double_list("-10, 0,7.5") == std::vector<double>{-10, 0, 7.5});
    CHECK_THROWS_AS(parse_double_list(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_double_list("1,,2"), std::invalid_argument);
}

TEST_CASE("fnv1a64 reference values")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("defaults per experiment")
{
    for (const char* name : {"simvcalc", "regions", "compare3", "csicost", "feedback"}) {
        const ExperimentConfig cfg = ExperimentConfig::defaults(name);
        CHECK(cfg.experiment == name);
        CHECK_NOTHROW(cfg.validate());
    }
    CHECK(ExperimentConfig::defaults("simvcalc").layout == Layout::two_cell);
    CHECK(ExperimentConfig::defaults("regions").layout == Layout::two_cell);
    CHECK(ExperimentConfig::defaults("compare3").layout == Layout::three_cell);
    CHECK(ExperimentConfig::defaults("feedback").p0_db == std::vector<double>{0, 5, 10, 15});
    CHECK_THROWS_AS(ExperimentConfig::defaults("nosuch"), std::invalid_argument);
}

TEST_CASE("apply overrides and rejects unknown keys")
{
    ExperimentConfig cfg = ExperimentConfig::defaults("feedback");
    cfg.apply(parse_key_values("nt = 5\np0_db = 1,2\nallowed_pairs = 10:10, 4:13\nseed = 9\n"));
    CHECK(cfg.nt == 5);
    CHECK(cfg.p0_db == std::vector<double>{1, 2});
    CHECK(cfg.seed == 9);
    REQUIRE(cfg.allowed_pairs.size() == 2);
    CHECK(cfg.allowed_pairs[1] == std::pair<int, int>{4, 13});
    CHECK_NOTHROW(cfg.validate());

    CHECK_THROWS_AS(cfg.apply(parse_key_values("antennas = 4\n")), std::invalid_argument);
    CHECK_THROWS_AS(cfg.apply(parse_key_values("nt = four\n")), std::invalid_argument);
    CHECK_THROWS_AS(cfg.apply(parse_key_values("layout = hex\n")), std::invalid_argument);
    CHECK_THROWS_AS(cfg.apply(parse_key_values("allowed_pairs = 10-10\n")),
                    std::invalid_argument);
}

TEST_CASE("validate rejects inconsistent configs")
{
    auto rejects = [](const std::string& experiment, const std::string& text) {
        ExperimentConfig cfg = ExperimentConfig::defaults(experiment);
        cfg.apply(parse_key_values(text));
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    };
    rejects("compare3", "layout = two_cell\n");
    rejects("regions", "layout = three_cell\n");
    rejects("compare3", "nt = 2\n");
    rejects("compare3", "nt = 9\n");
    rejects("simvcalc", "nt = 1\n");
    rejects("compare3", "p0_db = 150\n");
    rejects("compare3", "alpha = 0\n");
    rejects("compare3", "placements = 0\n");
    rejects("compare3", "min_home_distance = 1\n");
    rejects("simvcalc", "user1_x = 0.1\n");
    rejects("simvcalc", "user2_x = 0.5, 1.2\n");
    rejects("simvcalc", "user2_x = 0\n");
    rejects("regions", "grid_points = 0\n");
    rejects("simvcalc", "bits = 21\n");
    rejects("simvcalc", "bits = -2\n");
    rejects("feedback", "delta_r = 1\n");
    rejects("feedback", "allowed_pairs = 10:11\n");
    rejects("feedback", "total_bits = 31\n");

    ExperimentConfig ok = ExperimentConfig::defaults("simvcalc");
    ok.apply(parse_key_values("nt = 2\nbits = 0\nallowed_pairs = 1:1\n"));
    CHECK_NOTHROW(ok.validate());  // pairs only matter for the feedback study

    ExperimentConfig bad = ExperimentConfig::defaults("compare3");
    bad.experiment = "nope";
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
}

TEST_CASE("canonical text round-trips and drives the hash")
{
    for (const char* name : {"simvcalc", "regions", "compare3", "csicost", "feedback"}) {
        ExperimentConfig cfg = ExperimentConfig::defaults(name);
        cfg.alpha = 3.25;
        cfg.p0_db = {-7.5, 0.125};
        cfg.seed = 1234567890123ULL;
        ExperimentConfig back = ExperimentConfig::defaults("compare3");
        back.apply(parse_key_values(cfg.canonical()));
        CHECK(back.canonical() == cfg.canonical());
        CHECK(back.hash() == cfg.hash());
    }

    const ExperimentConfig base = ExperimentConfig::defaults("compare3");
    ExperimentConfig other = base;
    other.out = "/tmp/somewhere.csv";
    CHECK(other.hash() == base.hash());
    std::set<std::uint64_t> hashes{base.hash()};
    other = base;
    other.nt = 5;
    hashes.insert(other.hash());
    other = base;
    other.seed = 2;
    hashes.insert(other.hash());
    other = base;
    other.p0_db.back() = 21;
    hashes.insert(other.hash());
    other = base;
    other.min_home_distance = 0.4;
    hashes.insert(other.hash());
    CHECK(hashes.size() == 5);
}

TEST_CASE("placement seeds are deterministic and distinct")
{
    CHECK(placement_seed(1, 0) == placement_seed(1, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 4; ++s) {
        for (std::uint64_t i = 0; i < 2000; ++i) {
            seen.insert(placement_seed(s, i));
        }
    }
    CHECK(seen.size() == 8000);
}

TEST_CASE("csv and gnuplot output")
{
    Table t;
    t.columns = {"config_hash", "p0_db", "a", "b"};
    t.rows = {{"00ff", "-5", "1.5", "2"}, {"00ff", "5", "3", "4"}};
    CHECK(csv(t) == "config_hash,p0_db,a,b\n00ff,-5,1.5,2\n00ff,5,3,4\n");

    const std::string script = gnuplot_script(t, "out.csv", "p0_db", {"a", "b"});
    CHECK(script.find("set datafile separator ','") != std::string::npos);
    CHECK(script.find("'out.csv' using 2:3") != std::string::npos);
    CHECK(script.find("'out.csv' using 2:4") != std::string::npos);
    CHECK_THROWS_AS(gnuplot_script(t, "out.csv", "p0_db", {"c"}), std::invalid_argument);
    CHECK_THROWS_AS(gnuplot_script(t, "out.csv", "x", {"a"}), std::invalid_argument);
}

TEST_CASE("sim vs calc agrees within the Monte Carlo interval")
{
    ExperimentConfig cfg = small("simvcalc");
    cfg.user2_x = {0.2, 0.6};
    cfg.trials = 20000;
    const auto rows = sim_vs_calc(cfg);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        REQUIRE(r.profiles.size() == 4);
        REQUIRE(r.mc_sum.size() == 4);
        for (std::size_t p = 0; p < 4; ++p) {
            CHECK(std::abs(r.mc_sum[p].mean - r.analytic_sum[p]) <= r.mc_sum[p].half_width(4.0));
        }
    }

    const Table t = run_sim_vs_calc(cfg);
    CHECK(t.columns.size() == 3 + 4 * 3);
    CHECK(t.columns[0] == "config_hash");
    CHECK(std::find(t.columns.begin(), t.columns.end(), "calc_IC_IC") != t.columns.end());
    CHECK(std::find(t.columns.begin(), t.columns.end(), "sim_ci95_BF_BF") != t.columns.end());
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][2] == "0.6");
    CHECK(csv(t) == csv(run_sim_vs_calc(cfg)));

    cfg.bits = 6;
    cfg.trials = 500;
    const Table fb = run_sim_vs_calc(cfg);
    CHECK(std::find(fb.columns.begin(), fb.columns.end(), "approx_IC_IC") != fb.columns.end());
    CHECK(fb.rows[0][0] != t.rows[0][0]);  // config hash differs

    ExperimentConfig wrong = small("regions");
    CHECK_THROWS_AS(sim_vs_calc(wrong), std::invalid_argument);
}

TEST_CASE("regions are symmetric under swapping the users")
{
    const ExperimentConfig cfg = small("regions");
    const auto cells = regions(cfg);
    const int n = cfg.grid_points;
    REQUIRE(cells.size() == cfg.p0_db.size() * static_cast<std::size_t>(n * n));
    for (std::size_t q = 0; q < cfg.p0_db.size(); ++q) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                const RegionCell& ab = cells[q * n * n + static_cast<std::size_t>(a * n + b)];
                const RegionCell& ba = cells[q * n * n + static_cast<std::size_t>(b * n + a)];
                CHECK(ab.p0_db == cfg.p0_db[q]);
                CHECK(ab.d1 == doctest::Approx((a + 0.5) / n));
                CHECK(ab.d2 == doctest::Approx((b + 0.5) / n));
                CHECK(swap_label(ab.profile.label()) == ba.profile.label());
                CHECK(ab.sum_rate == doctest::Approx(ba.sum_rate).epsilon(1e-12));
            }
        }
    }

    const Table t = run_regions(cfg);
    CHECK(t.columns == std::vector<std::string>{"config_hash", "p0_db", "x1", "x2", "profile",
                                                "sum_rate"});
    CHECK(t.rows.size() == cells.size());
    CHECK(t.rows[0][4].front() == '"');
}

TEST_CASE("three-cell comparison orders the schemes")
{
    ExperimentConfig cfg = small("compare3");
    cfg.p0_db = {-10, 5, 20};
    const auto rows = compare_3cell(cfg);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.adaptive.average >= r.no_icic.average - 1e-12);
        CHECK(r.adaptive.average >= r.static_icic.average - 1e-12);
        CHECK(r.adaptive.average >= r.distributed.average - 1e-12);
        CHECK(r.no_icic.csi_cost == 3.0);
        CHECK(r.static_icic.csi_cost == 9.0);
        CHECK(r.adaptive.csi_cost >= 3.0);
        CHECK(r.adaptive.csi_cost <= 9.0);
        CHECK(r.adaptive.average_ci > 0.0);
        CHECK(r.adaptive.pct5 <= r.adaptive.average);
    }
    // Noise-limited edge: cancelling everywhere wastes array gain.
    CHECK(rows[0].static_icic.average < rows[0].no_icic.average);
    // Interference-limited edge: adaptive cancels more often.
    CHECK(rows[2].adaptive.csi_cost > rows[0].adaptive.csi_cost);

    const Table t = run_compare_3cell(cfg);
    CHECK(t.columns.size() == 16);
    CHECK(t.columns.back() == "adaptive_gain_p5");
    CHECK(csv(t) == csv(run_compare_3cell(cfg)));

    ExperimentConfig cc = cfg;
    cc.experiment = "csicost";
    const Table costs = run_experiment(cc);
    REQUIRE(costs.rows.size() == 3);
    CHECK(costs.rows[0][2] == "3");
    CHECK(costs.rows[0][3] == "9");
}

TEST_CASE("doubling the ensemble moves the mean within its interval")
{
    ExperimentConfig cfg = small("compare3");
    cfg.p0_db = {5};
    cfg.placements = 400;
    const CompareRow a = compare_3cell(cfg).front();
    cfg.placements = 800;
    const CompareRow b = compare_3cell(cfg).front();
    CHECK(std::abs(a.adaptive.average - b.adaptive.average) <= a.adaptive.average_ci);
    CHECK(std::abs(a.no_icic.average - b.no_icic.average) <= a.no_icic.average_ci);
}

TEST_CASE("feedback study")
{
    ExperimentConfig cfg = small("feedback");
    cfg.placements = 60;
    cfg.p0_db = {5, 15};
    const auto rows = feedback_study(cfg);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.bstar == bstar_bits(db_to_linear(r.p0_db), cfg.nt, cfg.delta_r));
        for (const SystemMetrics* m : {&r.scaled_both, &r.scaled_helper, &r.uniform, &r.allocated}) {
            CHECK(m->average <= r.perfect.average + 1e-12);
        }
        CHECK(r.allocated.average >= r.uniform.average - 1e-12);
        CHECK(r.perfect.average >= r.no_icic.average - 1e-12);
    }
    CHECK(rows[1].bstar == 18);

    const Table t = run_feedback(cfg);
    CHECK(t.columns.size() == 3 + 12);
    CHECK(t.rows[1][2] == "18");
}

TEST_CASE("quick validation suite passes")
{
    std::ostringstream log;
    CHECK(run_validation(20000, 1, log));
    const std::string text = log.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
    CHECK(text.find("FAIL") == std::string::npos);
}
