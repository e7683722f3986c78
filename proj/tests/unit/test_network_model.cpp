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
#include "icic/network_model.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace icic;

namespace {

BuiltScenario fixed(Layout layout, std::vector<Point> users, double p0_db = 10.0)
{
    PlacementSpec spec;
    spec.users = std::move(users);
    return build_scenario(layout, spec, p0_db, 3.7, 4, 1);
}

BuiltScenario random_three_cell(std::uint64_t seed, double rho = 0.5)
{
    PlacementSpec spec;
    spec.mode = PlacementSpec::Mode::random_shadow;
    spec.shadow.min_home_distance = rho;
    return build_scenario(Layout::three_cell, spec, 10.0, 3.7, 4, seed);
}

} // namespace

TEST_CASE("path loss examples")
{
    CHECK(received_power(1000.0, 3.0, 1000.0, 3.7) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(received_power(2000.0, 1.0, 1000.0, 3.7) == doctest::Approx(0.0769).epsilon(1e-3));
    CHECK(received_power(2000.0, 1.0, 1000.0, 3.7) == doctest::Approx(std::exp2(-3.7)));
    CHECK(received_power(300.0, 1.0, 1000.0, 3.7) > received_power(301.0, 1.0, 1000.0, 3.7));
    CHECK_THROWS_AS(received_power(0.0, 1.0, 1000.0, 3.7), std::domain_error);
}

TEST_CASE("decibel conversions")
{
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(db_to_linear(-5.0) == doctest::Approx(std::pow(10.0, -0.5)));
    for (double db : {-40.0, -3.0, 0.0, 7.5, 20.0}) {
        CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-13));
    }
}

TEST_CASE("layouts")
{
    CHECK(cell_count(Layout::two_cell) == 2);
    CHECK(cell_count(Layout::three_cell) == 3);
    CHECK(parse_layout(to_string(Layout::two_cell)) == Layout::two_cell);
    CHECK(parse_layout(to_string(Layout::three_cell)) == Layout::three_cell);
    CHECK_THROWS_AS(parse_layout("hexagon"), std::invalid_argument);

    const auto two = base_station_positions(Layout::two_cell, 1000.0);
    CHECK(two[0].x == -1000.0);
    CHECK(two[1].x == 1000.0);

    const auto three = base_station_positions(Layout::three_cell, 1000.0);
    REQUIRE(three.size() == 3);
    for (int j = 0; j < 3; ++j) {
        CHECK(distance(three[j], {0.0, 0.0}) == doctest::Approx(1000.0));
        CHECK(distance(three[j], three[(j + 1) % 3]) ==
              doctest::Approx(2000.0 * std::cos(std::numbers::pi / 6.0)));
    }
}

TEST_CASE("two-cell axis geometry")
{
    const auto b = fixed(Layout::two_cell, {{-0.1, 0.0}, {0.4, 0.0}}).budget;
    const double p0 = 10.0;
    CHECK(b(0, 0) == doctest::Approx(p0 * std::pow(1.0 / 0.9, 3.7)));
    CHECK(b(0, 1) == doctest::Approx(p0 * std::pow(1.0 / 1.1, 3.7)));
    CHECK(b(1, 0) == doctest::Approx(p0 * std::pow(1.0 / 1.4, 3.7)));
    CHECK(b(1, 1) == doctest::Approx(p0 * std::pow(1.0 / 0.6, 3.7)));
    CHECK(b.cells == 2);
    CHECK(b.edge_snr_p0 == doctest::Approx(p0));
}

TEST_CASE("symmetric placements give a symmetric budget")
{
    const auto b = fixed(Layout::two_cell, {{-0.3, 0.0}, {0.3, 0.0}}).budget;
    CHECK(b(0, 0) == doctest::Approx(b(1, 1)).epsilon(1e-15));
    CHECK(b(0, 1) == doctest::Approx(b(1, 0)).epsilon(1e-15));

    // Users on the three BS rays at equal distance from the centre.
    const auto bs = base_station_positions(Layout::three_cell, 1.0);
    std::vector<Point> users;
    for (const auto& p : bs) {
        users.push_back({0.4 * p.x, 0.4 * p.y});
    }
    const auto c = fixed(Layout::three_cell, users).budget;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(c(i, j) == doctest::Approx(c(j, i)).epsilon(1e-13));
            if (i != j) {
                CHECK(c(i, j) == doctest::Approx(c(0, 1)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("random placements are deterministic per seed")
{
    const auto a = random_three_cell(42);
    const auto b = random_three_cell(42);
    const auto c = random_three_cell(43);
    CHECK(serialize_scenario(a.scenario) == serialize_scenario(b.scenario));
    CHECK(a.budget.received_snr == b.budget.received_snr);
    CHECK(a.budget.received_snr != c.budget.received_snr);
}

TEST_CASE("generated scenarios respect the home-cell rules")
{
    for (double rho : {0.0, 0.5, 0.9}) {
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const auto built = random_three_cell(seed, rho);
            const auto& sc = built.scenario;
            const auto& b = built.budget;
            for (int i = 0; i < 3; ++i) {
                const Point u = sc.user_positions[i];
                const double home = distance(u, sc.bs_positions[i]);
                CHECK(home >= rho * sc.cell_radius);
                CHECK(home <= sc.cell_radius * (1 + 1e-12));
                for (int j = 0; j < 3; ++j) {
                    const double d = distance(u, sc.bs_positions[j]);
                    CHECK(d >= home);
                    CHECK(std::isfinite(b(i, j)));
                    CHECK(b(i, j) > 0.0);
                    CHECK(b(i, j) == doctest::Approx(10.0 * std::pow(sc.cell_radius / d, 3.7))
                                         .epsilon(1e-13));
                }
            }
        }
    }
}

TEST_CASE("unrestricted shadow placement is uniform over the home rhombus")
{
    // The rhombus BS_k, BS_k + BS_j, 0, BS_k + BS_l has its centroid at BS_k / 2.
    const int n = 4000;
    double mx[3] = {0, 0, 0};
    double my[3] = {0, 0, 0};
    for (int s = 0; s < n; ++s) {
        const auto built = random_three_cell(1000 + s, 0.0);
        for (int i = 0; i < 3; ++i) {
            mx[i] += built.scenario.user_positions[i].x / n;
            my[i] += built.scenario.user_positions[i].y / n;
        }
    }
    const auto bs = base_station_positions(Layout::three_cell, 1000.0);
    for (int i = 0; i < 3; ++i) {
        // Coordinate std is below R / 2, so 5 sigma of the mean is < 0.04 R.
        CHECK(std::abs(mx[i] - 0.5 * bs[i].x) < 40.0);
        CHECK(std::abs(my[i] - 0.5 * bs[i].y) < 40.0);
    }
}

TEST_CASE("invalid placements are rejected")
{
    CHECK_THROWS_AS(fixed(Layout::two_cell, {{0.3, 0.0}, {0.4, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fixed(Layout::two_cell, {{-2.5, 0.0}, {0.4, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fixed(Layout::two_cell, {{-1.0, 0.0}, {0.4, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fixed(Layout::two_cell, {{-0.3, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(random_three_cell(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(random_three_cell(1, -0.1), std::invalid_argument);

    PlacementSpec spec;
    spec.mode = PlacementSpec::Mode::random_shadow;
    CHECK_THROWS_AS(build_scenario(Layout::two_cell, spec, 0.0, 3.7, 4, 1),
                    std::invalid_argument);

    Scenario sc = fixed(Layout::two_cell, {{-0.3, 0.0}, {0.4, 0.0}}).scenario;
    CHECK_THROWS_AS(make_link_budget(sc, 0.0, 3.7), std::invalid_argument);
    CHECK_THROWS_AS(make_link_budget(sc, std::numeric_limits<double>::infinity(), 3.7),
                    std::invalid_argument);
}

TEST_CASE("scenario text form round-trips")
{
    const auto built = random_three_cell(7);
    const std::string text = serialize_scenario(built.scenario);
    const Scenario back = parse_scenario(text);
    CHECK(serialize_scenario(back) == text);
    CHECK(back.nt == built.scenario.nt);
    for (int i = 0; i < 3; ++i) {
        CHECK(back.user_positions[i].x == built.scenario.user_positions[i].x);
        CHECK(back.user_positions[i].y == built.scenario.user_positions[i].y);
    }
    CHECK(make_link_budget(back, 10.0, 3.7).received_snr == built.budget.received_snr);

    CHECK_THROWS_AS(parse_scenario("layout = two_cell\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario(text + "user.0 = 5\n"), std::invalid_argument);
}
