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

#include "icic/network_model.hpp"

#include "icic/config.hpp"
#include "icic/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace icic {

double distance(Point a, Point b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

int cell_count(Layout layout)
{
    return layout == Layout::two_cell ? 2 : 3;
}

std::string to_string(Layout layout)
{
    return layout == Layout::two_cell ? "two_cell" : "three_cell";
}

Layout parse_layout(const std::string& text)
{
    if (text == "two_cell" || text == "2") {
        return Layout::two_cell;
    }
    if (text == "three_cell" || text == "3") {
        return Layout::three_cell;
    }
    throw std::invalid_argument("unknown layout '" + text + "'");
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear)
{
    return 10.0 * std::log10(linear);
}

std::vector<Point> base_station_positions(Layout layout, double r)
{
    if (layout == Layout::two_cell) {
        return {{-r, 0.0}, {r, 0.0}};
    }
    std::vector<Point> out;
    for (int k = 0; k < 3; ++k) {
        const double angle = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 3.0;
        out.push_back({r * std::cos(angle), r * std::sin(angle)});
    }
    return out;
}

double received_power(double d, double p0, double cell_radius, double alpha)
{
    if (!(d > 0.0)) {
        throw std::domain_error("received_power: user and BS are co-located");
    }
    return p0 * std::pow(cell_radius / d, alpha);
}

void Scenario::validate() const
{
    const int k = cells();
    if (k != cell_count(layout)) {
        throw std::invalid_argument("Scenario: BS count does not match layout");
    }
    if (static_cast<int>(user_positions.size()) != k) {
        throw std::invalid_argument("Scenario: exactly one user per cell is required");
    }
    if (!(cell_radius > 0.0)) {
        throw std::invalid_argument("Scenario: cell radius must be positive");
    }
    if (nt < 1) {
        throw std::invalid_argument("Scenario: nt must be >= 1");
    }
    const double slack = 1e-9 * cell_radius;
    for (int i = 0; i < k; ++i) {
        const Point u = user_positions[static_cast<std::size_t>(i)];
        const double home = distance(u, bs_positions[static_cast<std::size_t>(i)]);
        if (!(home > 0.0)) {
            throw std::invalid_argument("Scenario: user " + std::to_string(i + 1) + " sits on its BS");
        }
        if (home > cell_radius + slack) {
            throw std::invalid_argument("Scenario: user " + std::to_string(i + 1) +
                                        " lies outside its home cell");
        }
        for (int j = 0; j < k; ++j) {
            const double d = distance(u, bs_positions[static_cast<std::size_t>(j)]);
            if (!(d > 0.0)) {
                throw std::invalid_argument("Scenario: user " + std::to_string(i + 1) +
                                            " sits on BS " + std::to_string(j + 1));
            }
            if (d + slack < home) {
                throw std::invalid_argument("Scenario: user " + std::to_string(i + 1) +
                                            " is closer to BS " + std::to_string(j + 1) +
                                            " than to its home BS");
            }
        }
    }
}

LinkBudget make_link_budget(const Scenario& scenario, double p0_linear, double alpha)
{
    if (!(p0_linear > 0.0) || !std::isfinite(p0_linear)) {
        throw std::invalid_argument("make_link_budget: P0 must be positive and finite");
    }
    LinkBudget budget;
    budget.edge_snr_p0 = p0_linear;
    budget.cell_radius = scenario.cell_radius;
    budget.pathloss_exp = alpha;
    budget.cells = scenario.cells();
    budget.received_snr.reserve(static_cast<std::size_t>(budget.cells * budget.cells));
    for (const Point& u : scenario.user_positions) {
        for (const Point& b : scenario.bs_positions) {
            budget.received_snr.push_back(
                received_power(distance(u, b), p0_linear, scenario.cell_radius, alpha));
        }
    }
    return budget;
}

namespace {

// Uniform point in rhombus k: BS_k + s BS_j + t BS_l with s, t in [0, 1]
// (the BS positions sum to zero, so s = t = 1 is the common corner).
Point sample_rhombus(int k, const std::vector<Point>& bs, double r, const ShadowRegion& region,
                     CounterRng& rng)
{
    const Point home = bs[static_cast<std::size_t>(k)];
    const Point a = bs[static_cast<std::size_t>((k + 1) % 3)];
    const Point b = bs[static_cast<std::size_t>((k + 2) % 3)];
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double s = rng.uniform();
        const double t = rng.uniform();
        const Point p{home.x + s * a.x + t * b.x, home.y + s * a.y + t * b.y};
        const double d = distance(p, home);
        if (d >= region.min_home_distance * r && d > 0.0) {
            return p;
        }
    }
    throw std::invalid_argument("build_scenario: shadow region is empty");
}

} // namespace

BuiltScenario build_scenario(Layout layout, const PlacementSpec& placement, double p0_db,
                             double alpha, int nt, std::uint64_t seed, double cell_radius)
{
    Scenario sc;
    sc.layout = layout;
    sc.cell_radius = cell_radius;
    sc.nt = nt;
    sc.bs_positions = base_station_positions(layout, cell_radius);

    if (placement.mode == PlacementSpec::Mode::fixed) {
        if (static_cast<int>(placement.users.size()) != sc.cells()) {
            throw std::invalid_argument("build_scenario: need one fixed user per cell");
        }
        for (const Point& u : placement.users) {
            sc.user_positions.push_back({u.x * cell_radius, u.y * cell_radius});
        }
    } else {
        if (layout != Layout::three_cell) {
            throw std::invalid_argument(
                "build_scenario: random shadow placement needs the three-cell layout");
        }
        if (!(placement.shadow.min_home_distance >= 0.0 &&
              placement.shadow.min_home_distance < 1.0)) {
            throw std::invalid_argument("build_scenario: min_home_distance must be in [0, 1)");
        }
        CounterRng rng(seed, 0, 0x5eed);
        for (int k = 0; k < 3; ++k) {
            sc.user_positions.push_back(
                sample_rhombus(k, sc.bs_positions, cell_radius, placement.shadow, rng));
        }
    }
    sc.validate();
    return {sc, make_link_budget(sc, db_to_linear(p0_db), alpha)};
}

std::string serialize_scenario(const Scenario& sc)
{
    std::ostringstream out;
    out.precision(17);
    out << "# icic scenario\n";
    out << "layout = " << to_string(sc.layout) << "\n";
    out << "cell_radius = " << sc.cell_radius << "\n";
    out << "nt = " << sc.nt << "\n";
    for (std::size_t j = 0; j < sc.bs_positions.size(); ++j) {
        out << "bs." << j << " = " << sc.bs_positions[j].x << "," << sc.bs_positions[j].y << "\n";
    }
    for (std::size_t i = 0; i < sc.user_positions.size(); ++i) {
        out << "user." << i << " = " << sc.user_positions[i].x << "," << sc.user_positions[i].y
            << "\n";
    }
    return out.str();
}

namespace {

Point parse_point(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument("expected point 'x,y', got '" + text + "'");
    }
    return {parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1))};
}

} // namespace

Scenario parse_scenario(const std::string& text)
{
    const KeyValueMap kv = parse_key_values(text);
    Scenario sc;
    sc.layout = parse_layout(kv.require("layout"));
    sc.cell_radius = parse_double(kv.require("cell_radius"));
    sc.nt = parse_int(kv.require("nt"));
    const int k = cell_count(sc.layout);
    for (int j = 0; j < k; ++j) {
        sc.bs_positions.push_back(parse_point(kv.require("bs." + std::to_string(j))));
    }
    for (int i = 0; i < k; ++i) {
        sc.user_positions.push_back(parse_point(kv.require("user." + std::to_string(i))));
    }
    sc.validate();
    return sc;
}

} // namespace icic
