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

#include <cstdint>
#include <string>
#include <vector>

namespace icic {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

enum class Layout { two_cell, three_cell };

int cell_count(Layout layout);
std::string to_string(Layout layout);
Layout parse_layout(const std::string& text);

double db_to_linear(double db);
double linear_to_db(double linear);

/// One active user per cell; user i is served by BS i.
///
/// Two cells: BSs at (-R, 0) and (R, 0), shared edge through the origin.
/// Three cells: BSs on the circle of radius R around the common cell corner
/// at the origin, 120 degrees apart (BS k at angle 90 + 120 k degrees), so
/// neighbouring BSs are sqrt(3) R apart.
struct Scenario {
    Layout layout = Layout::two_cell;
    double cell_radius = 1000.0;
    std::vector<Point> bs_positions;
    std::vector<Point> user_positions;
    int nt = 4;

    int cells() const { return static_cast<int>(bs_positions.size()); }

    /// Throws std::invalid_argument unless every user is at nonzero distance
    /// from every BS, has its own BS as (one of) the nearest, and lies within
    /// the cell radius of it.
    void validate() const;
};

/// Average received SNRs P^r_{i,j} = P0 (R / d_{i,j})^alpha, noise at unit
/// power.
struct LinkBudget {
    double edge_snr_p0 = 1.0;  // linear
    double cell_radius = 1000.0;
    double pathloss_exp = 3.7;
    int cells = 0;
    std::vector<double> received_snr;  // row-major (user, bs)

    double operator()(int user, int bs) const
    {
        return received_snr[static_cast<std::size_t>(user * cells + bs)];
    }
};

std::vector<Point> base_station_positions(Layout layout, double cell_radius);

/// P0 (R / d)^alpha. Throws std::domain_error for d <= 0.
double received_power(double distance, double p0, double cell_radius, double alpha);

LinkBudget make_link_budget(const Scenario& scenario, double p0_linear, double alpha);

/// The three-cell "inner area" served jointly by the cluster: the hexagon of
/// radius R centred on the common corner, split into one rhombus per cell
/// (BS k, the two corners it shares with its neighbours, and the centre).
/// Users closer than `min_home_distance * R` to their BS are excluded.
struct ShadowRegion {
    double min_home_distance = 0.5;
};

struct PlacementSpec {
    enum class Mode { fixed, random_shadow };
    Mode mode = Mode::fixed;
    /// Fixed user positions in units of R (fixed mode only).
    std::vector<Point> users;
    ShadowRegion shadow;
};

struct BuiltScenario {
    Scenario scenario;
    LinkBudget budget;
};

/// Deterministic in (spec, seed). Random mode draws one user uniformly from
/// each cell's share of the shadow region.
BuiltScenario build_scenario(Layout layout, const PlacementSpec& placement, double p0_db,
                             double alpha, int nt, std::uint64_t seed,
                             double cell_radius = 1000.0);

/// Plain-text `key = value` form, one entry per line, `#` comments.
/// Keys: layout, cell_radius, nt, bs.<i>, user.<i> (points as "x,y" in meters).
std::string serialize_scenario(const Scenario& scenario);
Scenario parse_scenario(const std::string& text);

} // namespace icic
