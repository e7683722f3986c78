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

#include "icic/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace icic::numerics {

namespace {

// Kronrod 15-point abscissae (positive half) and weights; the Gauss 7-point
// rule uses every other node.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const Integrand& f, double lo, double hi)
{
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(centre);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * pair;
        }
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

} // namespace

void QuadratureSpec::validate() const
{
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
        throw std::invalid_argument(
            "QuadratureSpec: tolerances must be positive and "
            "max_subdivisions >= 1");
    }
}

QuadratureResult integrate(const Integrand& f, double lo, double hi,
                           const QuadratureSpec& spec)
{
    spec.validate();
    if (!(hi > lo)) {
        return {0.0, 0.0, 0, true};
    }

    std::priority_queue<Segment> heap;
    Segment first = kronrod15(f, lo, hi);
    double total = first.value;
    double total_error = first.error;
    heap.push(first);
    int subdivisions = 1;

    while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (subdivisions >= spec.max_subdivisions) {
            return {total, total_error, subdivisions, false};
        }
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // interval collapsed to floating-point resolution
            return {total, total_error, subdivisions, false};
        }
        const Segment left = kronrod15(f, worst.lo, mid);
        const Segment right = kronrod15(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    // Re-sum to shed the drift accumulated by incremental updates.
    double value = 0.0;
    double error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return {value, error, subdivisions, true};
}

QuadratureResult integrate_to_infinity(const Integrand& f, double lo,
                                       const QuadratureSpec& spec, double scale)
{
    if (!(scale > 0.0)) {
        throw std::invalid_argument("integrate_to_infinity: scale must be > 0");
    }
    auto mapped = [&](double t) {
        const double one_minus = 1.0 - t;
        const double x = lo + scale * t / one_minus;
        const double jac = scale / (one_minus * one_minus);
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx * jac;
    };
    return integrate(mapped, 0.0, 1.0, spec);
}

} // namespace icic::numerics
