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

#include <functional>

namespace icic::numerics {

/// Tolerances for the adaptive Gauss-Kronrod oracle. A subinterval is
/// accepted once the global error estimate drops below
/// max(abs_tol, rel_tol * |value|).
struct QuadratureSpec {
    double abs_tol = 1e-14;
    double rel_tol = 1e-12;
    int max_subdivisions = 4000;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive G7/K15 on a finite interval [lo, hi].
QuadratureResult integrate(const Integrand& f, double lo, double hi,
                           const QuadratureSpec& spec = {});

/// Integral over [lo, inf) through x = lo + scale * t / (1 - t).
/// `scale` should be near the width of the integrand's bulk.
QuadratureResult integrate_to_infinity(const Integrand& f, double lo,
                                       const QuadratureSpec& spec = {},
                                       double scale = 1.0);

} // namespace icic::numerics
